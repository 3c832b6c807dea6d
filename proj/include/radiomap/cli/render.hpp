#ifndef RADIOMAP_CLI_RENDER_HPP
#define RADIOMAP_CLI_RENDER_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "radiomap/binary_io.hpp"
#include "radiomap/error.hpp"
#include "radiomap/scene.hpp"
#include "radiomap/scene_io.hpp"

namespace radiomap::cli {

/// 8-bit grayscale image with the dB range it was rendered from.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<int> pixels;  // row-major, 0..255
  std::optional<double> vmin;
  std::optional<double> vmax;
};

/// Linear map of [vmin, vmax] onto [0, 255], rounded, clamped outside.
inline int gray_level(double v, double vmin, double vmax) {
  const double x = std::round((v - vmin) / (vmax - vmin) * 255.0);
  return static_cast<int>(std::clamp(x, 0.0, 255.0));
}

inline GrayImage render_image(const RasterGrid& grid, double vmin, double vmax) {
  require(std::isfinite(vmin) && std::isfinite(vmax) && vmin < vmax, ErrorCategory::invalid_parameter,
          "render range needs finite vmin < vmax");
  GrayImage img{grid.width(), grid.height(), {}, vmin, vmax};
  img.pixels.reserve(grid.size());
  for (float v : grid.values()) {
    require(std::isfinite(v), ErrorCategory::non_finite, "cannot render a non-finite value");
    img.pixels.push_back(gray_level(v, vmin, vmax));
  }
  return img;
}

/// Plain-text P2 graymap. The dB range travels in a `# range` comment.
inline std::string encode_pgm(const GrayImage& img) {
  std::string out = "P2\n";
  if (img.vmin && img.vmax) out += "# range " + format_double(*img.vmin) + " " + format_double(*img.vmax) + "\n";
  out += std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      if (c) out += ' ';
      out += std::to_string(img.pixels[static_cast<std::size_t>(r) * img.width + c]);
    }
    out += '\n';
  }
  return out;
}

inline GrayImage decode_pgm(const std::string& text) {
  GrayImage img;
  std::istringstream in(text);
  std::string tok;
  std::vector<long> header;
  auto next = [&]() -> bool {
    while (in >> tok) {
      if (tok[0] != '#') return true;
      std::string rest;
      std::getline(in, rest);
      std::istringstream meta(rest);
      std::string kind;
      double lo, hi;
      if (tok == "#" && meta >> kind && kind == "range" && meta >> lo >> hi) {
        img.vmin = lo;
        img.vmax = hi;
      }
    }
    return false;
  };
  if (!next() || tok != "P2") fail(ErrorCategory::corrupt_file, "not a plain-text graymap");
  for (int i = 0; i < 3; ++i) {
    if (!next()) fail(ErrorCategory::corrupt_file, "truncated graymap header");
    try {
      header.push_back(std::stol(tok));
    } catch (const std::exception&) {
      fail(ErrorCategory::corrupt_file, "bad graymap header value '" + tok + "'");
    }
  }
  if (header[0] <= 0 || header[1] <= 0 || header[2] != 255)
    fail(ErrorCategory::corrupt_file, "unsupported graymap geometry or depth");
  img.width = static_cast<int>(header[0]);
  img.height = static_cast<int>(header[1]);
  const auto n = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  img.pixels.reserve(n);
  while (img.pixels.size() < n && next()) {
    int v = -1;
    try {
      v = std::stoi(tok);
    } catch (const std::exception&) {
    }
    if (v < 0 || v > 255) fail(ErrorCategory::corrupt_file, "bad graymap pixel '" + tok + "'");
    img.pixels.push_back(v);
  }
  if (img.pixels.size() != n) fail(ErrorCategory::corrupt_file, "truncated graymap data");
  if (next()) fail(ErrorCategory::corrupt_file, "trailing data after graymap pixels");
  return img;
}

inline void render_map(const RasterGrid& grid, double vmin, double vmax, const std::filesystem::path& path) {
  write_file_atomic(path, encode_pgm(render_image(grid, vmin, vmax)));
}

inline GrayImage read_pgm(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return decode_pgm(std::string(bytes.begin(), bytes.end()));
}

}  // namespace radiomap::cli

#endif  // RADIOMAP_CLI_RENDER_HPP
