#ifndef RADIOMAP_SCENE_IO_HPP
#define RADIOMAP_SCENE_IO_HPP

// Scene container layout (all integers and floats little-endian):
//
//   char[4]  magic "RGNN"
//   u16      format version (kSceneFormatVersion)
//   u32      width
//   u32      height
//   f64      resolution (m/pixel)
//   u32 + n  site id (length-prefixed UTF-8)
//   u32      antenna col
//   u32      antenna row
//   f64      antenna height_m, freq_mhz, eirp_dbm, azimuth_deg, tilt_deg
//   f32[360] horizontal pattern attenuation (dB)
//   f32[180] vertical pattern attenuation (dB)
//   f32[W*H] obstacle height, row-major
//   f32[W*H] ground height, row-major
//   f32[W*H] ground type code, row-major
//
// Measurements travel separately as CSV with header `col,row,rsrp_db`.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include "radiomap/binary_io.hpp"
#include "radiomap/error.hpp"
#include "radiomap/scene.hpp"

namespace radiomap {

inline constexpr char kSceneMagic[] = "RGNN";
inline constexpr std::uint16_t kSceneFormatVersion = 1;

inline ByteWriter encode_scene(const Scene& scene) {
  validate(scene);
  ByteWriter w;
  w.magic({kSceneMagic, 4});
  w.u16(kSceneFormatVersion);
  w.u32(static_cast<std::uint32_t>(scene.width()));
  w.u32(static_cast<std::uint32_t>(scene.height()));
  w.f64(scene.resolution());
  w.str(scene.site_id);
  const auto& a = scene.antenna;
  w.u32(static_cast<std::uint32_t>(a.pixel.col));
  w.u32(static_cast<std::uint32_t>(a.pixel.row));
  w.f64(a.height_m);
  w.f64(a.freq_mhz);
  w.f64(a.eirp_dbm);
  w.f64(a.azimuth_deg);
  w.f64(a.tilt_deg);
  w.f32_array(a.pattern.horiz_att_db);
  w.f32_array(a.pattern.vert_att_db);
  w.f32_array(scene.obstacle_height.values());
  w.f32_array(scene.ground_height.values());
  w.f32_array(scene.ground_type.values());
  return w;
}

inline Scene decode_scene(std::vector<unsigned char> bytes, const std::string& what = "scene") {
  ByteReader r(std::move(bytes), what);
  r.expect_magic({kSceneMagic, 4});
  const auto version = r.u16();
  if (version != kSceneFormatVersion)
    fail(ErrorCategory::version_mismatch, what + ": format version " + std::to_string(version) +
                                              ", expected " + std::to_string(kSceneFormatVersion));
  const auto width = r.u32();
  const auto height = r.u32();
  const double resolution = r.f64();
  if (width < 3 || height < 3 || width > 1u << 15 || height > 1u << 15 || !(resolution > 0.0))
    fail(ErrorCategory::corrupt_file, what + ": implausible grid geometry");

  Scene s = empty_scene(static_cast<int>(width), static_cast<int>(height), resolution);
  s.site_id = r.str();
  auto& a = s.antenna;
  a.pixel.col = static_cast<int>(r.u32());
  a.pixel.row = static_cast<int>(r.u32());
  a.height_m = r.f64();
  a.freq_mhz = r.f64();
  a.eirp_dbm = r.f64();
  a.azimuth_deg = r.f64();
  a.tilt_deg = r.f64();
  a.pattern.horiz_att_db = r.f32_array(AntennaPattern::kHorizontalSize);
  a.pattern.vert_att_db = r.f32_array(AntennaPattern::kVerticalSize);
  const std::size_t n = static_cast<std::size_t>(width) * height;
  s.obstacle_height.values() = r.f32_array(n);
  s.ground_height.values() = r.f32_array(n);
  s.ground_type.values() = r.f32_array(n);
  r.expect_end();
  try {
    validate(s);
  } catch (const Error& e) {
    fail(ErrorCategory::corrupt_file, what + ": " + e.what());
  }
  return s;
}

inline void save_scene(const Scene& scene, const std::filesystem::path& path) {
  write_file_atomic(path, encode_scene(scene));
}

inline Scene load_scene(const std::filesystem::path& path) {
  return decode_scene(read_file_bytes(path), path.string());
}

/// Shortest decimal text that parses back to the identical double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string measurements_to_csv(const MeasurementSet& ms) {
  std::string out = "col,row,rsrp_db\n";
  for (const auto& m : ms.points)
    out += std::to_string(m.col) + "," + std::to_string(m.row) + "," + format_double(m.rsrp_db) + "\n";
  return out;
}

inline MeasurementSet measurements_from_csv(const std::string& text, std::string site_id = {},
                                            const std::string& what = "measurements") {
  MeasurementSet ms;
  ms.site_id = std::move(site_id);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCategory::corrupt_file, what + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "col,row,rsrp_db")
    fail(ErrorCategory::corrupt_file, what + ": expected header col,row,rsrp_db");

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Measurement m;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    auto bad = [&] {
      fail(ErrorCategory::corrupt_file, what + ":" + std::to_string(line_no) + ": malformed row");
    };
    auto r1 = std::from_chars(p, end, m.col);
    if (r1.ec != std::errc() || r1.ptr == end || *r1.ptr != ',') bad();
    auto r2 = std::from_chars(r1.ptr + 1, end, m.row);
    if (r2.ec != std::errc() || r2.ptr == end || *r2.ptr != ',') bad();
    auto r3 = std::from_chars(r2.ptr + 1, end, m.rsrp_db);
    if (r3.ec != std::errc() || r3.ptr != end) bad();
    ms.points.push_back(m);
  }
  return ms;
}

inline void save_measurements(const MeasurementSet& ms, const std::filesystem::path& path) {
  write_file_atomic(path, measurements_to_csv(ms));
}

inline MeasurementSet load_measurements(const std::filesystem::path& path, std::string site_id = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return measurements_from_csv(ss.str(), std::move(site_id), path.string());
}

}  // namespace radiomap

#endif  // RADIOMAP_SCENE_IO_HPP
