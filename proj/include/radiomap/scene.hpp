#ifndef RADIOMAP_SCENE_HPP
#define RADIOMAP_SCENE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "radiomap/error.hpp"

namespace radiomap {

struct Pixel {
  int col = 0;
  int row = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Row-major single-channel raster. Values are stored as f32 so that the
/// on-disk container round-trips bit-exactly.
class RasterGrid {
 public:
  RasterGrid() = default;

  RasterGrid(int width, int height, double resolution = 5.0, float fill = 0.0f)
      : width_(width), height_(height), resolution_(resolution) {
    require(width >= 3 && height >= 3, ErrorCategory::invalid_parameter,
            "raster must be at least 3x3, got " + std::to_string(width) + "x" +
                std::to_string(height));
    require(resolution > 0.0 && std::isfinite(resolution), ErrorCategory::invalid_parameter,
            "raster resolution must be positive");
    values_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }
  bool contains(int col, int row) const {
    return col >= 0 && row >= 0 && col < width_ && row < height_;
  }

  float& at(int col, int row) { return values_[index(col, row)]; }
  float at(int col, int row) const { return values_[index(col, row)]; }
  float& operator[](std::size_t i) { return values_[i]; }
  float operator[](std::size_t i) const { return values_[i]; }

  std::vector<float>& values() { return values_; }
  const std::vector<float>& values() const { return values_; }

  bool same_geometry(const RasterGrid& other) const {
    return width_ == other.width_ && height_ == other.height_ &&
           resolution_ == other.resolution_;
  }

  friend bool operator==(const RasterGrid&, const RasterGrid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 5.0;
  std::vector<float> values_;
};

enum class GroundType : int { empty = 0, building = 5, water = 6, vegetation = 7 };

inline bool is_valid_ground_code(float code) {
  return code == 0.0f || code == 5.0f || code == 6.0f || code == 7.0f;
}

inline float ground_code(GroundType t) { return static_cast<float>(static_cast<int>(t)); }

/// Attenuation (dB, >= 0) per degree of horizontal offset from the azimuth
/// and per degree of vertical offset from the tilt. Horizontal index k covers
/// offset k degrees clockwise; vertical index k covers offset (k - 90)
/// degrees, so boresight is horiz[0] and vert[kVerticalBoresight].
struct AntennaPattern {
  static constexpr int kHorizontalSize = 360;
  static constexpr int kVerticalSize = 180;
  static constexpr int kVerticalBoresight = 90;

  std::vector<float> horiz_att_db = std::vector<float>(kHorizontalSize, 0.0f);
  std::vector<float> vert_att_db = std::vector<float>(kVerticalSize, 0.0f);

  friend bool operator==(const AntennaPattern&, const AntennaPattern&) = default;
};

inline AntennaPattern isotropic_pattern() { return {}; }

/// Parabolic sector pattern, clipped at the given front-to-back ratios.
inline AntennaPattern sector_pattern(double horiz_beamwidth_deg = 65.0, double horiz_max_db = 25.0,
                                     double vert_beamwidth_deg = 10.0, double vert_max_db = 20.0) {
  AntennaPattern p;
  for (int k = 0; k < AntennaPattern::kHorizontalSize; ++k) {
    const double off = k <= 180 ? k : k - 360;
    const double att = 12.0 * (off / horiz_beamwidth_deg) * (off / horiz_beamwidth_deg);
    p.horiz_att_db[k] = static_cast<float>(std::min(att, horiz_max_db));
  }
  for (int k = 0; k < AntennaPattern::kVerticalSize; ++k) {
    const double off = k - AntennaPattern::kVerticalBoresight;
    const double att = 12.0 * (off / vert_beamwidth_deg) * (off / vert_beamwidth_deg);
    p.vert_att_db[k] = static_cast<float>(std::min(att, vert_max_db));
  }
  return p;
}

struct AntennaConfig {
  Pixel pixel;
  double height_m = 30.0;
  double freq_mhz = 2600.0;
  double eirp_dbm = 60.0;
  double azimuth_deg = 0.0;  // clockwise from north (north = decreasing row)
  double tilt_deg = 0.0;     // downward
  AntennaPattern pattern;

  friend bool operator==(const AntennaConfig&, const AntennaConfig&) = default;
};

inline Pixel center_pixel(int width, int height) { return {width / 2, height / 2}; }

struct Scene {
  RasterGrid obstacle_height;
  RasterGrid ground_height;
  RasterGrid ground_type;
  AntennaConfig antenna;
  std::string site_id;

  int width() const { return ground_type.width(); }
  int height() const { return ground_type.height(); }
  double resolution() const { return ground_type.resolution(); }

  friend bool operator==(const Scene&, const Scene&) = default;
};

/// Builds an empty flat scene with the antenna at the grid center.
inline Scene empty_scene(int width, int height, double resolution = 5.0,
                         std::string site_id = "site") {
  Scene s;
  s.obstacle_height = RasterGrid(width, height, resolution);
  s.ground_height = RasterGrid(width, height, resolution);
  s.ground_type = RasterGrid(width, height, resolution);
  s.antenna.pixel = center_pixel(width, height);
  s.site_id = std::move(site_id);
  return s;
}

inline void validate(const AntennaPattern& p) {
  require(p.horiz_att_db.size() == AntennaPattern::kHorizontalSize &&
              p.vert_att_db.size() == AntennaPattern::kVerticalSize,
          ErrorCategory::invalid_parameter, "antenna pattern has wrong table sizes");
  for (float v : p.horiz_att_db)
    require(v >= 0.0f && std::isfinite(v), ErrorCategory::invalid_parameter,
            "antenna attenuation must be finite and >= 0");
  for (float v : p.vert_att_db)
    require(v >= 0.0f && std::isfinite(v), ErrorCategory::invalid_parameter,
            "antenna attenuation must be finite and >= 0");
  require(p.horiz_att_db[0] == 0.0f &&
              p.vert_att_db[AntennaPattern::kVerticalBoresight] == 0.0f,
          ErrorCategory::invalid_parameter, "antenna pattern must be 0 dB at boresight");
}

inline void validate(const Scene& s) {
  const auto& t = s.ground_type;
  require(t.width() >= 3 && t.height() >= 3, ErrorCategory::invalid_parameter,
          "scene grid must be at least 3x3");
  require(s.obstacle_height.same_geometry(t) && s.ground_height.same_geometry(t),
          ErrorCategory::invalid_parameter, "scene rasters disagree on geometry");
  require(s.antenna.pixel == center_pixel(t.width(), t.height()),
          ErrorCategory::invalid_parameter, "antenna must sit at the grid center");
  require(s.antenna.freq_mhz > 0.0 && s.antenna.height_m > 0.0, ErrorCategory::invalid_parameter,
          "antenna frequency and height must be positive");
  require(std::isfinite(s.antenna.eirp_dbm) && std::isfinite(s.antenna.azimuth_deg) &&
              std::isfinite(s.antenna.tilt_deg),
          ErrorCategory::invalid_parameter, "antenna scalars must be finite");
  validate(s.antenna.pattern);
  for (std::size_t i = 0; i < t.size(); ++i) {
    require(is_valid_ground_code(t[i]), ErrorCategory::invalid_parameter,
            "invalid ground type code " + std::to_string(t[i]));
    require(s.obstacle_height[i] >= 0.0f && std::isfinite(s.obstacle_height[i]),
            ErrorCategory::invalid_parameter, "obstacle height must be >= 0");
    require(std::isfinite(s.ground_height[i]), ErrorCategory::invalid_parameter,
            "ground height must be finite");
    require(t[i] != 0.0f || s.obstacle_height[i] == 0.0f, ErrorCategory::invalid_parameter,
            "obstacle height must be 0 on empty ground");
  }
}

/// Quarter turn of a square raster: the value at (col, row) moves to
/// (n - 1 - row, col).
inline RasterGrid rot90(const RasterGrid& g) {
  require(g.width() == g.height(), ErrorCategory::shape, "rot90 needs a square raster");
  const int n = g.width();
  RasterGrid out(n, n, g.resolution());
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out.at(n - 1 - r, c) = g.at(c, r);
  return out;
}

/// Quarter turn of every raster of an odd-sized square scene about its
/// centered antenna. The antenna azimuth turns with it.
inline Scene rot90(const Scene& s) {
  require(s.width() == s.height() && s.width() % 2 == 1, ErrorCategory::shape,
          "rot90 needs an odd-sized square scene");
  Scene out = s;
  out.obstacle_height = rot90(s.obstacle_height);
  out.ground_height = rot90(s.ground_height);
  out.ground_type = rot90(s.ground_type);
  out.antenna.azimuth_deg = std::fmod(s.antenna.azimuth_deg + 90.0, 360.0);
  return out;
}

struct Measurement {
  int col = 0;
  int row = 0;
  double rsrp_db = 0.0;

  friend bool operator==(const Measurement&, const Measurement&) = default;
};

struct MeasurementSet {
  std::vector<Measurement> points;
  std::string site_id;

  friend bool operator==(const MeasurementSet&, const MeasurementSet&) = default;
};

inline void validate(const MeasurementSet& ms, int width, int height) {
  std::vector<char> seen(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
  for (const auto& m : ms.points) {
    require(m.col >= 0 && m.row >= 0 && m.col < width && m.row < height,
            ErrorCategory::invalid_parameter,
            "measurement (" + std::to_string(m.col) + "," + std::to_string(m.row) +
                ") outside " + std::to_string(width) + "x" + std::to_string(height) + " grid");
    require(std::isfinite(m.rsrp_db), ErrorCategory::invalid_parameter,
            "measurement value must be finite");
    auto& flag = seen[static_cast<std::size_t>(m.row) * width + m.col];
    require(!flag, ErrorCategory::invalid_parameter, "duplicate measurement pixel");
    flag = 1;
  }
}

}  // namespace radiomap

#endif  // RADIOMAP_SCENE_HPP
