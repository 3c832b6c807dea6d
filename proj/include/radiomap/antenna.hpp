#ifndef RADIOMAP_ANTENNA_HPP
#define RADIOMAP_ANTENNA_HPP

#include <algorithm>
#include <cmath>
#include <numbers>

#include "radiomap/scene.hpp"

namespace radiomap {

/// Receiver (handset) height above local ground, meters.
inline constexpr double kReceiverHeightM = 1.5;

inline double degrees(double radians) { return radians * 180.0 / std::numbers::pi; }

/// Bearing from the antenna to (dcol, drow) in degrees clockwise from north,
/// in [0, 360). North is decreasing row.
inline double bearing_deg(int dcol, int drow) {
  double b = degrees(std::atan2(static_cast<double>(dcol), static_cast<double>(-drow)));
  if (b < 0.0) b += 360.0;
  return b;
}

/// Antenna apex altitude (ground at the antenna pixel plus mast height).
inline double antenna_apex_m(const Scene& scene) {
  const auto& a = scene.antenna;
  return scene.ground_height.at(a.pixel.col, a.pixel.row) + a.height_m;
}

/// Pattern loss along the direct antenna-receiver path, per pixel.
inline RasterGrid antenna_attenuation_map(const Scene& scene) {
  const auto& a = scene.antenna;
  const auto& pat = a.pattern;
  RasterGrid out(scene.width(), scene.height(), scene.resolution());
  const double apex = antenna_apex_m(scene);

  for (int row = 0; row < scene.height(); ++row) {
    for (int col = 0; col < scene.width(); ++col) {
      const int dcol = col - a.pixel.col;
      const int drow = row - a.pixel.row;
      if (dcol == 0 && drow == 0) continue;

      double hoff = std::fmod(bearing_deg(dcol, drow) - a.azimuth_deg, 360.0);
      if (hoff < 0.0) hoff += 360.0;
      const int hidx = static_cast<int>(std::lround(hoff)) % AntennaPattern::kHorizontalSize;

      const double horiz = scene.resolution() * std::hypot(dcol, drow);
      const double rx = scene.ground_height.at(col, row) + kReceiverHeightM;
      const double elevation = degrees(std::atan2(rx - apex, horiz));
      const int vidx = std::clamp(static_cast<int>(std::lround(elevation + a.tilt_deg)) +
                                      AntennaPattern::kVerticalBoresight,
                                  0, AntennaPattern::kVerticalSize - 1);

      out.at(col, row) = pat.horiz_att_db[hidx] + pat.vert_att_db[vidx];
    }
  }
  return out;
}

}  // namespace radiomap

#endif  // RADIOMAP_ANTENNA_HPP
