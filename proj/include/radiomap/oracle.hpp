#ifndef RADIOMAP_ORACLE_HPP
#define RADIOMAP_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <limits>

#include "radiomap/antenna.hpp"
#include "radiomap/line.hpp"
#include "radiomap/scene.hpp"

namespace radiomap {

struct OracleParams {
  double wall_loss_db = 15.0;        // per building cell crossed
  double vegetation_loss_db = 1.0;   // per vegetation cell crossed
};

/// Free-space path loss in dB, distance in meters and frequency in MHz.
inline double free_space_path_loss_db(double distance_m, double freq_mhz) {
  return 20.0 * std::log10(distance_m) + 20.0 * std::log10(freq_mhz) - 27.55;
}

struct ObstructionCount {
  int walls = 0;
  int vegetation = 0;
};

/// Counts building and vegetation cells on the supercover line from the
/// antenna to `p` (antenna cell excluded, `p` included) whose top rises above
/// the straight antenna-receiver sight line at that cell.
inline ObstructionCount count_obstructions(const Scene& scene, Pixel p) {
  const Pixel a = scene.antenna.pixel;
  ObstructionCount n;
  if (p == a) return n;

  const double apex = antenna_apex_m(scene);
  const double rx = scene.ground_height.at(p.col, p.row) + kReceiverHeightM;
  const double dx = p.col - a.col;
  const double dy = p.row - a.row;
  const double len2 = dx * dx + dy * dy;

  for (const Pixel c : supercover_line(a, p)) {
    if (c == a) continue;
    const float code = scene.ground_type.at(c.col, c.row);
    const bool wall = code == ground_code(GroundType::building);
    const bool veg = code == ground_code(GroundType::vegetation);
    if (!wall && !veg) continue;
    // sight-line height at the projection of the cell center onto the segment
    const double t =
        std::clamp(((c.col - a.col) * dx + (c.row - a.row) * dy) / len2, 0.0, 1.0);
    const double sight = apex + t * (rx - apex);
    const double top = static_cast<double>(scene.ground_height.at(c.col, c.row)) +
                       scene.obstacle_height.at(c.col, c.row);
    if (top <= sight) continue;
    if (wall) ++n.walls;
    else ++n.vegetation;
  }
  return n;
}

/// Ground-truth received power (dB) from free-space loss, the antenna pattern
/// and per-cell penetration losses.
inline RasterGrid oracle_coverage(const Scene& scene, const OracleParams& params = {}) {
  const auto& ant = scene.antenna;
  const RasterGrid pattern_loss = antenna_attenuation_map(scene);
  const double apex = antenna_apex_m(scene);
  const double res = scene.resolution();
  RasterGrid out(scene.width(), scene.height(), res);

  for (int row = 0; row < scene.height(); ++row) {
    for (int col = 0; col < scene.width(); ++col) {
      const Pixel p{col, row};
      if (p == ant.pixel) continue;
      const double horiz = res * std::hypot(col - ant.pixel.col, row - ant.pixel.row);
      const double dz = scene.ground_height.at(col, row) + kReceiverHeightM - apex;
      const double d = std::max(std::sqrt(horiz * horiz + dz * dz), res);
      const ObstructionCount n = count_obstructions(scene, p);
      const double rsrp = ant.eirp_dbm - free_space_path_loss_db(d, ant.freq_mhz) -
                          pattern_loss.at(col, row) - n.walls * params.wall_loss_db -
                          n.vegetation * params.vegetation_loss_db;
      out.at(col, row) = static_cast<float>(rsrp);
    }
  }

  float best = -std::numeric_limits<float>::infinity();
  for (int dr = -1; dr <= 1; ++dr)
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      const int c = ant.pixel.col + dc;
      const int r = ant.pixel.row + dr;
      if (out.contains(c, r)) best = std::max(best, out.at(c, r));
    }
  out.at(ant.pixel.col, ant.pixel.row) = best;
  return out;
}

}  // namespace radiomap

#endif  // RADIOMAP_ORACLE_HPP
