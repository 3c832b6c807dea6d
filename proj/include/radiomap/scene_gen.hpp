#ifndef RADIOMAP_SCENE_GEN_HPP
#define RADIOMAP_SCENE_GEN_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "radiomap/error.hpp"
#include "radiomap/random.hpp"
#include "radiomap/scene.hpp"

namespace radiomap {

struct SceneGenParams {
  int width = 64;
  int height = 64;
  double resolution = 5.0;

  int n_buildings = 10;
  int building_min_size = 3;  // pixels per side
  int building_max_size = 8;
  double building_min_height = 6.0;
  double building_max_height = 30.0;

  double vegetation_fraction = 0.05;
  double vegetation_min_height = 3.0;
  double vegetation_max_height = 12.0;

  int n_water = 0;  // rectangular ponds

  double terrain_amplitude = 10.0;  // meters, peak-to-peak bound
  int terrain_scale = 16;           // value-noise lattice spacing, pixels

  double antenna_min_height = 15.0;
  double antenna_max_height = 40.0;
  std::vector<double> frequencies_mhz = {800.0, 1800.0, 2100.0, 2600.0};
  double eirp_min_dbm = 50.0;
  double eirp_max_dbm = 65.0;
  double tilt_min_deg = 0.0;
  double tilt_max_deg = 8.0;
  bool isotropic = false;
};

inline void validate(const SceneGenParams& p) {
  require(p.width >= 3 && p.height >= 3, ErrorCategory::invalid_parameter,
          "scene grid must be at least 3x3");
  require(p.resolution > 0.0, ErrorCategory::invalid_parameter, "resolution must be positive");
  require(p.n_buildings >= 0 && p.n_water >= 0, ErrorCategory::invalid_parameter,
          "feature counts must be non-negative");
  require(p.building_min_size >= 1 && p.building_max_size >= p.building_min_size,
          ErrorCategory::invalid_parameter, "invalid building size range");
  require(p.building_min_height > 0.0 && p.building_max_height >= p.building_min_height,
          ErrorCategory::invalid_parameter, "invalid building height range");
  require(p.vegetation_fraction >= 0.0 && p.vegetation_fraction <= 1.0,
          ErrorCategory::invalid_parameter, "vegetation fraction must be in [0, 1]");
  require(p.vegetation_min_height > 0.0 && p.vegetation_max_height >= p.vegetation_min_height,
          ErrorCategory::invalid_parameter, "invalid vegetation height range");
  require(p.terrain_amplitude >= 0.0 && p.terrain_scale >= 1, ErrorCategory::invalid_parameter,
          "invalid terrain parameters");
  require(p.antenna_min_height > 0.0 && p.antenna_max_height >= p.antenna_min_height,
          ErrorCategory::invalid_parameter, "invalid antenna height range");
  require(!p.frequencies_mhz.empty(), ErrorCategory::invalid_parameter,
          "at least one carrier frequency is required");
  for (double f : p.frequencies_mhz)
    require(f > 0.0, ErrorCategory::invalid_parameter, "frequencies must be positive");
  require(p.eirp_max_dbm >= p.eirp_min_dbm && p.tilt_max_deg >= p.tilt_min_deg,
          ErrorCategory::invalid_parameter, "invalid antenna scalar ranges");
}

/// Smooth value noise in [0, 1): random lattice values every `scale` pixels,
/// smoothstep-interpolated in between.
inline std::vector<double> value_noise(int width, int height, int scale, Rng& rng) {
  const int lw = width / scale + 2;
  const int lh = height / scale + 2;
  std::vector<double> lattice(static_cast<std::size_t>(lw) * lh);
  for (auto& v : lattice) v = rng.uniform();
  auto smooth = [](double t) { return t * t * (3.0 - 2.0 * t); };

  std::vector<double> out(static_cast<std::size_t>(width) * height);
  for (int row = 0; row < height; ++row) {
    const int ly = row / scale;
    const double ty = smooth(static_cast<double>(row % scale) / scale);
    for (int col = 0; col < width; ++col) {
      const int lx = col / scale;
      const double tx = smooth(static_cast<double>(col % scale) / scale);
      const double v00 = lattice[ly * lw + lx];
      const double v10 = lattice[ly * lw + lx + 1];
      const double v01 = lattice[(ly + 1) * lw + lx];
      const double v11 = lattice[(ly + 1) * lw + lx + 1];
      const double top = v00 + (v10 - v00) * tx;
      const double bottom = v01 + (v11 - v01) * tx;
      out[static_cast<std::size_t>(row) * width + col] = top + (bottom - top) * ty;
    }
  }
  return out;
}

inline std::string site_name(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "site_%04llu", static_cast<unsigned long long>(index));
  return buf;
}

/// Deterministic synthetic environment: smooth terrain, rectangular buildings
/// and ponds on empty ground, clustered vegetation, and a randomized antenna
/// at the grid center.
inline Scene generate_scene(std::uint64_t seed, const SceneGenParams& params = {}) {
  validate(params);
  const int w = params.width;
  const int h = params.height;
  Scene scene = empty_scene(w, h, params.resolution, site_name(seed));
  const Pixel ant = scene.antenna.pixel;

  Rng terrain_rng(mix_seed(seed, 0));
  Rng layout_rng(mix_seed(seed, 1));
  Rng veg_rng(mix_seed(seed, 2));
  Rng antenna_rng(mix_seed(seed, 3));

  if (params.terrain_amplitude > 0.0) {
    const auto noise = value_noise(w, h, params.terrain_scale, terrain_rng);
    for (std::size_t i = 0; i < noise.size(); ++i)
      scene.ground_height[i] = static_cast<float>(params.terrain_amplitude * noise[i]);
  }

  auto place_rects = [&](int count, GroundType type, bool with_height) {
    constexpr int kAttempts = 100;
    for (int n = 0; n < count; ++n) {
      for (int attempt = 0; attempt < kAttempts; ++attempt) {
        const int rw = static_cast<int>(
            layout_rng.uniform_int(params.building_min_size, params.building_max_size));
        const int rh = static_cast<int>(
            layout_rng.uniform_int(params.building_min_size, params.building_max_size));
        if (rw > w || rh > h) continue;
        const int c0 = static_cast<int>(layout_rng.uniform_int(0, w - rw));
        const int r0 = static_cast<int>(layout_rng.uniform_int(0, h - rh));
        const double height_m =
            layout_rng.uniform(params.building_min_height, params.building_max_height);

        bool free = true;
        for (int r = r0; r < r0 + rh && free; ++r)
          for (int c = c0; c < c0 + rw && free; ++c)
            free = scene.ground_type.at(c, r) == 0.0f && !(Pixel{c, r} == ant);
        if (!free) continue;

        for (int r = r0; r < r0 + rh; ++r)
          for (int c = c0; c < c0 + rw; ++c) {
            scene.ground_type.at(c, r) = ground_code(type);
            if (with_height) scene.obstacle_height.at(c, r) = static_cast<float>(height_m);
          }
        break;
      }
    }
  };
  place_rects(params.n_water, GroundType::water, false);
  place_rects(params.n_buildings, GroundType::building, true);

  if (params.vegetation_fraction > 0.0) {
    const auto noise = value_noise(w, h, std::max(2, params.terrain_scale / 4), veg_rng);
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < noise.size(); ++i)
      if (scene.ground_type[i] == 0.0f && i != scene.ground_type.index(ant.col, ant.row))
        order.push_back(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return noise[a] > noise[b]; });
    const auto count = std::min(
        order.size(), static_cast<std::size_t>(std::lround(params.vegetation_fraction *
                                                           static_cast<double>(w) * h)));
    for (std::size_t k = 0; k < count; ++k) {
      scene.ground_type[order[k]] = ground_code(GroundType::vegetation);
      scene.obstacle_height[order[k]] = static_cast<float>(
          veg_rng.uniform(params.vegetation_min_height, params.vegetation_max_height));
    }
  }

  auto& a = scene.antenna;
  a.height_m = antenna_rng.uniform(params.antenna_min_height, params.antenna_max_height);
  a.freq_mhz = params.frequencies_mhz[static_cast<std::size_t>(antenna_rng.uniform_int(
      0, static_cast<std::int64_t>(params.frequencies_mhz.size()) - 1))];
  a.eirp_dbm = antenna_rng.uniform(params.eirp_min_dbm, params.eirp_max_dbm);
  a.azimuth_deg = antenna_rng.uniform(0.0, 360.0);
  a.tilt_deg = antenna_rng.uniform(params.tilt_min_deg, params.tilt_max_deg);
  a.pattern = params.isotropic ? isotropic_pattern() : sector_pattern();
  return scene;
}

}  // namespace radiomap

#endif  // RADIOMAP_SCENE_GEN_HPP
