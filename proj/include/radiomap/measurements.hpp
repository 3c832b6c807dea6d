#ifndef RADIOMAP_MEASUREMENTS_HPP
#define RADIOMAP_MEASUREMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "radiomap/error.hpp"
#include "radiomap/random.hpp"
#include "radiomap/scene.hpp"

namespace radiomap {

struct SamplingParams {
  std::size_t n = 600;
  double noise_db = 3.0;
  bool outdoor_only = false;
  std::optional<double> survivor_threshold_db;
};

/// Draws `n` distinct pixels uniformly (excluding buildings when
/// `outdoor_only`), adds Gaussian noise, then optionally drops values below
/// the survivor threshold.
inline MeasurementSet sample_measurements(const RasterGrid& coverage, const Scene& scene,
                                          const SamplingParams& params, std::uint64_t seed) {
  require(coverage.width() == scene.width() && coverage.height() == scene.height(),
          ErrorCategory::shape, "coverage raster does not match scene geometry");
  require(params.noise_db >= 0.0, ErrorCategory::invalid_parameter, "noise_db must be >= 0");

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < coverage.size(); ++i)
    if (!params.outdoor_only || scene.ground_type[i] != ground_code(GroundType::building))
      eligible.push_back(i);
  require(params.n <= eligible.size(), ErrorCategory::invalid_parameter,
          "requested " + std::to_string(params.n) + " measurements but only " +
              std::to_string(eligible.size()) + " pixels are eligible");

  Rng rng(seed);
  // partial Fisher-Yates: the first n entries become the sample
  for (std::size_t k = 0; k < params.n; ++k) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(k), static_cast<std::int64_t>(eligible.size()) - 1));
    std::swap(eligible[k], eligible[j]);
  }

  MeasurementSet ms;
  ms.site_id = scene.site_id;
  ms.points.reserve(params.n);
  const auto w = static_cast<std::size_t>(coverage.width());
  for (std::size_t k = 0; k < params.n; ++k) {
    const std::size_t i = eligible[k];
    double v = coverage[i];
    if (params.noise_db > 0.0) v += rng.normal(0.0, params.noise_db);
    if (params.survivor_threshold_db && v < *params.survivor_threshold_db) continue;
    ms.points.push_back({static_cast<int>(i % w), static_cast<int>(i / w), v});
  }
  return ms;
}

struct MeasurementRaster {
  std::vector<double> values;  // rsrp at measured pixels, -1 elsewhere
  std::vector<double> mask;    // 1 at measured pixels, 0 elsewhere
  int width = 0;
  int height = 0;
};

inline MeasurementRaster rasterize_measurements(const MeasurementSet& ms, int width, int height) {
  validate(ms, width, height);
  MeasurementRaster out;
  out.width = width;
  out.height = height;
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  out.values.assign(n, -1.0);
  out.mask.assign(n, 0.0);
  for (const auto& m : ms.points) {
    const auto i = static_cast<std::size_t>(m.row) * width + m.col;
    out.values[i] = m.rsrp_db;
    out.mask[i] = 1.0;
  }
  return out;
}

/// Inverse of `rasterize_measurements` on the masked cells, in row-major order.
inline MeasurementSet extract_measurements(const MeasurementRaster& r, std::string site_id = {}) {
  MeasurementSet ms;
  ms.site_id = std::move(site_id);
  for (std::size_t i = 0; i < r.mask.size(); ++i)
    if (r.mask[i] != 0.0)
      ms.points.push_back({static_cast<int>(i % r.width), static_cast<int>(i / r.width),
                           r.values[i]});
  return ms;
}

}  // namespace radiomap

#endif  // RADIOMAP_MEASUREMENTS_HPP
