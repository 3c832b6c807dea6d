#ifndef RADIOMAP_TRAINING_EVALUATE_HPP
#define RADIOMAP_TRAINING_EVALUATE_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "radiomap/error.hpp"
#include "radiomap/nn/checkpoint.hpp"
#include "radiomap/oracle.hpp"
#include "radiomap/training/dataset.hpp"
#include "radiomap/training/train.hpp"

namespace radiomap::training {

/// Dense per-pixel prediction in dB for one sample.
template <typename T>
std::vector<double> predict(const nn::Checkpoint<T>& ck, const Sample& s) {
  switch (ck.kind) {
    case nn::ModelKind::gnn:
    case nn::ModelKind::gnn_no_ray:
      return nn::model_forward(ck.gnn, s.graph, s.scalars);
    case nn::ModelKind::tabular:
      return nn::tabular_forward(ck.tabular, s.graph, s.scalars);
    case nn::ModelKind::oracle: {
      const RasterGrid cov = oracle_coverage(s.scene, ck.oracle);
      return {cov.values().begin(), cov.values().end()};
    }
  }
  fail(ErrorCategory::invalid_parameter, "unknown model kind");
}

inline bool passes_filter(const Sample& s, std::size_t pixel, const IndoorFilter& f) {
  if (s.measurements.values[pixel] < f.min_db) return false;
  if (f.drop_buildings && s.scene.ground_type[pixel] == ground_code(GroundType::building))
    return false;
  return true;
}

/// RMSE (dB) over every masked-in point of the given samples, optionally
/// restricted by the indoor filter.
inline double evaluate_rmse(const std::function<std::vector<double>(const Sample&)>& predictor,
                            const Dataset& d, std::span<const std::size_t> ids,
                            const IndoorFilter* filter = nullptr) {
  double sse = 0.0;
  std::size_t count = 0;
  for (auto i : ids) {
    const Sample& s = d.samples[i];
    const auto pred = predictor(s);
    require(pred.size() == s.measurements.mask.size(), ErrorCategory::shape,
            "prediction size does not match the measurement raster");
    for (std::size_t p = 0; p < pred.size(); ++p) {
      if (s.measurements.mask[p] == 0.0) continue;
      if (filter && !passes_filter(s, p, *filter)) continue;
      const double r = pred[p] - s.measurements.values[p];
      sse += r * r;
      ++count;
    }
  }
  if (count == 0)
    fail(ErrorCategory::empty_evaluation, filter ? "no validation points left after filtering"
                                                 : "no masked-in validation points");
  return std::sqrt(sse / static_cast<double>(count));
}

template <typename T>
double evaluate_rmse(const nn::Checkpoint<T>& ck, const Dataset& d, std::span<const std::size_t> ids,
                     const IndoorFilter* filter = nullptr) {
  return evaluate_rmse([&](const Sample& s) { return predict(ck, s); }, d, ids, filter);
}

struct SpeedResult {
  double median_s = 0.0;
  std::vector<double> samples_s;
};

/// Median wall time of `reps` calls after one warm-up call.
inline SpeedResult benchmark_speed(const std::function<void()>& fn, std::size_t reps = 10) {
  require(reps >= 1, ErrorCategory::invalid_parameter, "need at least one repetition");
  fn();
  SpeedResult r;
  for (std::size_t k = 0; k < reps; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    r.samples_s.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  std::vector<double> sorted = r.samples_s;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  r.median_s = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return r;
}

template <typename T>
SpeedResult benchmark_speed(const nn::Checkpoint<T>& ck, const Sample& s, std::size_t reps = 10) {
  return benchmark_speed([&] { (void)predict(ck, s); }, reps);
}

}  // namespace radiomap::training

#endif  // RADIOMAP_TRAINING_EVALUATE_HPP
