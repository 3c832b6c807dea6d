#ifndef RADIOMAP_TRAINING_TRAIN_HPP
#define RADIOMAP_TRAINING_TRAIN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radiomap/error.hpp"
#include "radiomap/nn/adam.hpp"
#include "radiomap/nn/model.hpp"
#include "radiomap/nn/tabular.hpp"
#include "radiomap/random.hpp"
#include "radiomap/training/dataset.hpp"

namespace radiomap::training {

/// Synthetic analog of an indoor filter: measured values below `min_db` and
/// points on building pixels are excluded.
struct IndoorFilter {
  double min_db = -110.0;
  bool drop_buildings = true;
};

struct TrainConfig {
  double lr = 1e-4;
  std::size_t epochs = 10;
  std::size_t batch_size = 1;  // graphs per optimizer step; only 1 is supported
  std::optional<std::size_t> max_steps;
  std::uint64_t seed = 0;
  nn::ModelConfig model;  // hidden 128, 10 blocks, 2 hidden layers per encoder/decoder
  bool disable_ray_edges = false;
  double val_fraction = 0.2;
  IndoorFilter indoor_filter;
};

struct Metrics {
  std::vector<double> loss_curve;  // one entry per optimizer step
  std::optional<double> val_rmse_db;
  std::optional<double> val_rmse_filtered_db;
  double inference_s = 0.0;
};

/// Mean and standard deviation of node features and scalars over the
/// training samples, and of the masked-in training targets. Degenerate
/// spreads fall back to 1.
inline nn::Normalization fit_normalization(const Dataset& d, std::span<const std::size_t> ids) {
  nn::Normalization norm;
  auto finish = [](double sum, double sq, double n, double& mean, double& sd) {
    if (n <= 0.0) return;
    mean = sum / n;
    const double var = std::max(sq / n - mean * mean, 0.0);
    sd = std::sqrt(var) > 1e-9 ? std::sqrt(var) : 1.0;
  };

  for (std::size_t f = 0; f < kNodeFeatureDim; ++f) {
    double sum = 0, sq = 0, n = 0;
    for (auto i : ids)
      for (const auto& x : d.samples[i].graph.node_features) {
        sum += x[f];
        sq += x[f] * x[f];
        n += 1;
      }
    finish(sum, sq, n, norm.node_mean[f], norm.node_std[f]);
  }
  for (std::size_t k = 0; k < kScalarDim; ++k) {
    double sum = 0, sq = 0, n = 0;
    for (auto i : ids) {
      const double v = d.samples[i].scalars[k];
      sum += v;
      sq += v * v;
      n += 1;
    }
    finish(sum, sq, n, norm.scalar_mean[k], norm.scalar_std[k]);
  }
  double sum = 0, sq = 0, n = 0;
  for (auto i : ids) {
    const auto& m = d.samples[i].measurements;
    for (std::size_t p = 0; p < m.mask.size(); ++p)
      if (m.mask[p] != 0.0) {
        sum += m.values[p];
        sq += m.values[p] * m.values[p];
        n += 1;
      }
  }
  finish(sum, sq, n, norm.target_mean, norm.target_std);
  return norm;
}

inline constexpr auto model_visitor = [](auto&& f, auto&... p) { nn::visit_model_tensors(f, p...); };
inline constexpr auto tabular_visitor = [](auto&& f, auto&... p) { nn::visit_tabular_tensors(f, p...); };

/// Batch-size-1 masked training with Adam: every epoch visits the training
/// samples once in a seed-determined order. Works for any parameter type
/// with loss_and_gradients / zeros_like overloads and a tensor visitor.
template <typename Params, typename Visit>
Metrics train_loop(Params& params, const Dataset& d, std::span<const std::size_t> train_ids,
                   const TrainConfig& cfg, Visit&& visit,
                   const std::function<void(std::size_t, double)>& on_step = {}) {
  require(!train_ids.empty(), ErrorCategory::invalid_parameter, "training split is empty");
  require(cfg.batch_size == 1, ErrorCategory::invalid_parameter, "only batch size 1 is supported");
  Metrics metrics;
  nn::AdamState<Params> adam{nn::zeros_like(params), nn::zeros_like(params), 0, {}};
  adam.options.lr = cfg.lr;

  const std::size_t total =
      std::min(cfg.epochs * train_ids.size(), cfg.max_steps.value_or(SIZE_MAX));
  metrics.loss_curve.reserve(total);
  std::vector<std::size_t> order(train_ids.begin(), train_ids.end());
  Rng rng(mix_seed(cfg.seed, 101));

  std::size_t step = 0;
  while (step < total) {
    rng.shuffle(order);
    for (std::size_t k = 0; k < order.size() && step < total; ++k, ++step) {
      const Sample& s = d.samples[order[k]];
      Params grads = nn::zeros_like(params);
      const auto loss = nn::loss_and_gradients(params, s.graph, s.scalars,
                                               std::span<const double>(s.measurements.values),
                                               std::span<const double>(s.measurements.mask), grads);
      if (!std::isfinite(loss.loss))
        fail(ErrorCategory::non_finite,
             "non-finite training loss at step " + std::to_string(step) + " (site " + s.site_id() + ")");
      nn::adam_step(adam, params, grads, visit);
      metrics.loss_curve.push_back(loss.loss);
      if (on_step) on_step(step, loss.loss);
    }
  }
  return metrics;
}

template <typename T>
Metrics train(nn::ModelParams<T>& params, const Dataset& d, std::span<const std::size_t> train_ids,
              const TrainConfig& cfg, const std::function<void(std::size_t, double)>& on_step = {}) {
  return train_loop(params, d, train_ids, cfg, model_visitor, on_step);
}

template <typename T>
Metrics train(nn::TabularParams<T>& params, const Dataset& d, std::span<const std::size_t> train_ids,
              const TrainConfig& cfg, const std::function<void(std::size_t, double)>& on_step = {}) {
  return train_loop(params, d, train_ids, cfg, tabular_visitor, on_step);
}

/// Mean of the first and last `window` entries of a loss curve.
struct SmoothedLoss {
  double head = 0.0;
  double tail = 0.0;
};

inline SmoothedLoss smoothed_loss(const std::vector<double>& curve, std::size_t window = 100) {
  require(!curve.empty(), ErrorCategory::invalid_parameter, "empty loss curve");
  const std::size_t w = std::min(window, curve.size());
  SmoothedLoss s;
  for (std::size_t i = 0; i < w; ++i) {
    s.head += curve[i];
    s.tail += curve[curve.size() - w + i];
  }
  s.head /= static_cast<double>(w);
  s.tail /= static_cast<double>(w);
  return s;
}

}  // namespace radiomap::training

#endif  // RADIOMAP_TRAINING_TRAIN_HPP
