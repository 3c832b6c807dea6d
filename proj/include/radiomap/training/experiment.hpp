#ifndef RADIOMAP_TRAINING_EXPERIMENT_HPP
#define RADIOMAP_TRAINING_EXPERIMENT_HPP

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "radiomap/nn/checkpoint.hpp"
#include "radiomap/scene_io.hpp"
#include "radiomap/training/dataset.hpp"
#include "radiomap/training/evaluate.hpp"
#include "radiomap/training/split.hpp"
#include "radiomap/training/train.hpp"

namespace radiomap::training {

template <typename T>
struct ExperimentResult {
  nn::Checkpoint<T> model;
  Metrics metrics;
};

/// Fills the validation metrics of a trained model: raw and filtered RMSE and
/// the median inference time on the first validation sample.
template <typename T>
void evaluate_into(const nn::Checkpoint<T>& ck, const Dataset& d, const SiteSplit& split,
                   const TrainConfig& cfg, Metrics& m, std::size_t speed_reps = 10) {
  m.val_rmse_db = evaluate_rmse(ck, d, split.val);
  try {
    m.val_rmse_filtered_db = evaluate_rmse(ck, d, split.val, &cfg.indoor_filter);
  } catch (const Error& e) {
    if (e.category() != ErrorCategory::empty_evaluation) throw;
    m.val_rmse_filtered_db.reset();
  }
  m.inference_s = benchmark_speed(ck, d.samples[split.val.front()], speed_reps).median_s;
}

/// Trains one model of the requested kind on the training side of `split`
/// and evaluates it on the validation side. Every kind sees the same data,
/// split, seed and step budget; only the model differs.
template <typename T>
ExperimentResult<T> run_experiment(nn::ModelKind kind, const Dataset& d, const SiteSplit& split,
                                   const TrainConfig& cfg,
                                   const std::function<void(std::size_t, double)>& on_step = {}) {
  assert_site_disjoint(d, split);
  require(!split.val.empty(), ErrorCategory::invalid_parameter, "validation split is empty");
  const nn::Normalization norm = fit_normalization(d, split.train);
  ExperimentResult<T> r;
  switch (kind) {
    case nn::ModelKind::gnn: {
      auto mc = cfg.model;
      mc.use_ray = true;
      auto params = nn::init_params<T>(cfg.seed, mc);
      params.norm = norm;
      r.metrics = train(params, d, split.train, cfg, on_step);
      r.model = nn::make_checkpoint(std::move(params));
      evaluate_into(r.model, d, split, cfg, r.metrics);
      break;
    }
    case nn::ModelKind::gnn_no_ray: {
      const Dataset stripped = without_ray_edges(d);
      auto mc = cfg.model;
      mc.use_ray = false;
      auto params = nn::init_params<T>(cfg.seed, mc);
      params.norm = norm;
      r.metrics = train(params, stripped, split.train, cfg, on_step);
      r.model = nn::make_checkpoint(std::move(params));
      evaluate_into(r.model, stripped, split, cfg, r.metrics);
      break;
    }
    case nn::ModelKind::tabular: {
      auto params = nn::init_tabular<T>(cfg.seed, cfg.model);
      params.norm = norm;
      r.metrics = train(params, d, split.train, cfg, on_step);
      r.model = nn::make_checkpoint(std::move(params));
      evaluate_into(r.model, d, split, cfg, r.metrics);
      break;
    }
    case nn::ModelKind::oracle:
      r.model = nn::make_oracle_checkpoint<T>();
      evaluate_into(r.model, d, split, cfg, r.metrics);
      break;
  }
  return r;
}

template <typename T>
ExperimentResult<T> tabular_baseline(const Dataset& d, const SiteSplit& split, const TrainConfig& cfg) {
  return run_experiment<T>(nn::ModelKind::tabular, d, split, cfg);
}

template <typename T>
ExperimentResult<T> ablation_no_ray(const Dataset& d, const SiteSplit& split, const TrainConfig& cfg) {
  return run_experiment<T>(nn::ModelKind::gnn_no_ray, d, split, cfg);
}

/// Canonical desk-scale benchmark data: 60 scenes at 64x64 and 5 m, 600
/// points per scene with 3 dB noise.
inline SyntheticDataParams benchmark_data_params() { return {}; }

inline constexpr std::array<std::uint64_t, 3> kBenchmarkSeeds{0, 1, 2};

/// Training setup of the desk-scale benchmark: the full-size schedule (10
/// epochs, batch 1, 10 blocks) at a reduced width and a larger step size.
inline TrainConfig benchmark_train_config() {
  TrainConfig c;
  c.lr = 1e-3;
  c.model.latent = c.model.hidden = 32;
  return c;
}

inline std::string loss_curve_csv(const std::vector<double>& curve) {
  std::string out = "step,loss\n";
  for (std::size_t i = 0; i < curve.size(); ++i)
    out += std::to_string(i) + "," + format_double(curve[i]) + "\n";
  return out;
}

inline std::string summary_header() { return "model,rmse_db,rmse_filtered_db,inference_s\n"; }

inline std::string summary_row(std::string_view model, const Metrics& m) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("nan"); };
  return std::string(model) + "," + opt(m.val_rmse_db) + "," + opt(m.val_rmse_filtered_db) + "," +
         format_double(m.inference_s) + "\n";
}

}  // namespace radiomap::training

#endif  // RADIOMAP_TRAINING_EXPERIMENT_HPP
