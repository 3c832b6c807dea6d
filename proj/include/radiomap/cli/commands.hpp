#ifndef RADIOMAP_CLI_COMMANDS_HPP
#define RADIOMAP_CLI_COMMANDS_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "radiomap/cli/config.hpp"
#include "radiomap/cli/render.hpp"
#include "radiomap/nn/checkpoint.hpp"
#include "radiomap/scene_io.hpp"
#include "radiomap/training/experiment.hpp"

namespace radiomap::cli {

namespace fs = std::filesystem;

/// Worker count: RADIOMAP_THREADS if set (at least 1), else the hardware
/// concurrency.
inline std::size_t thread_limit() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RADIOMAP_THREADS")) {
    const std::string s(env);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0)
      fail(ErrorCategory::config, "RADIOMAP_THREADS must be a positive integer, got '" + s + "'");
    n = v;
  }
  return n;
}

/// Runs fn(0..n-1) on up to thread_limit() threads. The first exception is
/// rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min(thread_limit(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Writes `<site>.rgnn` and `<site>.csv` for every configured site and
/// returns the written paths in site order.
inline std::vector<fs::path> cmd_gen(const Config& cfg, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) fail(ErrorCategory::io, "cannot create directory " + out_dir.string());
  validate(cfg.data.scene);
  std::vector<fs::path> written(2 * cfg.data.n_sites);
  parallel_for(cfg.data.n_sites, [&](std::size_t i) {
    const auto site = training::generate_site(cfg.data, i);
    written[2 * i] = out_dir / (site.scene.site_id + ".rgnn");
    written[2 * i + 1] = out_dir / (site.scene.site_id + ".csv");
    save_scene(site.scene, written[2 * i]);
    save_measurements(site.measurements, written[2 * i + 1]);
  });
  return written;
}

/// Loads every `<site>.rgnn` in the directory (sorted by name) with its
/// measurement CSV.
inline training::Dataset load_dataset_dir(const fs::path& dir, const GraphOptions& graph) {
  if (!fs::is_directory(dir)) fail(ErrorCategory::io, "data directory not found: " + dir.string());
  std::vector<fs::path> scenes;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".rgnn") scenes.push_back(e.path());
  std::sort(scenes.begin(), scenes.end());
  if (scenes.empty()) fail(ErrorCategory::io, "no scene files in " + dir.string());

  training::Dataset d;
  d.samples.resize(scenes.size());
  parallel_for(scenes.size(), [&](std::size_t i) {
    Scene scene = load_scene(scenes[i]);
    auto csv = scenes[i];
    csv.replace_extension(".csv");
    const auto ms = load_measurements(csv, scene.site_id);
    validate(ms, scene.width(), scene.height());
    d.samples[i] = training::make_sample(std::move(scene), ms, graph);
  });
  return d;
}

enum class TrainMode { gnn, no_ray, baseline, oracle };

struct TrainOutputs {
  fs::path checkpoint;
  fs::path loss_csv;
  fs::path summary;
  training::Metrics metrics;
};

inline nn::ModelKind mode_kind(TrainMode m) {
  switch (m) {
    case TrainMode::gnn: return nn::ModelKind::gnn;
    case TrainMode::no_ray: return nn::ModelKind::gnn_no_ray;
    case TrainMode::baseline: return nn::ModelKind::tabular;
    case TrainMode::oracle: return nn::ModelKind::oracle;
  }
  return nn::ModelKind::gnn;
}

/// Site split, training and validation. Writes the checkpoint to the
/// configured path and `loss.csv` / `summary.csv` next to it.
inline TrainOutputs cmd_train(const Config& cfg, const fs::path& data_dir, TrainMode mode) {
  auto graph_options = cfg.data.graph;
  if (cfg.train.disable_ray_edges && mode == TrainMode::gnn) mode = TrainMode::no_ray;
  const auto data = load_dataset_dir(data_dir, graph_options);
  if (data.size() < 2) fail(ErrorCategory::invalid_parameter, "training needs at least 2 sites");
  const auto split = training::split_by_site(data, cfg.train.val_fraction, cfg.split_seed);

  auto cfg_train = cfg.train;
  auto result = mode == TrainMode::oracle
                    ? training::ExperimentResult<float>{nn::make_oracle_checkpoint<float>(cfg.data.oracle), {}}
                    : training::run_experiment<float>(mode_kind(mode), data, split, cfg_train);
  if (mode == TrainMode::oracle) training::evaluate_into(result.model, data, split, cfg_train, result.metrics, cfg.speed_reps);

  TrainOutputs out;
  out.checkpoint = cfg.checkpoint;
  const auto dir = out.checkpoint.parent_path();
  if (!dir.empty()) fs::create_directories(dir);
  out.loss_csv = dir / "loss.csv";
  out.summary = dir / "summary.csv";
  nn::save_checkpoint(result.model, out.checkpoint);
  write_file_atomic(out.loss_csv, training::loss_curve_csv(result.metrics.loss_curve));
  write_file_atomic(out.summary, training::summary_header() +
                                     training::summary_row(nn::model_kind_name(result.model.kind), result.metrics));
  out.metrics = std::move(result.metrics);
  return out;
}

/// Dense prediction for one scene: `<prefix>.csv` (H rows of W values) and
/// `<prefix>.pgm`.
inline RasterGrid cmd_predict(const Config& cfg, const fs::path& checkpoint, const fs::path& scene_path,
                              const fs::path& out_prefix) {
  const auto ck = nn::load_checkpoint<float>(checkpoint);
  Scene scene = load_scene(scene_path);
  const auto sample = training::make_sample(std::move(scene), MeasurementSet{}, cfg.data.graph);
  const auto pred = training::predict(ck, sample);
  RasterGrid grid(sample.scene.width(), sample.scene.height(), sample.scene.resolution());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    require(std::isfinite(pred[i]), ErrorCategory::non_finite, "prediction is not finite");
    grid[i] = static_cast<float>(pred[i]);
  }

  std::string csv;
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      if (c) csv += ',';
      csv += format_double(grid.at(c, r));
    }
    csv += '\n';
  }
  const auto dir = out_prefix.parent_path();
  if (!dir.empty()) fs::create_directories(dir);
  auto csv_path = out_prefix;
  csv_path += ".csv";
  auto pgm_path = out_prefix;
  pgm_path += ".pgm";
  write_file_atomic(csv_path, csv);
  render_map(grid, cfg.render_vmin, cfg.render_vmax, pgm_path);
  return grid;
}

struct EvalReport {
  std::string model;
  double rmse_db = 0.0;
  std::optional<double> rmse_filtered_db;
  double inference_s = 0.0;

  std::string text() const {
    std::string out = "metric,value\nmodel," + model + "\nrmse_db," + format_double(rmse_db) + "\n";
    out += "rmse_filtered_db," + (rmse_filtered_db ? format_double(*rmse_filtered_db) : std::string("nan")) + "\n";
    out += "inference_s," + format_double(inference_s) + "\n";
    return out;
  }
};

/// Validation metrics of a checkpoint on the site split of `data_dir`.
/// Predictions run in parallel; aggregation is in sample order.
inline EvalReport cmd_eval(const Config& cfg, const fs::path& checkpoint, const fs::path& data_dir) {
  const auto ck = nn::load_checkpoint<float>(checkpoint);
  auto graph_options = cfg.data.graph;
  if (ck.kind == nn::ModelKind::gnn_no_ray) graph_options.ray_edges = false;
  const auto data = load_dataset_dir(data_dir, graph_options);
  const auto split = training::split_by_site(data, cfg.train.val_fraction, cfg.split_seed);
  if (split.val.empty()) fail(ErrorCategory::empty_evaluation, "validation set is empty");

  std::vector<std::vector<double>> preds(data.size());
  parallel_for(split.val.size(), [&](std::size_t k) {
    preds[split.val[k]] = training::predict(ck, data.samples[split.val[k]]);
  });
  auto lookup = [&](const training::Sample& s) { return preds[static_cast<std::size_t>(&s - data.samples.data())]; };

  EvalReport rep;
  rep.model = std::string(nn::model_kind_name(ck.kind));
  rep.rmse_db = training::evaluate_rmse(lookup, data, split.val);
  try {
    rep.rmse_filtered_db = training::evaluate_rmse(lookup, data, split.val, &cfg.train.indoor_filter);
  } catch (const Error& e) {
    if (e.category() != ErrorCategory::empty_evaluation) throw;
  }
  rep.inference_s = training::benchmark_speed(ck, data.samples[split.val.front()], cfg.speed_reps).median_s;
  return rep;
}

}  // namespace radiomap::cli

#endif  // RADIOMAP_CLI_COMMANDS_HPP
