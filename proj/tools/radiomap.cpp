// radiomap command-line front end: gen, train, predict, eval.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "radiomap/cli/commands.hpp"

namespace {

using radiomap::Error;
using radiomap::ErrorCategory;
namespace cli = radiomap::cli;

int exit_code(ErrorCategory c) { return 3 + static_cast<int>(c); }

std::string one_line(std::string s) {
  for (char& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn and render radio coverage maps with a dual-graph neural network."};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string data;
  std::string checkpoint;
  std::string scene;
  bool no_ray = false;
  bool baseline = false;
  bool oracle = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key=value config file");
    sub->add_option("--seed", seed, "overrides the data seed (gen) or training seed (train)");
    sub->add_option("--out", out, "output directory (gen, train) or file prefix (predict)");
  };
  auto* gen = app.add_subcommand("gen", "generate synthetic scenes and measurements");
  common(gen);
  auto* train = app.add_subcommand("train", "train a model on a data directory");
  common(train);
  train->add_option("--data", data, "data directory (default: data_dir key)");
  train->add_flag("--no-ray", no_ray, "train the grid-only ablation");
  train->add_flag("--baseline", baseline, "train the pointwise tabular baseline");
  train->add_flag("--oracle", oracle, "write the physics oracle as a checkpoint instead of training");
  auto* predict = app.add_subcommand("predict", "predict a dense coverage map for one scene");
  common(predict);
  predict->add_option("--checkpoint", checkpoint, "checkpoint file (default: checkpoint key)");
  predict->add_option("--scene", scene, "scene file (default: scene key)");
  auto* eval = app.add_subcommand("eval", "report validation RMSE and inference time");
  common(eval);
  eval->add_option("--checkpoint", checkpoint, "checkpoint file (default: checkpoint key)");
  eval->add_option("--data", data, "data directory (default: data_dir key)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: usage: %s\n", one_line(e.what()).c_str());
    return 2;
  }

  try {
    cli::Config cfg = config_path.empty() ? cli::Config{} : cli::load_config(config_path);
    if (!data.empty()) cfg.data_dir = data;
    if (!checkpoint.empty()) cfg.checkpoint = checkpoint;
    if (!scene.empty()) cfg.scene = scene;

    if (gen->parsed()) {
      if (seed) cfg.data.seed = *seed;
      const auto dir = out.empty() ? cfg.data_dir : out;
      const auto files = cli::cmd_gen(cfg, dir);
      std::printf("wrote %zu scenes to %s\n", files.size() / 2, dir.c_str());
    } else if (train->parsed()) {
      if (seed) cfg.train.seed = *seed;
      if (no_ray + baseline + oracle > 1)
        radiomap::fail(ErrorCategory::config, "--no-ray, --baseline and --oracle are exclusive");
      if (!out.empty() && checkpoint.empty())
        cfg.checkpoint = (std::filesystem::path(out) / "model.rgck").string();
      const auto mode = no_ray     ? cli::TrainMode::no_ray
                        : baseline ? cli::TrainMode::baseline
                        : oracle   ? cli::TrainMode::oracle
                                   : cli::TrainMode::gnn;
      const auto res = cli::cmd_train(cfg, cfg.data_dir, mode);
      const auto bytes = radiomap::read_file_bytes(res.summary);
      std::fwrite(bytes.data(), 1, bytes.size(), stdout);
    } else if (predict->parsed()) {
      if (cfg.scene.empty()) radiomap::fail(ErrorCategory::config, "predict needs --scene or a scene key");
      const auto prefix = out.empty() ? (std::filesystem::path(cfg.out_dir) / "prediction").string() : out;
      cli::cmd_predict(cfg, cfg.checkpoint, cfg.scene, prefix);
      std::printf("wrote %s.csv and %s.pgm\n", prefix.c_str(), prefix.c_str());
    } else if (eval->parsed()) {
      const auto report = cli::cmd_eval(cfg, cfg.checkpoint, cfg.data_dir).text();
      std::fputs(report.c_str(), stdout);
      if (!out.empty()) {
        std::filesystem::create_directories(out);
        radiomap::write_file_atomic(std::filesystem::path(out) / "eval.csv", report);
      }
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s: %s\n", std::string(radiomap::category_name(e.category())).c_str(),
                 one_line(e.what()).c_str());
    return exit_code(e.category());
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: io: %s\n", one_line(e.what()).c_str());
    return exit_code(ErrorCategory::io);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: internal: %s\n", one_line(e.what()).c_str());
    return 1;
  }
  return 0;
}
