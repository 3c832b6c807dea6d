#ifndef RADIOMAP_CLI_CONFIG_HPP
#define RADIOMAP_CLI_CONFIG_HPP

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "radiomap/error.hpp"
#include "radiomap/scene_io.hpp"
#include "radiomap/training/dataset.hpp"
#include "radiomap/training/train.hpp"

namespace radiomap::cli {

/// Everything a command can be configured with. Model and optimizer defaults
/// are the full-size hyperparameters; data defaults are the canonical
/// synthetic benchmark.
struct Config {
  training::SyntheticDataParams data;
  training::TrainConfig train;
  std::uint64_t split_seed = 0;
  std::size_t speed_reps = 10;
  double render_vmin = -140.0;
  double render_vmax = -40.0;
  std::string data_dir = "data";
  std::string out_dir = "out";
  std::string checkpoint = "out/model.rgck";
  std::string scene;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename N>
N parse_number(const std::string& key, const std::string& v) {
  N out{};
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end)
    fail(ErrorCategory::config, "invalid value '" + v + "' for key '" + key + "'");
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(ErrorCategory::config, "invalid boolean '" + v + "' for key '" + key + "'");
}

inline std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<double>(key, trim(item)));
  return out;
}

using Setter = std::function<void(Config&, const std::string& key, const std::string& value)>;

template <typename N, typename Get>
Setter number(Get get) {
  return [get](Config& c, const std::string& k, const std::string& v) { get(c) = parse_number<N>(k, v); };
}

template <typename Get>
Setter boolean(Get get) {
  return [get](Config& c, const std::string& k, const std::string& v) { get(c) = parse_bool(k, v); };
}

template <typename Get>
Setter text(Get get) {
  return [get](Config& c, const std::string&, const std::string& v) { get(c) = v; };
}

// clang-format off
inline const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
    {"width", number<int>([](Config& c) -> int& { return c.data.scene.width; })},
    {"height", number<int>([](Config& c) -> int& { return c.data.scene.height; })},
    {"resolution", number<double>([](Config& c) -> double& { return c.data.scene.resolution; })},
    {"n_buildings", number<int>([](Config& c) -> int& { return c.data.scene.n_buildings; })},
    {"building_min_size", number<int>([](Config& c) -> int& { return c.data.scene.building_min_size; })},
    {"building_max_size", number<int>([](Config& c) -> int& { return c.data.scene.building_max_size; })},
    {"building_min_height", number<double>([](Config& c) -> double& { return c.data.scene.building_min_height; })},
    {"building_max_height", number<double>([](Config& c) -> double& { return c.data.scene.building_max_height; })},
    {"vegetation_fraction", number<double>([](Config& c) -> double& { return c.data.scene.vegetation_fraction; })},
    {"vegetation_min_height", number<double>([](Config& c) -> double& { return c.data.scene.vegetation_min_height; })},
    {"vegetation_max_height", number<double>([](Config& c) -> double& { return c.data.scene.vegetation_max_height; })},
    {"n_water", number<int>([](Config& c) -> int& { return c.data.scene.n_water; })},
    {"terrain_amplitude", number<double>([](Config& c) -> double& { return c.data.scene.terrain_amplitude; })},
    {"terrain_scale", number<int>([](Config& c) -> int& { return c.data.scene.terrain_scale; })},
    {"antenna_min_height", number<double>([](Config& c) -> double& { return c.data.scene.antenna_min_height; })},
    {"antenna_max_height", number<double>([](Config& c) -> double& { return c.data.scene.antenna_max_height; })},
    {"frequencies_mhz", [](Config& c, const std::string& k, const std::string& v) { c.data.scene.frequencies_mhz = parse_list(k, v); }},
    {"eirp_min_dbm", number<double>([](Config& c) -> double& { return c.data.scene.eirp_min_dbm; })},
    {"eirp_max_dbm", number<double>([](Config& c) -> double& { return c.data.scene.eirp_max_dbm; })},
    {"tilt_min_deg", number<double>([](Config& c) -> double& { return c.data.scene.tilt_min_deg; })},
    {"tilt_max_deg", number<double>([](Config& c) -> double& { return c.data.scene.tilt_max_deg; })},
    {"isotropic", boolean([](Config& c) -> bool& { return c.data.scene.isotropic; })},

    {"n_sites", number<std::size_t>([](Config& c) -> std::size_t& { return c.data.n_sites; })},
    {"seed", number<std::uint64_t>([](Config& c) -> std::uint64_t& { return c.data.seed; })},
    {"n_points", number<std::size_t>([](Config& c) -> std::size_t& { return c.data.sampling.n; })},
    {"noise_db", number<double>([](Config& c) -> double& { return c.data.sampling.noise_db; })},
    {"outdoor_only", boolean([](Config& c) -> bool& { return c.data.sampling.outdoor_only; })},
    {"survivor_threshold_db", [](Config& c, const std::string& k, const std::string& v) {
       c.data.sampling.survivor_threshold_db = parse_number<double>(k, v); }},
    {"wall_loss_db", number<double>([](Config& c) -> double& { return c.data.oracle.wall_loss_db; })},
    {"vegetation_loss_db", number<double>([](Config& c) -> double& { return c.data.oracle.vegetation_loss_db; })},
    {"ray_stride", number<int>([](Config& c) -> int& { return c.data.graph.ray_stride; })},
    {"ray_bidirectional", boolean([](Config& c) -> bool& { return c.data.graph.ray_bidirectional; })},

    {"lr", number<double>([](Config& c) -> double& { return c.train.lr; })},
    {"epochs", number<std::size_t>([](Config& c) -> std::size_t& { return c.train.epochs; })},
    {"batch_size", number<std::size_t>([](Config& c) -> std::size_t& { return c.train.batch_size; })},
    {"max_steps", [](Config& c, const std::string& k, const std::string& v) {
       c.train.max_steps = parse_number<std::size_t>(k, v); }},
    {"train_seed", number<std::uint64_t>([](Config& c) -> std::uint64_t& { return c.train.seed; })},
    {"latent", number<std::size_t>([](Config& c) -> std::size_t& { return c.train.model.latent; })},
    {"hidden", number<std::size_t>([](Config& c) -> std::size_t& { return c.train.model.hidden; })},
    {"encoder_hidden_layers", number<std::size_t>([](Config& c) -> std::size_t& { return c.train.model.encoder_hidden_layers; })},
    {"decoder_hidden_layers", number<std::size_t>([](Config& c) -> std::size_t& { return c.train.model.decoder_hidden_layers; })},
    {"block_hidden_layers", number<std::size_t>([](Config& c) -> std::size_t& { return c.train.model.block_hidden_layers; })},
    {"film_hidden_layers", number<std::size_t>([](Config& c) -> std::size_t& { return c.train.model.film_hidden_layers; })},
    {"blocks", number<std::size_t>([](Config& c) -> std::size_t& { return c.train.model.blocks; })},
    {"per_block_film", boolean([](Config& c) -> bool& { return c.train.model.per_block_film; })},
    {"disable_ray_edges", boolean([](Config& c) -> bool& { return c.train.disable_ray_edges; })},
    {"val_fraction", number<double>([](Config& c) -> double& { return c.train.val_fraction; })},
    {"split_seed", number<std::uint64_t>([](Config& c) -> std::uint64_t& { return c.split_seed; })},
    {"indoor_min_db", number<double>([](Config& c) -> double& { return c.train.indoor_filter.min_db; })},
    {"indoor_drop_buildings", boolean([](Config& c) -> bool& { return c.train.indoor_filter.drop_buildings; })},
    {"speed_reps", number<std::size_t>([](Config& c) -> std::size_t& { return c.speed_reps; })},
    {"render_vmin", number<double>([](Config& c) -> double& { return c.render_vmin; })},
    {"render_vmax", number<double>([](Config& c) -> double& { return c.render_vmax; })},

    {"data_dir", text([](Config& c) -> std::string& { return c.data_dir; })},
    {"out_dir", text([](Config& c) -> std::string& { return c.out_dir; })},
    {"checkpoint", text([](Config& c) -> std::string& { return c.checkpoint; })},
    {"scene", text([](Config& c) -> std::string& { return c.scene; })},
  };
  return table;
}
// clang-format on

}  // namespace detail

inline std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : detail::setters()) keys.push_back(k);
  return keys;
}

/// Applies one key=value assignment; unknown keys are rejected.
inline void set_config_value(Config& c, const std::string& key, const std::string& value) {
  const auto it = detail::setters().find(key);
  if (it == detail::setters().end()) fail(ErrorCategory::config, "unknown config key '" + key + "'");
  it->second(c, key, value);
}

/// Parses `key = value` lines. Blank lines and lines starting with '#' are
/// ignored; a key may appear only once.
inline Config parse_config(std::string_view text, Config base = {}) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::map<std::string, int> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      fail(ErrorCategory::config, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(std::string_view(t).substr(0, eq));
    const std::string value = detail::trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) fail(ErrorCategory::config, "line " + std::to_string(lineno) + ": empty key");
    if (seen.count(key))
      fail(ErrorCategory::config, "key '" + key + "' repeated on lines " +
                                      std::to_string(seen[key]) + " and " + std::to_string(lineno));
    seen[key] = lineno;
    set_config_value(base, key, value);
  }
  validate(base.data.scene);
  return base;
}

inline Config load_config(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return parse_config(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace radiomap::cli

#endif  // RADIOMAP_CLI_CONFIG_HPP
