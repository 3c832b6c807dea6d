#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "radiomap/training/experiment.hpp"

using namespace radiomap;
using namespace radiomap::training;

namespace {

nn::ModelConfig small_model() {
  nn::ModelConfig c;
  c.latent = c.hidden = 8;
  c.encoder_hidden_layers = 1;
  c.decoder_hidden_layers = 1;
  c.blocks = 3;
  return c;
}

SyntheticDataParams small_data(std::size_t sites, int size = 16) {
  SyntheticDataParams p;
  p.n_sites = sites;
  p.scene.width = p.scene.height = size;
  p.scene.n_buildings = 3;
  p.sampling.n = 60;
  return p;
}

std::vector<float> flat_weights(nn::ModelParams<float>& p) {
  std::vector<float> out;
  nn::visit_model_tensors([&](auto s) { out.insert(out.end(), s.begin(), s.end()); }, p);
  return out;
}

std::vector<std::size_t> all_ids(const Dataset& d) {
  std::vector<std::size_t> ids(d.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  return ids;
}

}  // namespace

TEST(Split, TenSitesEightTwo) {
  std::vector<std::string> sites;
  for (int i = 0; i < 10; ++i) sites.push_back(site_name(static_cast<std::uint64_t>(i)));
  const auto s = split_by_site(sites, 0.2, 3);
  EXPECT_EQ(s.train.size(), 8u);
  EXPECT_EQ(s.val.size(), 2u);
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  for (auto i : s.val) EXPECT_TRUE(all.insert(i).second);
  EXPECT_EQ(all.size(), 10u);
  const auto again = split_by_site(sites, 0.2, 3);
  EXPECT_EQ(again.train, s.train);
  EXPECT_EQ(again.val, s.val);
}

TEST(Split, SamplesOfOneSiteStayTogether) {
  const std::vector<std::string> sites{"a", "b", "a", "c", "b", "d", "a", "e"};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = split_by_site(sites, 0.4, seed);
    std::set<std::string> tr, va;
    for (auto i : s.train) tr.insert(sites[i]);
    for (auto i : s.val) va.insert(sites[i]);
    for (const auto& v : va) EXPECT_FALSE(tr.count(v));
    EXPECT_EQ(s.train.size() + s.val.size(), sites.size());
    EXPECT_EQ(va.size(), 2u);
  }
}

TEST(Split, InvalidInputs) {
  EXPECT_THROW(split_by_site(std::vector<std::string>{"a", "a"}, 0.5, 0), Error);
  EXPECT_THROW(split_by_site(std::vector<std::string>{"a", "b"}, 0.0, 0), Error);
  EXPECT_THROW(split_by_site(std::vector<std::string>{"a", "b"}, 1.0, 0), Error);
}

TEST(Split, DisjointnessAssertion) {
  Dataset d = generate_dataset(small_data(3, 8));
  d.samples[1].scene.site_id = d.samples[0].scene.site_id;
  EXPECT_THROW(assert_site_disjoint(d, SiteSplit{{0}, {1}}), Error);
  EXPECT_NO_THROW(assert_site_disjoint(d, SiteSplit{{0, 1}, {2}}));
}

TEST(Train, ZeroMaskLeavesParamsUnchanged) {
  Dataset d = generate_dataset(small_data(3));
  for (auto& s : d.samples) std::fill(s.measurements.mask.begin(), s.measurements.mask.end(), 0.0);
  TrainConfig cfg;
  cfg.model = small_model();
  cfg.epochs = 2;
  auto p = nn::init_params<float>(1, cfg.model);
  const auto before = flat_weights(p);
  const auto m = train(p, d, all_ids(d), cfg);
  EXPECT_EQ(m.loss_curve.size(), 6u);
  EXPECT_EQ(flat_weights(p), before);
}

TEST(Train, SameSeedSameWeights) {
  const Dataset d = generate_dataset(small_data(4));
  TrainConfig cfg;
  cfg.model = small_model();
  cfg.epochs = 2;
  cfg.lr = 1e-3;
  cfg.seed = 5;
  auto run = [&] {
    auto p = nn::init_params<float>(cfg.seed, cfg.model);
    p.norm = fit_normalization(d, all_ids(d));
    const auto m = train(p, d, all_ids(d), cfg);
    return std::pair(flat_weights(p), m.loss_curve);
  };
  const auto a = run();
  const auto b = run();
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, b.second);
}

TEST(Train, StepBudget) {
  const Dataset d = generate_dataset(small_data(5, 8));
  TrainConfig cfg;
  cfg.model = small_model();
  cfg.epochs = 3;
  auto p = nn::init_params<float>(0, cfg.model);
  EXPECT_EQ(train(p, d, all_ids(d), cfg).loss_curve.size(), 15u);
  cfg.max_steps = 4;
  EXPECT_EQ(train(p, d, all_ids(d), cfg).loss_curve.size(), 4u);
  cfg.batch_size = 2;
  EXPECT_THROW(train(p, d, all_ids(d), cfg), Error);
}

TEST(Train, NonFiniteLossAbortsWithStep) {
  const Dataset d = generate_dataset(small_data(2, 8));
  TrainConfig cfg;
  cfg.model = small_model();
  auto p = nn::init_params<float>(0, cfg.model);
  p.node_decoder.layers.back().bias(0) = std::numeric_limits<float>::quiet_NaN();
  try {
    train(p, d, all_ids(d), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::non_finite);
    EXPECT_NE(std::string(e.what()).find("step 0"), std::string::npos);
  }
}

TEST(Train, SmoothedLossDecreases) {
  const Dataset d = generate_dataset(small_data(8));
  TrainConfig cfg;
  cfg.model = small_model();
  cfg.lr = 1e-3;
  cfg.epochs = 40;
  auto p = nn::init_params<float>(2, cfg.model);
  p.norm = fit_normalization(d, all_ids(d));
  const auto m = train(p, d, all_ids(d), cfg);
  const auto s = smoothed_loss(m.loss_curve, 100);
  EXPECT_LT(s.tail, s.head);
}

TEST(Normalization, FittedOnGivenSamplesOnly) {
  const Dataset d = generate_dataset(small_data(4));
  const auto a = fit_normalization(d, std::vector<std::size_t>{0, 1});
  const auto b = fit_normalization(d, std::vector<std::size_t>{2, 3});
  EXPECT_NE(a.target_mean, b.target_mean);
  double sum = 0, n = 0;
  for (std::size_t i : {0u, 1u})
    for (std::size_t k = 0; k < d.samples[i].measurements.mask.size(); ++k)
      if (d.samples[i].measurements.mask[k] != 0.0) {
        sum += d.samples[i].measurements.values[k];
        n += 1;
      }
  EXPECT_NEAR(a.target_mean, sum / n, 1e-9);
}

TEST(Rmse, Examples) {
  Dataset d = generate_dataset(small_data(2, 8));
  for (auto& s : d.samples)
    for (std::size_t k = 0; k < s.measurements.values.size(); ++k)
      if (s.measurements.mask[k] != 0.0) s.measurements.values[k] = std::round(s.measurements.values[k]);
  const auto ids = all_ids(d);
  auto exact = [](const Sample& s) { return s.measurements.values; };
  auto offset = [](const Sample& s) {
    auto v = s.measurements.values;
    for (double& x : v) x += 3.0;
    return v;
  };
  EXPECT_EQ(evaluate_rmse(exact, d, ids), 0.0);
  EXPECT_EQ(evaluate_rmse(offset, d, ids), 3.0);
}

TEST(Rmse, OracleOnNoiselessDataIsZero) {
  auto p = small_data(3);
  p.sampling.noise_db = 0.0;
  const Dataset d = generate_dataset(p);
  EXPECT_EQ(evaluate_rmse(nn::make_oracle_checkpoint<float>(), d, all_ids(d)), 0.0);
}

TEST(Rmse, FilterDropsIndoorAndWeakPoints) {
  auto p = small_data(3);
  p.sampling.n = 256;
  const Dataset d = generate_dataset(p);
  IndoorFilter f;
  std::size_t kept = 0, building = 0;
  for (const auto& s : d.samples)
    for (std::size_t k = 0; k < s.measurements.mask.size(); ++k) {
      if (s.measurements.mask[k] == 0.0) continue;
      const bool b = s.scene.ground_type[k] == ground_code(GroundType::building);
      building += b;
      if (passes_filter(s, k, f)) {
        ++kept;
        EXPECT_GE(s.measurements.values[k], -110.0);
        EXPECT_FALSE(b);
      }
    }
  EXPECT_GT(building, 0u);
  EXPECT_GT(kept, 0u);
  EXPECT_LT(kept, 3u * 256u);
}

TEST(Rmse, EmptyEvaluationThrows) {
  Dataset d = generate_dataset(small_data(2, 8));
  for (auto& s : d.samples) std::fill(s.measurements.mask.begin(), s.measurements.mask.end(), 0.0);
  try {
    evaluate_rmse(nn::make_oracle_checkpoint<float>(), d, all_ids(d));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::empty_evaluation);
  }
}

TEST(Baseline, LearnsPointwiseMap) {
  SyntheticDataParams p = small_data(4, 24);
  Dataset d;
  for (std::size_t i = 0; i < p.n_sites; ++i) {
    Scene s = generate_scene(mix_seed(9, i), p.scene);
    s.antenna.pattern = sector_pattern();
    s.site_id = site_name(i);
    const auto att = antenna_attenuation_map(s);
    MeasurementSet ms;
    for (int r = 0; r < s.height(); ++r)
      for (int c = 0; c < s.width(); ++c) ms.points.push_back({c, r, -2.0 * att.at(c, r)});
    d.samples.push_back(make_sample(std::move(s), ms));
  }
  TrainConfig cfg;
  cfg.model.hidden = 16;
  cfg.model.encoder_hidden_layers = 2;
  cfg.lr = 3e-3;
  cfg.epochs = 600;
  auto params = nn::init_tabular<float>(0, cfg.model);
  params.norm = fit_normalization(d, all_ids(d));
  const double before = evaluate_rmse([&](const Sample& s) { return nn::tabular_forward(params, s.graph, s.scalars); },
                                      d, all_ids(d));
  train(params, d, all_ids(d), cfg);
  const double after = evaluate_rmse(nn::make_checkpoint(params), d, all_ids(d));
  EXPECT_GT(before, 5.0);
  EXPECT_LT(after, 0.5);
}

TEST(Baseline, PredictionIsLocal) {
  Scene s = generate_scene(4);
  const auto p = nn::init_tabular<float>(1, nn::ModelConfig{});
  const auto a = nn::tabular_forward(p, assemble_graph(s), nn::scalar_features(s.antenna));
  const int col = 2, row = 60;
  ASSERT_EQ(s.ground_type.at(col, row), 0.0f);
  s.ground_type.at(col, row) = ground_code(GroundType::building);
  s.obstacle_height.at(col, row) = 25.0f;
  const auto b = nn::tabular_forward(p, assemble_graph(s), nn::scalar_features(s.antenna));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (i != s.ground_type.index(col, row)) EXPECT_EQ(a[i], b[i]);
  EXPECT_NE(a[s.ground_type.index(col, row)], b[s.ground_type.index(col, row)]);
}

TEST(Experiment, AblationUsesGridEdgesOnlyAndSameBudget) {
  const Dataset d = generate_dataset(small_data(5, 12));
  const auto split = split_by_site(d, 0.2, 0);
  TrainConfig cfg;
  cfg.model = small_model();
  cfg.epochs = 1;
  const auto stripped = without_ray_edges(d);
  for (const auto& s : stripped.samples) EXPECT_TRUE(s.graph.ray_edges.empty());
  const auto full = run_experiment<float>(nn::ModelKind::gnn, d, split, cfg);
  const auto abl = ablation_no_ray<float>(d, split, cfg);
  const auto base = tabular_baseline<float>(d, split, cfg);
  EXPECT_EQ(full.metrics.loss_curve.size(), abl.metrics.loss_curve.size());
  EXPECT_EQ(full.metrics.loss_curve.size(), base.metrics.loss_curve.size());
  EXPECT_EQ(abl.model.kind, nn::ModelKind::gnn_no_ray);
  EXPECT_FALSE(abl.model.gnn.config.use_ray);
  EXPECT_TRUE(full.model.gnn.config.use_ray);
  EXPECT_LT(nn::parameter_count(abl.model.gnn), nn::parameter_count(full.model.gnn));
  EXPECT_TRUE(full.metrics.val_rmse_db.has_value());
  EXPECT_GT(full.metrics.inference_s, 0.0);
}

TEST(Speed, GrowsWithAreaAndIsStable) {
  nn::ModelConfig c;
  c.latent = c.hidden = 16;
  const auto ck = nn::make_checkpoint(nn::init_params<float>(0, c));
  auto sample_of = [](int n) {
    SceneGenParams p;
    p.width = p.height = n;
    return make_sample(generate_scene(1, p), MeasurementSet{});
  };
  const auto small = benchmark_speed(ck, sample_of(64), 10);
  const auto large = benchmark_speed(ck, sample_of(128), 10);
  EXPECT_LT(small.median_s, large.median_s);
  EXPECT_EQ(small.samples_s.size(), 10u);
  std::size_t stable = 0;
  for (double t : small.samples_s) stable += std::abs(t - small.median_s) < 0.5 * small.median_s;
  EXPECT_GE(stable, 9u);
}

TEST(Report, CsvFormats) {
  Metrics m;
  m.val_rmse_db = 9.5;
  m.val_rmse_filtered_db = 8.25;
  m.inference_s = 0.125;
  EXPECT_EQ(summary_header() + summary_row("gnn", m),
            "model,rmse_db,rmse_filtered_db,inference_s\ngnn,9.5,8.25,0.125\n");
  EXPECT_EQ(loss_curve_csv({1.5, 0.25}), "step,loss\n0,1.5\n1,0.25\n");
}
