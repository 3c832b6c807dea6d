#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "radiomap/cli/commands.hpp"

using namespace radiomap;
using namespace radiomap::cli;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / ("radiomap_" + std::string(info->test_suite_name()) + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Config tiny_config(const fs::path& root) {
  Config c = parse_config(
      "width = 12\nheight = 12\nn_buildings = 2\nn_sites = 4\nn_points = 40\n"
      "latent = 8\nhidden = 8\nblocks = 2\nencoder_hidden_layers = 1\ndecoder_hidden_layers = 1\n"
      "epochs = 2\nlr = 1e-3\nval_fraction = 0.25\nspeed_reps = 2\n");
  c.checkpoint = (root / "out" / "model.rgck").string();
  return c;
}

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args, const fs::path& dir) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string(RADIOMAP_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

}  // namespace

TEST(Config, ParsesKeysCommentsAndLists) {
  const Config c = parse_config("# comment\n\nn_sites = 7\nlr=0.5\nfrequencies_mhz = 700, 900\nisotropic = true\n");
  EXPECT_EQ(c.data.n_sites, 7u);
  EXPECT_EQ(c.train.lr, 0.5);
  EXPECT_EQ(c.data.scene.frequencies_mhz, (std::vector<double>{700.0, 900.0}));
  EXPECT_EQ(Config{}.train.model.latent, 128u);
}

TEST(Config, UnknownKeyIsNamed) {
  try {
    parse_config("n_sites = 3\nbogus_key = 1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::config);
    EXPECT_NE(std::string(e.what()).find("bogus_key"), std::string::npos);
  }
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse_config("n_sites 3\n"), Error);
  EXPECT_THROW(parse_config("n_sites = 3\nn_sites = 4\n"), Error);
  EXPECT_THROW(parse_config("lr = fast\n"), Error);
  EXPECT_THROW(parse_config("width = 0\n"), Error);
}

TEST(Config, EveryKeyIsAccepted) {
  const auto keys = config_keys();
  EXPECT_GT(keys.size(), 40u);
  for (const char* k : {"lr", "epochs", "blocks", "n_sites", "seed", "checkpoint", "data_dir"})
    EXPECT_NE(std::find(keys.begin(), keys.end(), k), keys.end()) << k;
}

TEST(Render, EndpointsAndClamp) {
  RasterGrid g(4, 3, 5.0, -140.0f);
  g[1] = -40.0f;
  g[2] = -200.0f;
  g[3] = -90.0f;
  g[4] = 10.0f;
  const auto img = render_image(g, -140.0, -40.0);
  EXPECT_EQ(std::vector<int>(img.pixels.begin(), img.pixels.begin() + 5), (std::vector<int>{0, 255, 0, 128, 255}));
}

TEST(Render, PgmRoundTripAndRange) {
  RasterGrid g(3, 4, 5.0);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = -130.0f + 15.0f * static_cast<float>(i);
  const auto img = render_image(g, -140.0, -40.0);
  const auto back = decode_pgm(encode_pgm(img));
  EXPECT_EQ(back.width, 3);
  EXPECT_EQ(back.height, 4);
  EXPECT_EQ(back.pixels, img.pixels);
  EXPECT_EQ(back.vmin, -140.0);
  EXPECT_EQ(back.vmax, -40.0);
}

TEST(Render, InvalidRangeAndValues) {
  RasterGrid g(3, 3, 5.0);
  EXPECT_THROW(render_image(g, -40.0, -40.0), Error);
  EXPECT_THROW(render_image(g, -40.0, -140.0), Error);
  g[0] = std::nanf("");
  EXPECT_THROW(render_image(g, -140.0, -40.0), Error);
  try {
    decode_pgm("P2\n2 2\n255\n0 1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::corrupt_file);
  }
}

TEST(Gen, WritesScenesAndIsReproducible) {
  TempDir tmp;
  Config c = tiny_config(tmp.path());
  c.data.n_sites = 3;
  const auto a = cmd_gen(c, tmp.path() / "a");
  const auto b = cmd_gen(c, tmp.path() / "b");
  ASSERT_EQ(a.size(), 6u);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(tmp.path() / "a")) files += e.is_regular_file();
  EXPECT_EQ(files, 6u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].filename(), b[i].filename());
    EXPECT_EQ(slurp(a[i]), slurp(b[i]));
  }
  c.data.seed = 2;
  const auto d = cmd_gen(c, tmp.path() / "d");
  EXPECT_NE(slurp(a[0]), slurp(d[0]));
}

TEST(Train, CheckpointReproducesValidationRmse) {
  TempDir tmp;
  const Config c = tiny_config(tmp.path());
  cmd_gen(c, tmp.path() / "data");
  const auto res = cmd_train(c, tmp.path() / "data", TrainMode::gnn);
  ASSERT_TRUE(fs::exists(res.checkpoint));
  EXPECT_EQ(slurp(res.loss_csv).substr(0, 10), "step,loss\n");
  EXPECT_EQ(res.metrics.loss_curve.size(), 6u);
  const auto rep = cmd_eval(c, res.checkpoint, tmp.path() / "data");
  EXPECT_EQ(rep.model, "gnn");
  EXPECT_EQ(rep.rmse_db, *res.metrics.val_rmse_db);
  const auto summary = slurp(res.summary);
  EXPECT_EQ(summary.rfind("model,rmse_db,rmse_filtered_db,inference_s\ngnn,", 0), 0u);
}

TEST(Train, AblationAndBaselineLabels) {
  TempDir tmp;
  const Config c = tiny_config(tmp.path());
  cmd_gen(c, tmp.path() / "data");
  const auto abl = cmd_train(c, tmp.path() / "data", TrainMode::no_ray);
  EXPECT_NE(slurp(abl.summary).find("\ngnn_no_ray,"), std::string::npos);
  EXPECT_EQ(cmd_eval(c, abl.checkpoint, tmp.path() / "data").rmse_db, *abl.metrics.val_rmse_db);
  const auto base = cmd_train(c, tmp.path() / "data", TrainMode::baseline);
  EXPECT_NE(slurp(base.summary).find("\ntabular,"), std::string::npos);
}

TEST(Train, MissingDataDirectory) {
  TempDir tmp;
  try {
    cmd_train(tiny_config(tmp.path()), tmp.path() / "nowhere", TrainMode::gnn);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::io);
    EXPECT_NE(std::string(e.what()).find("data directory not found"), std::string::npos);
  }
}

TEST(Eval, OracleOnNoiselessDataIsExact) {
  TempDir tmp;
  Config c = tiny_config(tmp.path());
  c.data.sampling.noise_db = 0.0;
  cmd_gen(c, tmp.path() / "data");
  const auto res = cmd_train(c, tmp.path() / "data", TrainMode::oracle);
  const auto rep = cmd_eval(c, res.checkpoint, tmp.path() / "data");
  EXPECT_EQ(rep.model, "oracle");
  EXPECT_EQ(rep.rmse_db, 0.0);
  EXPECT_GT(rep.inference_s, 0.0);
  const auto text = rep.text();
  EXPECT_EQ(text.rfind("metric,value\nmodel,oracle\nrmse_db,0\n", 0), 0u);
  EXPECT_NE(text.find("\ninference_s,"), std::string::npos);
}

TEST(Predict, DenseFiniteAndReproducible) {
  TempDir tmp;
  const Config c = tiny_config(tmp.path());
  const auto files = cmd_gen(c, tmp.path() / "data");
  const auto res = cmd_train(c, tmp.path() / "data", TrainMode::gnn);
  const auto a = cmd_predict(c, res.checkpoint, files[0], tmp.path() / "pa");
  const auto b = cmd_predict(c, res.checkpoint, files[0], tmp.path() / "pb");
  EXPECT_EQ(a.width(), 12);
  EXPECT_EQ(a.height(), 12);
  for (float v : a.values()) EXPECT_TRUE(std::isfinite(v));
  EXPECT_EQ(slurp(tmp.path() / "pa.csv"), slurp(tmp.path() / "pb.csv"));
  EXPECT_EQ(slurp(tmp.path() / "pa.pgm"), slurp(tmp.path() / "pb.pgm"));

  std::istringstream csv(slurp(tmp.path() / "pa.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 11);
  }
  EXPECT_EQ(rows, 12);
  const auto img = read_pgm(tmp.path() / "pa.pgm");
  EXPECT_EQ(img.width, 12);
  EXPECT_EQ(img.pixels.size(), 144u);
}

TEST(Predict, ReactsToAddedBuilding) {
  TempDir tmp;
  const Config c = tiny_config(tmp.path());
  const auto files = cmd_gen(c, tmp.path() / "data");
  const auto res = cmd_train(c, tmp.path() / "data", TrainMode::gnn);
  Scene s = load_scene(files[0]);
  const Pixel a = s.antenna.pixel;
  const int col = a.col > 5 ? 1 : 10;
  s.ground_type.at(col, a.row) = ground_code(GroundType::building);
  s.obstacle_height.at(col, a.row) = 30.0f;
  save_scene(s, tmp.path() / "edited.rgnn");
  const auto before = cmd_predict(c, res.checkpoint, files[0], tmp.path() / "p0");
  const auto after = cmd_predict(c, res.checkpoint, tmp.path() / "edited.rgnn", tmp.path() / "p1");
  EXPECT_NE(before.values(), after.values());
}

TEST(Binary, SuccessAndSingleLineErrors) {
  TempDir tmp;
  std::ofstream(tmp.path() / "tiny.cfg") << "width = 12\nheight = 12\nn_buildings = 2\nn_sites = 2\nn_points = 20\n";
  const auto gen = run_cli("gen --config " + (tmp.path() / "tiny.cfg").string() + " --out " +
                               (tmp.path() / "data").string(),
                           tmp.path());
  EXPECT_EQ(gen.code, 0) << gen.err;
  EXPECT_TRUE(fs::exists(tmp.path() / "data" / "site_0000.rgnn"));

  const auto missing = run_cli("train --data " + (tmp.path() / "nowhere").string(), tmp.path());
  EXPECT_EQ(missing.code, 3 + static_cast<int>(ErrorCategory::io));
  EXPECT_EQ(missing.err.rfind("error: io: data directory not found", 0), 0u) << missing.err;
  EXPECT_EQ(std::count(missing.err.begin(), missing.err.end(), '\n'), 1);

  std::ofstream(tmp.path() / "bad.cfg") << "bogus_key = 1\n";
  const auto bad = run_cli("gen --config " + (tmp.path() / "bad.cfg").string(), tmp.path());
  EXPECT_EQ(bad.code, 3 + static_cast<int>(ErrorCategory::config));
  EXPECT_NE(bad.err.find("bogus_key"), std::string::npos);
  EXPECT_EQ(std::count(bad.err.begin(), bad.err.end(), '\n'), 1);

  EXPECT_EQ(run_cli("frobnicate", tmp.path()).code, 2);
}
