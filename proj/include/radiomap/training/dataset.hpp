#ifndef RADIOMAP_TRAINING_DATASET_HPP
#define RADIOMAP_TRAINING_DATASET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "radiomap/graph.hpp"
#include "radiomap/measurements.hpp"
#include "radiomap/nn/model.hpp"
#include "radiomap/oracle.hpp"
#include "radiomap/random.hpp"
#include "radiomap/scene.hpp"
#include "radiomap/scene_gen.hpp"

namespace radiomap::training {

struct Sample {
  Scene scene;
  PropagationGraph graph;
  MeasurementRaster measurements;
  nn::ScalarInputs scalars{};

  const std::string& site_id() const { return scene.site_id; }
};

struct Dataset {
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }
};

inline Sample make_sample(Scene scene, const MeasurementSet& ms, const GraphOptions& options = {}) {
  Sample s;
  s.graph = assemble_graph(scene, options);
  s.measurements = rasterize_measurements(ms, scene.width(), scene.height());
  s.scalars = nn::scalar_features(scene.antenna);
  s.scene = std::move(scene);
  return s;
}

/// Parameters of a fully synthetic dataset: one generated scene per site,
/// labelled by the oracle and sampled at random pixels.
struct SyntheticDataParams {
  std::size_t n_sites = 60;
  std::uint64_t seed = 1;
  SceneGenParams scene;
  SamplingParams sampling;
  OracleParams oracle;
  GraphOptions graph;
};

struct SyntheticSite {
  Scene scene;
  RasterGrid coverage;
  MeasurementSet measurements;
};

inline SyntheticSite generate_site(const SyntheticDataParams& p, std::size_t index) {
  SyntheticSite site;
  site.scene = generate_scene(mix_seed(p.seed, 2 * index), p.scene);
  site.scene.site_id = site_name(index);
  site.coverage = oracle_coverage(site.scene, p.oracle);
  site.measurements =
      sample_measurements(site.coverage, site.scene, p.sampling, mix_seed(p.seed, 2 * index + 1));
  return site;
}

inline Dataset generate_dataset(const SyntheticDataParams& p) {
  Dataset d;
  d.samples.reserve(p.n_sites);
  for (std::size_t i = 0; i < p.n_sites; ++i) {
    SyntheticSite site = generate_site(p, i);
    d.samples.push_back(make_sample(std::move(site.scene), site.measurements, p.graph));
  }
  return d;
}

/// Copy of the dataset with every graph's ray edges removed.
inline Dataset without_ray_edges(Dataset d) {
  for (auto& s : d.samples) strip_ray_edges(s.graph);
  return d;
}

}  // namespace radiomap::training

#endif  // RADIOMAP_TRAINING_DATASET_HPP
