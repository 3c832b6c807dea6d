#ifndef RADIOMAP_NN_MODEL_HPP
#define RADIOMAP_NN_MODEL_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "radiomap/graph.hpp"
#include "radiomap/nn/film.hpp"
#include "radiomap/nn/gn_block.hpp"
#include "radiomap/nn/loss.hpp"
#include "radiomap/nn/matrix.hpp"
#include "radiomap/nn/mlp.hpp"
#include "radiomap/random.hpp"

namespace radiomap::nn {

/// Widths and depths. Defaults are the full-size configuration.
struct ModelConfig {
  std::size_t latent = 128;
  std::size_t hidden = 128;
  std::size_t encoder_hidden_layers = 2;
  std::size_t decoder_hidden_layers = 2;
  std::size_t block_hidden_layers = 1;
  std::size_t film_hidden_layers = 1;
  std::size_t blocks = 10;
  bool use_ray = true;
  bool per_block_film = false;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Input standardization constants, fitted on the training split and carried
/// with the weights so inference is self-contained.
struct Normalization {
  std::array<double, kNodeFeatureDim> node_mean{};
  std::array<double, kNodeFeatureDim> node_std{1.0, 1.0, 1.0, 1.0};
  std::array<double, kScalarDim> scalar_mean{};
  std::array<double, kScalarDim> scalar_std{1.0, 1.0, 1.0};
  double target_mean = 0.0;
  double target_std = 1.0;

  friend bool operator==(const Normalization&, const Normalization&) = default;
};

using ScalarInputs = std::array<double, kScalarDim>;

/// Raw scalar conditioning inputs: log10 of the carrier in MHz, antenna
/// height in meters, EIRP in dBm.
inline ScalarInputs scalar_features(const AntennaConfig& a) {
  return {std::log10(a.freq_mhz), a.height_m, a.eirp_dbm};
}

template <typename T>
struct ModelParams {
  ModelConfig config;
  Normalization norm;
  MlpParams<T> node_encoder;
  std::array<MlpParams<T>, kEdgeTypes> edge_encoder;  // grid, ray (ray empty when disabled)
  std::vector<FilmParams<T>> films;                   // one, or one per block
  std::vector<GnBlockParams<T>> blocks;
  MlpParams<T> node_decoder;
};

template <typename T>
ModelParams<T> init_params(std::uint64_t seed, const ModelConfig& c) {
  require(c.latent > 0 && c.hidden > 0 && c.blocks > 0, ErrorCategory::invalid_parameter,
          "model widths and block count must be positive");
  Rng rng(seed);
  ModelParams<T> p;
  p.config = c;
  p.node_encoder = make_mlp<T>(mlp_dims(kNodeFeatureDim, c.hidden, c.encoder_hidden_layers, c.latent), rng);
  const auto edge_dims = mlp_dims(kEdgeAttrDim, c.hidden, c.encoder_hidden_layers, c.latent);
  p.edge_encoder[kGridType] = make_mlp<T>(edge_dims, rng);
  if (c.use_ray) p.edge_encoder[kRayType] = make_mlp<T>(edge_dims, rng);

  const std::size_t n_films = c.per_block_film ? c.blocks : 1;
  for (std::size_t i = 0; i < n_films; ++i)
    p.films.push_back({make_mlp<T>(mlp_dims(kScalarDim, c.hidden, c.film_hidden_layers, 2 * c.latent), rng)});

  const auto block_dims = mlp_dims(3 * c.latent, c.hidden, c.block_hidden_layers, c.latent);
  for (std::size_t b = 0; b < c.blocks; ++b) {
    GnBlockParams<T> blk;
    blk.edge_mlp[kGridType] = make_mlp<T>(block_dims, rng);
    if (c.use_ray) blk.edge_mlp[kRayType] = make_mlp<T>(block_dims, rng);
    blk.node_mlp = make_mlp<T>(block_dims, rng);
    // residual branches start as the identity
    for (auto* m : {&blk.edge_mlp[kGridType], &blk.edge_mlp[kRayType], &blk.node_mlp})
      if (!m->empty()) m->layers.back().weight.setZero();
    p.blocks.push_back(std::move(blk));
  }
  p.node_decoder = make_mlp<T>(mlp_dims(c.latent, c.hidden, c.decoder_hidden_layers, 1), rng);
  return p;
}

/// Visits every trainable tensor of structurally identical models in a fixed
/// order: node encoder, edge encoders, FiLM generators, blocks, decoder.
template <typename F, typename P0, typename... P>
void visit_model_tensors(F&& f, P0& p0, P&... p) {
  visit_tensors(f, p0.node_encoder, p.node_encoder...);
  for (std::size_t t = 0; t < kEdgeTypes; ++t)
    visit_tensors(f, p0.edge_encoder[t], p.edge_encoder[t]...);
  for (std::size_t i = 0; i < p0.films.size(); ++i)
    visit_tensors(f, p0.films[i].generator, p.films[i].generator...);
  for (std::size_t b = 0; b < p0.blocks.size(); ++b) {
    for (std::size_t t = 0; t < kEdgeTypes; ++t)
      visit_tensors(f, p0.blocks[b].edge_mlp[t], p.blocks[b].edge_mlp[t]...);
    visit_tensors(f, p0.blocks[b].node_mlp, p.blocks[b].node_mlp...);
  }
  visit_tensors(f, p0.node_decoder, p.node_decoder...);
}

template <typename T>
ModelParams<T> zeros_like(const ModelParams<T>& p) {
  ModelParams<T> z = p;
  visit_model_tensors([](auto s) { std::fill(s.begin(), s.end(), T(0)); }, z);
  return z;
}

template <typename T>
std::size_t parameter_count(const ModelParams<T>& p) {
  std::size_t n = 0;
  visit_model_tensors([&](auto s) { n += s.size(); }, p);
  return n;
}

/// Converts between scalar precisions, keeping structure and constants.
template <typename To, typename From>
ModelParams<To> cast_params(const ModelParams<From>& src) {
  auto dst = init_params<To>(0, src.config);
  dst.norm = src.norm;
  visit_model_tensors(
      [](auto d, auto s) {
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = static_cast<To>(s[i]);
      },
      dst, src);
  return dst;
}

template <typename T>
Matrix<T> normalized_node_features(const PropagationGraph& g, const Normalization& norm) {
  Matrix<T> x(static_cast<Eigen::Index>(g.num_nodes()), kNodeFeatureDim);
  for (std::size_t i = 0; i < g.num_nodes(); ++i)
    for (std::size_t f = 0; f < kNodeFeatureDim; ++f)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(f)) =
          static_cast<T>((g.node_features[i][f] - norm.node_mean[f]) / norm.node_std[f]);
  return x;
}

template <typename T>
RowVector<T> normalized_scalars(const ScalarInputs& s, const Normalization& norm) {
  RowVector<T> v(kScalarDim);
  for (std::size_t k = 0; k < kScalarDim; ++k)
    v(static_cast<Eigen::Index>(k)) = static_cast<T>((s[k] - norm.scalar_mean[k]) / norm.scalar_std[k]);
  return v;
}

template <typename T>
Matrix<T> edge_attr_matrix(const EdgeSet& es) {
  Matrix<T> a(static_cast<Eigen::Index>(es.size()), kEdgeAttrDim);
  for (std::size_t k = 0; k < es.size(); ++k) {
    a(static_cast<Eigen::Index>(k), 0) = static_cast<T>(es.attrs[k].dr);
    a(static_cast<Eigen::Index>(k), 1) = static_cast<T>(es.attrs[k].dtheta);
  }
  return a;
}

template <typename T>
std::array<const EdgeSet*, kEdgeTypes> active_edges(const ModelParams<T>& p, const PropagationGraph& g) {
  return {&g.grid_edges, p.config.use_ray ? &g.ray_edges : nullptr};
}

template <typename T>
struct ForwardCache {
  MlpCache<T> node_encoder;
  std::array<MlpCache<T>, kEdgeTypes> edge_encoder;
  std::vector<FilmCache<T>> films;
  std::vector<GnBlockCache<T>> blocks;
  MlpCache<T> decoder;
};

/// Encode, FiLM-condition, run the message-passing blocks, decode. Returns the
/// N x 1 prediction in standardized target units.
template <typename T>
Matrix<T> forward_standardized(const ModelParams<T>& p, const PropagationGraph& g,
                               const ScalarInputs& scalars, ForwardCache<T>* cache = nullptr) {
  require(g.num_nodes() > 0, ErrorCategory::shape, "graph has no nodes");
  const auto edges = active_edges(p, g);
  const RowVector<T> s = normalized_scalars<T>(scalars, p.norm);
  const bool per_block = p.config.per_block_film;
  if (cache) {
    cache->films.resize(p.films.size());
    cache->blocks.resize(p.blocks.size());
  }

  Matrix<T> h = mlp_forward(p.node_encoder, normalized_node_features<T>(g, p.norm),
                            cache ? &cache->node_encoder : nullptr);
  std::array<Matrix<T>, kEdgeTypes> e;
  for (std::size_t t = 0; t < kEdgeTypes; ++t)
    if (edges[t] && !p.edge_encoder[t].empty())
      e[t] = mlp_forward(p.edge_encoder[t], edge_attr_matrix<T>(*edges[t]),
                         cache ? &cache->edge_encoder[t] : nullptr);

  if (!per_block) h = film_apply(p.films[0], s, h, cache ? &cache->films[0] : nullptr);
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    if (per_block) h = film_apply(p.films[b], s, h, cache ? &cache->films[b] : nullptr);
    h = gn_block_forward(p.blocks[b], h, e, edges, cache ? &cache->blocks[b] : nullptr);
  }
  return mlp_forward(p.node_decoder, h, cache ? &cache->decoder : nullptr);
}

/// Per-node prediction in dB.
template <typename T>
std::vector<double> model_forward(const ModelParams<T>& p, const PropagationGraph& g,
                                  const ScalarInputs& scalars) {
  const Matrix<T> y = forward_standardized(p, g, scalars);
  std::vector<double> out(static_cast<std::size_t>(y.rows()));
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<double>(y(static_cast<Eigen::Index>(i), 0)) * p.norm.target_std +
             p.norm.target_mean;
  return out;
}

/// Masked MSE in standardized target units and its exact gradient with
/// respect to every parameter (accumulated into `grads`, which must be
/// structurally identical to `p`, typically from zeros_like).
template <typename T>
MaskedLoss loss_and_gradients(const ModelParams<T>& p, const PropagationGraph& g,
                              const ScalarInputs& scalars, std::span<const double> target_db,
                              std::span<const double> mask, ModelParams<T>& grads) {
  const std::size_t n = g.num_nodes();
  require(target_db.size() == n && mask.size() == n, ErrorCategory::shape,
          "target and mask must have one entry per node");
  ForwardCache<T> cache;
  const Matrix<T> y = forward_standardized(p, g, scalars, &cache);

  std::vector<double> target(n);
  for (std::size_t i = 0; i < n; ++i)
    target[i] = mask[i] != 0.0 ? (target_db[i] - p.norm.target_mean) / p.norm.target_std : 0.0;
  const std::span<const T> pred{y.data(), n};
  const MaskedLoss loss = masked_mse_loss(pred, std::span<const double>(target), mask);

  Matrix<T> dy(static_cast<Eigen::Index>(n), 1);
  masked_mse_gradient(pred, std::span<const double>(target), mask, std::span<T>{dy.data(), n});

  const auto edges = active_edges(p, g);
  const bool per_block = p.config.per_block_film;
  Matrix<T> dh = mlp_backward(p.node_decoder, cache.decoder, std::move(dy), grads.node_decoder);
  std::array<Matrix<T>, kEdgeTypes> de;
  for (std::size_t b = p.blocks.size(); b-- > 0;) {
    dh = gn_block_backward(p.blocks[b], cache.blocks[b], edges, dh, de, grads.blocks[b]);
    if (per_block) dh = film_backward(p.films[b], cache.films[b], dh, grads.films[b]);
  }
  if (!per_block) dh = film_backward(p.films[0], cache.films[0], dh, grads.films[0]);
  mlp_backward(p.node_encoder, cache.node_encoder, std::move(dh), grads.node_encoder);
  for (std::size_t t = 0; t < kEdgeTypes; ++t) {
    if (!edges[t] || p.edge_encoder[t].empty()) continue;
    if (de[t].size() == 0)
      de[t] = Matrix<T>::Zero(static_cast<Eigen::Index>(edges[t]->size()),
                              static_cast<Eigen::Index>(p.config.latent));
    mlp_backward(p.edge_encoder[t], cache.edge_encoder[t], std::move(de[t]), grads.edge_encoder[t]);
  }
  return loss;
}

}  // namespace radiomap::nn

#endif  // RADIOMAP_NN_MODEL_HPP
