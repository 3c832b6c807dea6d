#ifndef RADIOMAP_NN_TABULAR_HPP
#define RADIOMAP_NN_TABULAR_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "radiomap/graph.hpp"
#include "radiomap/nn/loss.hpp"
#include "radiomap/nn/mlp.hpp"
#include "radiomap/nn/model.hpp"

namespace radiomap::nn {

/// Pointwise regressor: each pixel's 4 features plus the 3 scalars, no
/// neighbourhood information.
template <typename T>
struct TabularParams {
  ModelConfig config;  // hidden width and encoder depth are used
  Normalization norm;
  MlpParams<T> mlp;
};

inline constexpr std::size_t kTabularInputDim = kNodeFeatureDim + kScalarDim;

template <typename T>
TabularParams<T> init_tabular(std::uint64_t seed, const ModelConfig& c) {
  Rng rng(seed);
  TabularParams<T> p;
  p.config = c;
  p.mlp = make_mlp<T>(mlp_dims(kTabularInputDim, c.hidden, c.encoder_hidden_layers, 1), rng);
  return p;
}

template <typename F, typename P0, typename... P>
void visit_tabular_tensors(F&& f, P0& p0, P&... p) {
  visit_tensors(f, p0.mlp, p.mlp...);
}

template <typename T>
TabularParams<T> zeros_like(const TabularParams<T>& p) {
  TabularParams<T> z = p;
  z.mlp = zeros_like(p.mlp);
  return z;
}

template <typename T>
std::size_t parameter_count(const TabularParams<T>& p) {
  return parameter_count(p.mlp);
}

template <typename T>
Matrix<T> tabular_inputs(const TabularParams<T>& p, const PropagationGraph& g, const ScalarInputs& scalars) {
  const Matrix<T> nodes = normalized_node_features<T>(g, p.norm);
  const RowVector<T> s = normalized_scalars<T>(scalars, p.norm);
  Matrix<T> x(nodes.rows(), static_cast<Eigen::Index>(kTabularInputDim));
  x.leftCols(kNodeFeatureDim) = nodes;
  x.rightCols(kScalarDim).rowwise() = s;
  return x;
}

template <typename T>
std::vector<double> tabular_forward(const TabularParams<T>& p, const PropagationGraph& g,
                                    const ScalarInputs& scalars) {
  const Matrix<T> y = mlp_forward(p.mlp, tabular_inputs(p, g, scalars));
  std::vector<double> out(static_cast<std::size_t>(y.rows()));
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<double>(y(static_cast<Eigen::Index>(i), 0)) * p.norm.target_std +
             p.norm.target_mean;
  return out;
}

template <typename T>
MaskedLoss loss_and_gradients(const TabularParams<T>& p, const PropagationGraph& g,
                              const ScalarInputs& scalars, std::span<const double> target_db,
                              std::span<const double> mask, TabularParams<T>& grads) {
  const std::size_t n = g.num_nodes();
  require(target_db.size() == n && mask.size() == n, ErrorCategory::shape,
          "target and mask must have one entry per node");
  MlpCache<T> cache;
  const Matrix<T> y = mlp_forward(p.mlp, tabular_inputs(p, g, scalars), &cache);
  std::vector<double> target(n);
  for (std::size_t i = 0; i < n; ++i)
    target[i] = mask[i] != 0.0 ? (target_db[i] - p.norm.target_mean) / p.norm.target_std : 0.0;
  const std::span<const T> pred{y.data(), n};
  const MaskedLoss loss = masked_mse_loss(pred, std::span<const double>(target), mask);
  Matrix<T> dy(static_cast<Eigen::Index>(n), 1);
  masked_mse_gradient(pred, std::span<const double>(target), mask, std::span<T>{dy.data(), n});
  mlp_backward(p.mlp, cache, std::move(dy), grads.mlp);
  return loss;
}

}  // namespace radiomap::nn

#endif  // RADIOMAP_NN_TABULAR_HPP
