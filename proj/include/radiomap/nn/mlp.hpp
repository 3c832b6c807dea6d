#ifndef RADIOMAP_NN_MLP_HPP
#define RADIOMAP_NN_MLP_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "radiomap/error.hpp"
#include "radiomap/nn/matrix.hpp"
#include "radiomap/random.hpp"

namespace radiomap::nn {

/// y = x * weight + bias, weight stored input-major (in x out).
template <typename T>
struct Linear {
  Matrix<T> weight;
  RowVector<T> bias;

  Eigen::Index in_dim() const { return weight.rows(); }
  Eigen::Index out_dim() const { return weight.cols(); }
};

/// ReLU between layers, linear output layer.
template <typename T>
struct MlpParams {
  std::vector<Linear<T>> layers;

  bool empty() const { return layers.empty(); }
  Eigen::Index in_dim() const { return layers.front().in_dim(); }
  Eigen::Index out_dim() const { return layers.back().out_dim(); }
};

/// inputs[l] is what layer l consumed; for l >= 1 it is the post-ReLU
/// activation, so the ReLU mask is recoverable as inputs[l] > 0.
template <typename T>
struct MlpCache {
  std::vector<Matrix<T>> inputs;
};

/// Glorot-uniform weights, zero biases. dims = {in, hidden..., out}.
template <typename T>
MlpParams<T> make_mlp(const std::vector<std::size_t>& dims, Rng& rng) {
  require(dims.size() >= 2, ErrorCategory::invalid_parameter, "an MLP needs at least one layer");
  MlpParams<T> p;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const auto in = static_cast<Eigen::Index>(dims[l]);
    const auto out = static_cast<Eigen::Index>(dims[l + 1]);
    Linear<T> lin;
    lin.weight.resize(in, out);
    const double s = std::sqrt(6.0 / static_cast<double>(in + out));
    for (Eigen::Index i = 0; i < lin.weight.size(); ++i)
      lin.weight.data()[i] = static_cast<T>(rng.uniform(-s, s));
    lin.bias = RowVector<T>::Zero(out);
    p.layers.push_back(std::move(lin));
  }
  return p;
}

inline std::vector<std::size_t> mlp_dims(std::size_t in, std::size_t hidden, std::size_t hidden_layers,
                                  std::size_t out) {
  std::vector<std::size_t> dims{in};
  for (std::size_t i = 0; i < hidden_layers; ++i) dims.push_back(hidden);
  dims.push_back(out);
  return dims;
}

template <typename T>
MlpParams<T> zeros_like(const MlpParams<T>& p) {
  MlpParams<T> z;
  for (const auto& l : p.layers)
    z.layers.push_back({Matrix<T>::Zero(l.weight.rows(), l.weight.cols()),
                        RowVector<T>::Zero(l.bias.size())});
  return z;
}

/// Calls f(span...) on each weight then bias, layer by layer, for the given
/// structurally identical parameter sets.
template <typename F, typename... P>
void visit_tensors(F&& f, P&... p) {
  const std::size_t n = (p, ...).layers.size();
  for (std::size_t l = 0; l < n; ++l) {
    f(tensor_span(p.layers[l].weight)...);
    f(tensor_span(p.layers[l].bias)...);
  }
}

/// Continues the forward pass from layer 0's pre-activation. Lets callers
/// that compute the first affine map in a factored way reuse the tail.
template <typename T>
Matrix<T> mlp_forward_from_pre(const MlpParams<T>& p, Matrix<T> pre0, MlpCache<T>* cache) {
  const std::size_t n = p.layers.size();
  if (cache) cache->inputs.resize(n);
  Matrix<T> x = std::move(pre0);
  for (std::size_t l = 1; l < n; ++l) {
    x = x.cwiseMax(T(0));
    Matrix<T> y = x * p.layers[l].weight;
    y.rowwise() += p.layers[l].bias;
    if (cache) cache->inputs[l] = std::move(x);
    x = std::move(y);
  }
  return x;
}

template <typename T>
Matrix<T> mlp_forward(const MlpParams<T>& p, const Matrix<T>& x, MlpCache<T>* cache = nullptr) {
  require(!p.empty(), ErrorCategory::shape, "empty MLP");
  require(x.cols() == p.in_dim(), ErrorCategory::shape,
          "MLP expects " + std::to_string(p.in_dim()) + " input columns, got " +
              std::to_string(x.cols()));
  Matrix<T> pre0 = x * p.layers[0].weight;
  pre0.rowwise() += p.layers[0].bias;
  Matrix<T> y = mlp_forward_from_pre(p, std::move(pre0), cache);
  if (cache) cache->inputs[0] = x;
  return y;
}

/// Backpropagates dy down to layer 0's pre-activation, accumulating the
/// gradients of layers 1..L-1 into `grads`. Returns d(pre0).
template <typename T>
Matrix<T> mlp_backward_to_pre(const MlpParams<T>& p, const MlpCache<T>& cache, Matrix<T> dy,
                              MlpParams<T>& grads) {
  for (std::size_t l = p.layers.size(); l-- > 1;) {
    const Matrix<T>& x = cache.inputs[l];
    grads.layers[l].weight.noalias() += x.transpose() * dy;
    grads.layers[l].bias += dy.colwise().sum();
    Matrix<T> dx = dy * p.layers[l].weight.transpose();
    dy = (x.array() > T(0)).select(dx, T(0));
  }
  return dy;
}

/// Full backward pass; accumulates all layer gradients and returns dx.
template <typename T>
Matrix<T> mlp_backward(const MlpParams<T>& p, const MlpCache<T>& cache, Matrix<T> dy,
                       MlpParams<T>& grads) {
  Matrix<T> dpre0 = mlp_backward_to_pre(p, cache, std::move(dy), grads);
  grads.layers[0].weight.noalias() += cache.inputs[0].transpose() * dpre0;
  grads.layers[0].bias += dpre0.colwise().sum();
  return dpre0 * p.layers[0].weight.transpose();
}

template <typename T>
std::size_t parameter_count(const MlpParams<T>& p) {
  std::size_t n = 0;
  for (const auto& l : p.layers) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

}  // namespace radiomap::nn

#endif  // RADIOMAP_NN_MLP_HPP
