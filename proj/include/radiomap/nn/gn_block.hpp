#ifndef RADIOMAP_NN_GN_BLOCK_HPP
#define RADIOMAP_NN_GN_BLOCK_HPP

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "radiomap/graph.hpp"
#include "radiomap/nn/matrix.hpp"
#include "radiomap/nn/mlp.hpp"

namespace radiomap::nn {

inline constexpr std::size_t kEdgeTypes = 2;  // grid, ray
inline constexpr std::size_t kGridType = 0;
inline constexpr std::size_t kRayType = 1;

/// One message-passing round. Per edge type t and edge j -> i the message is
/// m = edge_mlp[t]([h_j, h_i, e_ji]) and becomes the new edge latent; node i
/// then updates residually, h_i' = h_i + node_mlp([h_i, sum_grid m, sum_ray m]).
/// An edge type whose MLP is empty is switched off: no messages, zero
/// aggregate, latent passed through untouched.
template <typename T>
struct GnBlockParams {
  std::array<MlpParams<T>, kEdgeTypes> edge_mlp;
  MlpParams<T> node_mlp;
};

template <typename T>
struct EdgeMlpCache {
  MlpCache<T> mlp;
  Matrix<T> edge_in;
};

template <typename T>
struct GnBlockCache {
  Matrix<T> h_in;
  std::array<EdgeMlpCache<T>, kEdgeTypes> edges;
  MlpCache<T> node;
};

template <typename T>
void check_edges(const EdgeSet& es, Eigen::Index num_nodes) {
  require(es.senders.size() == es.receivers.size(), ErrorCategory::shape,
          "edge set sender/receiver lengths differ");
  for (std::size_t k = 0; k < es.size(); ++k)
    require(es.senders[k] >= 0 && es.receivers[k] >= 0 && es.senders[k] < num_nodes &&
                es.receivers[k] < num_nodes,
            ErrorCategory::shape, "edge " + std::to_string(k) + " references a missing node");
}

/// Edge MLP on [h_send, h_recv, e] with the first layer factored so the
/// node-dependent products are computed once per node rather than per edge.
template <typename T>
Matrix<T> edge_mlp_forward(const MlpParams<T>& mlp, const Matrix<T>& h, const Matrix<T>& e,
                           const EdgeSet& es, EdgeMlpCache<T>* cache) {
  const Eigen::Index d = h.cols();
  require(mlp.in_dim() == 2 * d + e.cols(), ErrorCategory::shape,
          "edge MLP input width " + std::to_string(mlp.in_dim()) + " does not match " +
              std::to_string(2 * d + e.cols()));
  require(e.rows() == static_cast<Eigen::Index>(es.size()), ErrorCategory::shape,
          "edge latent rows do not match edge count");
  const auto& w0 = mlp.layers[0].weight;
  const Matrix<T> from_send = h * w0.topRows(d);
  const Matrix<T> from_recv = h * w0.middleRows(d, d);
  Matrix<T> pre0 = e * w0.bottomRows(e.cols());
  pre0.rowwise() += mlp.layers[0].bias;
  gather_add_rows(from_send, es.senders, pre0);
  gather_add_rows(from_recv, es.receivers, pre0);
  Matrix<T> m = mlp_forward_from_pre(mlp, std::move(pre0), cache ? &cache->mlp : nullptr);
  if (cache) cache->edge_in = e;
  return m;
}

/// Accumulates into dh and the MLP gradients; returns the edge-latent gradient.
template <typename T>
Matrix<T> edge_mlp_backward(const MlpParams<T>& mlp, const EdgeMlpCache<T>& cache,
                            const Matrix<T>& h, const EdgeSet& es, Matrix<T> dm, Matrix<T>& dh,
                            MlpParams<T>& grads) {
  const Eigen::Index d = h.cols();
  const Eigen::Index de_cols = cache.edge_in.cols();
  const Matrix<T> dpre0 = mlp_backward_to_pre(mlp, cache.mlp, std::move(dm), grads);
  const auto& w0 = mlp.layers[0].weight;
  auto& g0 = grads.layers[0];

  Matrix<T> to_send = Matrix<T>::Zero(h.rows(), dpre0.cols());
  Matrix<T> to_recv = Matrix<T>::Zero(h.rows(), dpre0.cols());
  scatter_add_rows(dpre0, es.senders, to_send);
  scatter_add_rows(dpre0, es.receivers, to_recv);

  g0.weight.topRows(d).noalias() += h.transpose() * to_send;
  g0.weight.middleRows(d, d).noalias() += h.transpose() * to_recv;
  g0.weight.bottomRows(de_cols).noalias() += cache.edge_in.transpose() * dpre0;
  g0.bias += dpre0.colwise().sum();

  dh.noalias() += to_send * w0.topRows(d).transpose();
  dh.noalias() += to_recv * w0.middleRows(d, d).transpose();
  return dpre0 * w0.bottomRows(de_cols).transpose();
}

/// Forward pass of one block. `edge_latents[t]` is replaced by the new
/// messages for every active edge type.
template <typename T>
Matrix<T> gn_block_forward(const GnBlockParams<T>& block, const Matrix<T>& h,
                           std::array<Matrix<T>, kEdgeTypes>& edge_latents,
                           const std::array<const EdgeSet*, kEdgeTypes>& edges,
                           GnBlockCache<T>* cache = nullptr) {
  const Eigen::Index n = h.rows();
  const Eigen::Index d = h.cols();
  require(block.node_mlp.in_dim() == 3 * d, ErrorCategory::shape,
          "node MLP input must be three latent widths");
  require(block.node_mlp.out_dim() == d, ErrorCategory::shape,
          "node MLP output must equal the latent width");

  Matrix<T> node_in(n, 3 * d);
  node_in.leftCols(d) = h;
  node_in.rightCols(2 * d).setZero();
  for (std::size_t t = 0; t < kEdgeTypes; ++t) {
    if (block.edge_mlp[t].empty() || edges[t] == nullptr) continue;
    check_edges<T>(*edges[t], n);
    Matrix<T> m = edge_mlp_forward(block.edge_mlp[t], h, edge_latents[t], *edges[t],
                                   cache ? &cache->edges[t] : nullptr);
    require(m.cols() == d, ErrorCategory::shape, "edge MLP output must equal the latent width");
    Matrix<T> agg = Matrix<T>::Zero(n, d);
    scatter_add_rows(m, edges[t]->receivers, agg);
    node_in.middleCols(d * static_cast<Eigen::Index>(1 + t), d) = agg;
    edge_latents[t] = std::move(m);
  }
  Matrix<T> out = h + mlp_forward(block.node_mlp, node_in, cache ? &cache->node : nullptr);
  if (cache) cache->h_in = h;
  return out;
}

/// Backward pass of one block. `dedge[t]` holds the gradient w.r.t. the
/// block's output edge latents (empty = zero) and is replaced by the gradient
/// w.r.t. its input edge latents. Returns the gradient w.r.t. the input h.
template <typename T>
Matrix<T> gn_block_backward(const GnBlockParams<T>& block, const GnBlockCache<T>& cache,
                            const std::array<const EdgeSet*, kEdgeTypes>& edges,
                            const Matrix<T>& dh_out, std::array<Matrix<T>, kEdgeTypes>& dedge,
                            GnBlockParams<T>& grads) {
  const Eigen::Index d = cache.h_in.cols();
  const Matrix<T> dnode_in = mlp_backward(block.node_mlp, cache.node, dh_out, grads.node_mlp);
  Matrix<T> dh = dh_out + dnode_in.leftCols(d);
  for (std::size_t t = 0; t < kEdgeTypes; ++t) {
    if (block.edge_mlp[t].empty() || edges[t] == nullptr) continue;
    const Matrix<T> dagg = dnode_in.middleCols(d * static_cast<Eigen::Index>(1 + t), d);
    Matrix<T> dm = dedge[t].size() == 0
                       ? Matrix<T>::Zero(static_cast<Eigen::Index>(edges[t]->size()), d)
                       : std::move(dedge[t]);
    gather_add_rows(dagg, edges[t]->receivers, dm);
    dedge[t] = edge_mlp_backward(block.edge_mlp[t], cache.edges[t], cache.h_in, *edges[t],
                                 std::move(dm), dh, grads.edge_mlp[t]);
  }
  return dh;
}

}  // namespace radiomap::nn

#endif  // RADIOMAP_NN_GN_BLOCK_HPP
