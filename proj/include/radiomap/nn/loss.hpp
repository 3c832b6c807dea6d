#ifndef RADIOMAP_NN_LOSS_HPP
#define RADIOMAP_NN_LOSS_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>

#include "radiomap/error.hpp"

namespace radiomap::nn {

struct MaskedLoss {
  double loss = 0.0;       // (1/n) sum m_i (y_i - yhat_i)^2, n = all components
  double masked_sse = 0.0;
  double mask_count = 0.0;

  /// RMSE over the masked-in subset; empty when nothing is masked in.
  std::optional<double> subset_rmse() const {
    if (mask_count <= 0.0) return std::nullopt;
    return std::sqrt(masked_sse / mask_count);
  }
};

template <typename P, typename Y, typename M>
MaskedLoss masked_mse_loss(std::span<P> pred, std::span<Y> target, std::span<M> mask) {
  require(pred.size() == target.size() && pred.size() == mask.size(), ErrorCategory::shape,
          "prediction, target and mask lengths differ");
  MaskedLoss out;
  if (pred.empty()) return out;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double m = static_cast<double>(mask[i]);
    if (m == 0.0) continue;
    const double r = static_cast<double>(target[i]) - static_cast<double>(pred[i]);
    out.masked_sse += m * r * r;
    out.mask_count += m;
  }
  out.loss = out.masked_sse / static_cast<double>(pred.size());
  return out;
}

/// d loss / d pred_i = (2/n) m_i (pred_i - y_i)
template <typename T, typename Y, typename M>
void masked_mse_gradient(std::span<const T> pred, std::span<Y> target, std::span<M> mask,
                         std::span<T> grad) {
  const double scale = 2.0 / static_cast<double>(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i)
    grad[i] = static_cast<T>(scale * static_cast<double>(mask[i]) *
                             (static_cast<double>(pred[i]) - static_cast<double>(target[i])));
}

}  // namespace radiomap::nn

#endif  // RADIOMAP_NN_LOSS_HPP
