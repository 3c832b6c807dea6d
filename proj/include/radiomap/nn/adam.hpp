#ifndef RADIOMAP_NN_ADAM_HPP
#define RADIOMAP_NN_ADAM_HPP

#include <cmath>
#include <cstdint>
#include <span>

namespace radiomap::nn {

struct AdamOptions {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Moments mirror the parameter structure P.
template <typename P>
struct AdamState {
  P m;
  P v;
  std::int64_t step = 0;
  AdamOptions options;
};

/// In-place bias-corrected Adam update of one tensor.
template <typename T>
void adam_update(std::span<T> param, std::span<const T> grad, std::span<T> m, std::span<T> v,
                 std::int64_t step, const AdamOptions& o) {
  const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    const double mi = o.beta1 * m[i] + (1.0 - o.beta1) * g;
    const double vi = o.beta2 * v[i] + (1.0 - o.beta2) * g * g;
    m[i] = static_cast<T>(mi);
    v[i] = static_cast<T>(vi);
    param[i] = static_cast<T>(param[i] - o.lr * (mi / c1) / (std::sqrt(vi / c2) + o.eps));
  }
}

/// One optimizer step. `visit` is the structural visitor for P (for example
/// visit_model_tensors), called with (f, params, grads, m, v).
template <typename P, typename Visit>
void adam_step(AdamState<P>& state, P& params, const P& grads, Visit&& visit) {
  ++state.step;
  const auto step = state.step;
  const auto& o = state.options;
  visit(
      [&](auto p, auto g, auto m, auto v) {
        using T = typename decltype(p)::element_type;
        adam_update<T>(p, g, m, v, step, o);
      },
      params, grads, state.m, state.v);
}

}  // namespace radiomap::nn

#endif  // RADIOMAP_NN_ADAM_HPP
