#ifndef RADIOMAP_NN_FILM_HPP
#define RADIOMAP_NN_FILM_HPP

#include "radiomap/nn/matrix.hpp"
#include "radiomap/nn/mlp.hpp"

namespace radiomap::nn {

/// Feature-wise linear modulation: a generator MLP maps the scalar inputs to
/// (gamma, beta), each as wide as the node latent, and every node row becomes
/// gamma * h + beta.
template <typename T>
struct FilmParams {
  MlpParams<T> generator;

  Eigen::Index width() const { return generator.out_dim() / 2; }
};

template <typename T>
struct FilmCache {
  MlpCache<T> generator;
  RowVector<T> gamma;
  Matrix<T> h;
};

template <typename T>
Matrix<T> film_apply(const FilmParams<T>& film, const RowVector<T>& scalars, const Matrix<T>& h,
                     FilmCache<T>* cache = nullptr) {
  const Eigen::Index d = film.width();
  require(film.generator.out_dim() == 2 * d, ErrorCategory::shape,
          "FiLM generator output must be twice the latent width");
  require(h.cols() == d, ErrorCategory::shape,
          "FiLM expects latent width " + std::to_string(d) + ", got " + std::to_string(h.cols()));
  Matrix<T> s = scalars;
  MlpCache<T>* gen_cache = cache ? &cache->generator : nullptr;
  const Matrix<T> gb = mlp_forward(film.generator, s, gen_cache);
  const RowVector<T> gamma = gb.leftCols(d);
  const RowVector<T> beta = gb.rightCols(d);
  Matrix<T> out = (h.array().rowwise() * gamma.array()).matrix();
  out.rowwise() += beta;
  if (cache) {
    cache->gamma = gamma;
    cache->h = h;
  }
  return out;
}

/// Returns dh; accumulates generator gradients.
template <typename T>
Matrix<T> film_backward(const FilmParams<T>& film, const FilmCache<T>& cache, const Matrix<T>& dout,
                        FilmParams<T>& grads) {
  const Eigen::Index d = film.width();
  Matrix<T> dgb(1, 2 * d);
  dgb.leftCols(d) = (dout.array() * cache.h.array()).colwise().sum();
  dgb.rightCols(d) = dout.colwise().sum();
  mlp_backward(film.generator, cache.generator, std::move(dgb), grads.generator);
  return (dout.array().rowwise() * cache.gamma.array()).matrix();
}

}  // namespace radiomap::nn

#endif  // RADIOMAP_NN_FILM_HPP
