#ifndef RADIOMAP_NN_MATRIX_HPP
#define RADIOMAP_NN_MATRIX_HPP

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "radiomap/error.hpp"

namespace radiomap::nn {

template <typename T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
using RowVector = Eigen::Matrix<T, 1, Eigen::Dynamic>;

template <typename Derived>
std::span<typename Derived::Scalar> tensor_span(Eigen::PlainObjectBase<Derived>& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

template <typename Derived>
std::span<const typename Derived::Scalar> tensor_span(const Eigen::PlainObjectBase<Derived>& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

inline std::string shape_str(Eigen::Index rows, Eigen::Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

/// out.row(idx[k]) += src.row(k)
template <typename T>
void scatter_add_rows(const Matrix<T>& src, const std::vector<int>& idx, Matrix<T>& out) {
  for (std::size_t k = 0; k < idx.size(); ++k) out.row(idx[k]) += src.row(static_cast<Eigen::Index>(k));
}

/// out.row(k) += src.row(idx[k])
template <typename T>
void gather_add_rows(const Matrix<T>& src, const std::vector<int>& idx, Matrix<T>& out) {
  for (std::size_t k = 0; k < idx.size(); ++k) out.row(static_cast<Eigen::Index>(k)) += src.row(idx[k]);
}

}  // namespace radiomap::nn

#endif  // RADIOMAP_NN_MATRIX_HPP
