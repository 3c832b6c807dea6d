#ifndef RADIOMAP_LINE_HPP
#define RADIOMAP_LINE_HPP

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "radiomap/scene.hpp"

namespace radiomap {

namespace detail {

// round(num / den) with ties away from zero, den > 0
inline int round_div_away(long num, long den) {
  const long mag = (2 * std::labs(num) + den) / (2 * den);
  return static_cast<int>(num < 0 ? -mag : mag);
}

}  // namespace detail

/// Pixel k (0 <= k <= M, M = max(|dx|, |dy|)) of the rasterized line from the
/// origin to (dx, dy). Minor-axis ties round away from zero, which makes the
/// line commute with 90 degree rotations and axis mirrors.
inline Pixel line_step(int dx, int dy, int k) {
  const int m = std::max(std::abs(dx), std::abs(dy));
  if (m == 0) return {0, 0};
  return {detail::round_div_away(static_cast<long>(k) * dx, m),
          detail::round_div_away(static_cast<long>(k) * dy, m)};
}

/// Bresenham-style line from `from` to `to`, both endpoints included.
inline std::vector<Pixel> bresenham_line(Pixel from, Pixel to) {
  const int dx = to.col - from.col;
  const int dy = to.row - from.row;
  const int m = std::max(std::abs(dx), std::abs(dy));
  std::vector<Pixel> out;
  out.reserve(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) {
    const Pixel d = line_step(dx, dy, k);
    out.push_back({from.col + d.col, from.row + d.row});
  }
  return out;
}

/// Pixel `stride` steps before `to` on the line from `from`; clamps at `from`.
inline Pixel line_predecessor(Pixel from, Pixel to, int stride = 1) {
  const int dx = to.col - from.col;
  const int dy = to.row - from.row;
  const int m = std::max(std::abs(dx), std::abs(dy));
  const Pixel d = line_step(dx, dy, std::max(m - stride, 0));
  return {from.col + d.col, from.row + d.row};
}

/// Every cell whose closed square is touched by the segment joining the
/// centers of `from` and `to`, in walk order. Where the segment passes exactly
/// through a cell corner both side cells are emitted before the diagonal one.
inline std::vector<Pixel> supercover_line(Pixel from, Pixel to) {
  const int dx = to.col - from.col;
  const int dy = to.row - from.row;
  const long nx = std::abs(dx);
  const long ny = std::abs(dy);
  const int sx = dx > 0 ? 1 : -1;
  const int sy = dy > 0 ? 1 : -1;

  std::vector<Pixel> out;
  out.reserve(static_cast<std::size_t>(nx + ny) + 1);
  Pixel p = from;
  out.push_back(p);
  for (long ix = 0, iy = 0; ix < nx || iy < ny;) {
    const long decision = (1 + 2 * ix) * ny - (1 + 2 * iy) * nx;
    if (decision == 0) {
      out.push_back({p.col + sx, p.row});
      out.push_back({p.col, p.row + sy});
      p.col += sx;
      p.row += sy;
      ++ix;
      ++iy;
    } else if (decision < 0) {
      p.col += sx;
      ++ix;
    } else {
      p.row += sy;
      ++iy;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace radiomap

#endif  // RADIOMAP_LINE_HPP
