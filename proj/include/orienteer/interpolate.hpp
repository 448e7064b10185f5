#ifndef ORIENTEER_INTERPOLATE_HPP
#define ORIENTEER_INTERPOLATE_HPP

#include <cmath>
#include <cstddef>

#include "grid.hpp"

namespace orienteer {

namespace detail {

// Fractional index of a coordinate along one axis, snapped onto the node when
// within round-off so that queries at node positions are exact.
inline void locate(double coord, double origin, double dx, std::size_t n, std::size_t& i,
                   double& s) {
  if (n == 1) {
    i = 0;
    s = 0.0;
    return;
  }
  double f = (coord - origin) / dx;
  double const r = std::round(f);
  if (std::abs(f - r) < 1e-9) f = r;
  double const max_f = static_cast<double>(n - 1);
  if (f <= 0.0) f = 0.0;
  if (f >= max_f) f = max_f;
  double fl = std::floor(f);
  if (fl >= max_f) fl = max_f - 1.0;
  i = static_cast<std::size_t>(fl);
  s = f - fl;
}

}  // namespace detail

/// Q1 (bilinear) interpolation of nodal values at a point, clamped into the domain.
///
/// Evaluated as a nonnegative weighted sum of the four stencil values, which is
/// monotone in every node value even in floating point.
inline double interpolate(ScalarGrid const& field, GridGeometry const& g, Point p) {
  std::size_t i = 0, j = 0;
  double t = 0.0, s = 0.0;
  detail::locate(p.y, g.origin.y, g.dx, g.rows, i, t);
  detail::locate(p.x, g.origin.x, g.dx, g.cols, j, s);
  std::size_t const i1 = g.rows == 1 ? i : i + 1;
  std::size_t const j1 = g.cols == 1 ? j : j + 1;
  if (s == 0.0 && t == 0.0) return field(i, j);
  double const w00 = (1.0 - s) * (1.0 - t);
  double const w01 = s * (1.0 - t);
  double const w10 = (1.0 - s) * t;
  double const w11 = s * t;
  return w00 * field(i, j) + w01 * field(i, j1) + w10 * field(i1, j) + w11 * field(i1, j1);
}

}  // namespace orienteer

#endif  // ORIENTEER_INTERPOLATE_HPP
