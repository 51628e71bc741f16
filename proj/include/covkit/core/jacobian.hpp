#pragma once

// Dual Jacobian engine: forward-mode dual numbers as the primary route and
// central finite differences as an independent cross-check oracle.

#include <cmath>
#include <limits>

#include "covkit/core/map.hpp"
#include "covkit/core/types.hpp"

namespace covkit {

enum class DiffMode { kDual, kFiniteDifference };

struct DiffConfig {
  DiffMode mode = DiffMode::kDual;
};

// Central differences with step h_i = cbrt(eps) * max(1, |x_i|).
inline Mat jacobian_fd(const SmoothMap& map, const Vec& x) {
  require_dim(x, map.in_dim(), "jacobian_fd input");
  const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  Mat J(map.out_dim(), map.in_dim());
  for (int i = 0; i < map.in_dim(); ++i) {
    const double h = base * std::max(1.0, std::abs(x(i)));
    Vec xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    J.col(i) = (map(xp) - map(xm)) / (2.0 * h);
  }
  return J;
}

inline Mat jacobian(const SmoothMap& map, const Vec& x, const DiffConfig& cfg = {}) {
  Mat J = (cfg.mode == DiffMode::kDual) ? map.jacobian_dual(x) : jacobian_fd(map, x);
  if (!J.allFinite())
    throw SingularError("jacobian: non-finite entries; map is singular at this point");
  return J;
}

// Relative Frobenius disagreement between the dual and finite-difference
// Jacobians; the smooth-map contract keeps this below 1e-6.
inline double jacobian_cross_check(const SmoothMap& map, const Vec& x) {
  const Mat a = jacobian(map, x, {DiffMode::kDual});
  const Mat b = jacobian(map, x, {DiffMode::kFiniteDifference});
  const double denom = std::max(a.norm(), 1.0);
  return (a - b).norm() / denom;
}

}  // namespace covkit
