#pragma once

// Quadrature and Monte-Carlo integration oracles. These back the independent
// checks (normalization, marginalization, fiber normalizers) used throughout
// the test suites.

#include <cmath>
#include <functional>
#include <string>

#include "covkit/core/rng.hpp"
#include "covkit/core/types.hpp"

namespace covkit {

struct McResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t nonfinite = 0;
};

// Uniform-sampling Monte-Carlo integral of fn over a finite box. Non-finite
// integrand draws are counted and the run aborts when they exceed 0.1%.
inline McResult mc_integrate(const std::function<double(const Vec&)>& fn, const Box& box,
                             std::size_t n, RngStream rng) {
  if (n < 2) throw DimensionError("mc_integrate: need n >= 2");
  const double vol = box.volume();
  if (!std::isfinite(vol)) throw DimensionError("mc_integrate: box must be finite");
  const Eigen::Index d = box.dim();
  double sum = 0.0, sumsq = 0.0;
  std::size_t bad = 0;
  Vec x(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(j) = rng.uniform(box.lo(j), box.hi(j));
    const double f = fn(x);
    if (!std::isfinite(f)) {
      ++bad;
      if (bad * 1000 > n)
        throw ModelError("mc_integrate: >0.1% non-finite integrand values (" +
                         std::to_string(bad) + " of " + std::to_string(i + 1) + ")");
      continue;
    }
    sum += f;
    sumsq += f * f;
  }
  const double m = static_cast<double>(n - bad);
  const double mean = sum / m;
  const double var = std::max(0.0, (sumsq - m * mean * mean) / std::max(1.0, m - 1.0));
  return {vol * mean, vol * std::sqrt(var / m), bad};
}

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a, double fa,
                      double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double fa, double b, double fb, double m, double fm,
                               double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (depth <= 0)
    throw ModelError("quad_integrate_1d: no convergence after max subdivisions");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature to absolute tolerance tol.
inline double quad_integrate_1d(const std::function<double(double)>& fn, double a,
                                double b, double tol = 1e-10, int max_depth = 48) {
  if (!(a < b)) throw DimensionError("quad_integrate_1d: need a < b");
  // A fixed pre-split keeps narrow features from being missed by the first
  // Simpson panel.
  const int pre = 8;
  double total = 0.0;
  for (int k = 0; k < pre; ++k) {
    const double lo = a + (b - a) * k / pre;
    const double hi = a + (b - a) * (k + 1) / pre;
    const double mid = 0.5 * (lo + hi);
    const double flo = fn(lo), fhi = fn(hi), fmid = fn(mid);
    const double whole = detail::simpson(fn, lo, flo, hi, fhi, mid, fmid);
    total += detail::adaptive_simpson(fn, lo, flo, hi, fhi, mid, fmid, whole,
                                      tol / pre, max_depth);
  }
  return total;
}

// Tensorized adaptive quadrature over a 2-D box (outer over inner).
inline double quad_integrate_2d(const std::function<double(double, double)>& fn,
                                const Box& box, double tol = 1e-8) {
  if (box.dim() != 2) throw DimensionError("quad_integrate_2d: box must be 2-D");
  return quad_integrate_1d(
      [&](double x) {
        return quad_integrate_1d([&](double y) { return fn(x, y); }, box.lo(1),
                                 box.hi(1), tol * 0.1);
      },
      box.lo(0), box.hi(0), tol);
}

}  // namespace covkit
