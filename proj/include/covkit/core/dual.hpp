#pragma once

// Forward-mode dual numbers with a dynamic partial-derivative vector.
// Seeding n inputs with unit partials and evaluating a map once yields the
// full Jacobian; adequate at the dimensions this library targets (D <= 32).

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace covkit {

struct Dual {
  double v = 0.0;
  Eigen::RowVectorXd d;  // partials w.r.t. the seeded inputs; may be empty

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit constant lift
  Dual(double value, Eigen::RowVectorXd partials) : v(value), d(std::move(partials)) {}

  static Dual seeded(double value, int n, int index) {
    Eigen::RowVectorXd p = Eigen::RowVectorXd::Zero(n);
    p(index) = 1.0;
    return Dual(value, std::move(p));
  }
};

namespace detail {
// Combines partials of two operands, either of which may be a constant
// (empty derivative vector).
inline Eigen::RowVectorXd axby(double a, const Eigen::RowVectorXd& x, double b,
                               const Eigen::RowVectorXd& y) {
  if (x.size() == 0 && y.size() == 0) return {};
  if (x.size() == 0) return b * y;
  if (y.size() == 0) return a * x;
  return a * x + b * y;
}
inline Eigen::RowVectorXd scale(double a, const Eigen::RowVectorXd& x) {
  if (x.size() == 0) return {};
  return a * x;
}
}  // namespace detail

inline Dual operator+(const Dual& a, const Dual& b) {
  return {a.v + b.v, detail::axby(1, a.d, 1, b.d)};
}
inline Dual operator-(const Dual& a, const Dual& b) {
  return {a.v - b.v, detail::axby(1, a.d, -1, b.d)};
}
inline Dual operator-(const Dual& a) { return {-a.v, detail::scale(-1, a.d)}; }
inline Dual operator*(const Dual& a, const Dual& b) {
  return {a.v * b.v, detail::axby(b.v, a.d, a.v, b.d)};
}
inline Dual operator/(const Dual& a, const Dual& b) {
  const double inv = 1.0 / b.v;
  return {a.v * inv, detail::axby(inv, a.d, -a.v * inv * inv, b.d)};
}

inline Dual& operator+=(Dual& a, const Dual& b) { return a = a + b; }
inline Dual& operator-=(Dual& a, const Dual& b) { return a = a - b; }
inline Dual& operator*=(Dual& a, const Dual& b) { return a = a * b; }
inline Dual& operator/=(Dual& a, const Dual& b) { return a = a / b; }

inline bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
inline bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
inline bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
inline bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }

inline Dual exp(const Dual& a) {
  const double e = std::exp(a.v);
  return {e, detail::scale(e, a.d)};
}
inline Dual log(const Dual& a) { return {std::log(a.v), detail::scale(1.0 / a.v, a.d)}; }
inline Dual sqrt(const Dual& a) {
  const double s = std::sqrt(a.v);
  return {s, detail::scale(0.5 / s, a.d)};
}
inline Dual sin(const Dual& a) { return {std::sin(a.v), detail::scale(std::cos(a.v), a.d)}; }
inline Dual cos(const Dual& a) { return {std::cos(a.v), detail::scale(-std::sin(a.v), a.d)}; }
inline Dual tan(const Dual& a) {
  const double t = std::tan(a.v);
  return {t, detail::scale(1.0 + t * t, a.d)};
}
inline Dual tanh(const Dual& a) {
  const double t = std::tanh(a.v);
  return {t, detail::scale(1.0 - t * t, a.d)};
}
inline Dual atan(const Dual& a) {
  return {std::atan(a.v), detail::scale(1.0 / (1.0 + a.v * a.v), a.d)};
}
inline Dual atan2(const Dual& y, const Dual& x) {
  const double n = x.v * x.v + y.v * y.v;
  return {std::atan2(y.v, x.v), detail::axby(x.v / n, y.d, -y.v / n, x.d)};
}
inline Dual pow(const Dual& a, double p) {
  const double f = std::pow(a.v, p);
  return {f, detail::scale(p * std::pow(a.v, p - 1.0), a.d)};
}
inline Dual abs(const Dual& a) {
  return a.v >= 0.0 ? a : -a;
}

// Free-function mirrors of <cmath> so generic code compiles for double too.
using std::abs;
using std::atan;
using std::atan2;
using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;
using std::tan;
using std::tanh;

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.v; }

using DualVec = std::vector<Dual>;

}  // namespace covkit
