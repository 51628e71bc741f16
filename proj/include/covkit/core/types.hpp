#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace covkit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SingularError : std::domain_error {
  using std::domain_error::domain_error;
};
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require_dim(const Vec& x, Eigen::Index dim, const char* what) {
  if (x.size() != dim)
    throw DimensionError(std::string(what) + ": expected dim " + std::to_string(dim) +
                         ", got " + std::to_string(x.size()));
}

inline bool all_finite(const Vec& x) { return x.allFinite(); }

// A log-scale density value with an optional factor-by-factor breakdown,
// so each term of a change-of-variables formula can be audited separately.
// Monte-Carlo paths report a standard error; exact paths leave it at 0.
struct LogDensity {
  double value = kNegInf;
  std::vector<std::pair<std::string, double>> breakdown;
  double std_error = 0.0;

  LogDensity() = default;
  explicit LogDensity(double v) : value(v) {}

  LogDensity& add(std::string label, double term) {
    breakdown.emplace_back(std::move(label), term);
    return *this;
  }

  static LogDensity from_terms(std::vector<std::pair<std::string, double>> terms) {
    LogDensity r;
    r.breakdown = std::move(terms);
    double s = 0.0;
    for (const auto& [_, t] : r.breakdown) s += t;
    r.value = s;
    return r;
  }

  // |value - sum(breakdown)| when a breakdown is present; 0 otherwise.
  double breakdown_residual() const {
    if (breakdown.empty()) return 0.0;
    double s = 0.0;
    for (const auto& [_, t] : breakdown) s += t;
    if (std::isinf(value) && std::isinf(s) && value == s) return 0.0;
    return std::abs(value - s);
  }
};

// Every CoV evaluator returns its result with the full term breakdown.
using CovReport = LogDensity;

struct Box {
  Vec lo, hi;
  Eigen::Index dim() const { return lo.size(); }
  double volume() const {
    double v = 1.0;
    for (Eigen::Index i = 0; i < lo.size(); ++i) v *= hi(i) - lo(i);
    return v;
  }
  bool contains(const Vec& x) const {
    for (Eigen::Index i = 0; i < lo.size(); ++i)
      if (x(i) < lo(i) || x(i) > hi(i)) return false;
    return true;
  }
};

inline Box make_box(std::initializer_list<double> lo, std::initializer_list<double> hi) {
  Box b;
  b.lo = Vec(static_cast<Eigen::Index>(lo.size()));
  b.hi = Vec(static_cast<Eigen::Index>(hi.size()));
  Eigen::Index i = 0;
  for (double v : lo) b.lo(i++) = v;
  i = 0;
  for (double v : hi) b.hi(i++) = v;
  return b;
}

inline Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace covkit
