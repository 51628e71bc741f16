#pragma once

#include <cmath>
#include <vector>

#include "covkit/core/types.hpp"

namespace covkit {

inline constexpr double kLogTwoPi = 1.837877066409345483560659472811235279;

inline double log_normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (kLogTwoPi + std::log(var) + d * d / var);
}

inline double log_std_normal_pdf(const Vec& x) {
  return -0.5 * (static_cast<double>(x.size()) * kLogTwoPi + x.squaredNorm());
}

inline double log_diag_normal_pdf(const Vec& x, const Vec& mean, const Vec& var) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += log_normal_pdf(x(i), mean(i), var(i));
  return s;
}

inline double log_mvn_pdf(const Vec& x, const Vec& mean, const Mat& cov) {
  Eigen::LLT<Mat> llt(cov);
  if (llt.info() != Eigen::Success)
    throw SingularError("log_mvn_pdf: covariance not positive definite");
  const Vec d = x - mean;
  const Vec w = llt.matrixL().solve(d);
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < cov.rows(); ++i)
    logdet += 2.0 * std::log(llt.matrixL()(i, i));
  return -0.5 * (static_cast<double>(x.size()) * kLogTwoPi + logdet + w.squaredNorm());
}

inline double log_sum_exp(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (std::isinf(m) && m < 0) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

inline double log_mean_exp(const std::vector<double>& v) {
  return log_sum_exp(v) - std::log(static_cast<double>(v.size()));
}

// Standard error of log(mean(exp(v))) by the delta method on the shifted
// linear-scale terms.
inline double log_mean_exp_std_error(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (std::isinf(m)) return std::numeric_limits<double>::quiet_NaN();
  double s1 = 0.0, s2 = 0.0;
  for (double x : v) {
    const double w = std::exp(x - m);
    s1 += w;
    s2 += w * w;
  }
  const double mean = s1 / static_cast<double>(n);
  const double var = (s2 - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
  return std::sqrt(std::max(var, 0.0) / static_cast<double>(n)) / mean;
}

}  // namespace covkit
