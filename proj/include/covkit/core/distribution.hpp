#pragma once

// Type-erased code distribution: exact log-density plus exact sampling.
// Factorized distributions additionally expose per-dimension marginals, which
// the hierarchical/disentangled decompositions need.

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "covkit/core/gaussian.hpp"
#include "covkit/core/rng.hpp"
#include "covkit/core/types.hpp"

namespace covkit {

class CodeDistribution {
 public:
  CodeDistribution() = default;
  CodeDistribution(int dim, std::function<double(const Vec&)> log_density,
                   std::function<Vec(RngStream&)> sample,
                   std::function<double(int, double)> marginal_log_density = nullptr)
      : dim_(dim),
        log_density_(std::move(log_density)),
        sample_(std::move(sample)),
        marginal_(std::move(marginal_log_density)) {}

  int dim() const { return dim_; }
  bool valid() const { return static_cast<bool>(log_density_); }

  double log_density(const Vec& z) const {
    require_dim(z, dim_, "CodeDistribution");
    return log_density_(z);
  }

  Vec sample(RngStream& rng) const { return sample_(rng); }

  bool factorized() const { return static_cast<bool>(marginal_); }
  double marginal_log_density(int j, double v) const {
    if (!marginal_) throw ModelError("CodeDistribution: no per-dimension marginals");
    return marginal_(j, v);
  }

 private:
  int dim_ = 0;
  std::function<double(const Vec&)> log_density_;
  std::function<Vec(RngStream&)> sample_;
  std::function<double(int, double)> marginal_;
};

inline CodeDistribution standard_normal(int dim) {
  return CodeDistribution(
      dim, [](const Vec& z) { return log_std_normal_pdf(z); },
      [dim](RngStream& rng) {
        Vec z(dim);
        for (int i = 0; i < dim; ++i) z(i) = rng.normal();
        return z;
      },
      [](int, double v) { return log_normal_pdf(v, 0.0, 1.0); });
}

inline CodeDistribution diag_normal(Vec mean, Vec var) {
  const int dim = static_cast<int>(mean.size());
  return CodeDistribution(
      dim,
      [mean, var](const Vec& z) { return log_diag_normal_pdf(z, mean, var); },
      [mean, var, dim](RngStream& rng) {
        Vec z(dim);
        for (int i = 0; i < dim; ++i) z(i) = mean(i) + std::sqrt(var(i)) * rng.normal();
        return z;
      },
      [mean, var](int j, double v) { return log_normal_pdf(v, mean(j), var(j)); });
}

inline CodeDistribution uniform_box(Box box) {
  const int dim = static_cast<int>(box.dim());
  const double log_dens = -std::log(box.volume());
  return CodeDistribution(
      dim,
      [box, log_dens](const Vec& z) { return box.contains(z) ? log_dens : kNegInf; },
      [box, dim](RngStream& rng) {
        Vec z(dim);
        for (int i = 0; i < dim; ++i) z(i) = rng.uniform(box.lo(i), box.hi(i));
        return z;
      },
      [box](int j, double v) {
        return (v >= box.lo(j) && v <= box.hi(j)) ? -std::log(box.hi(j) - box.lo(j))
                                                  : kNegInf;
      });
}

}  // namespace covkit
