#pragma once

// Gaussian mixture code distribution with diagonal covariances.

#include <cmath>
#include <vector>

#include "covkit/core/distribution.hpp"
#include "covkit/core/gaussian.hpp"
#include "covkit/core/rng.hpp"
#include "covkit/core/types.hpp"

namespace covkit::bijective {

class GmmCodeDistribution {
 public:
  GmmCodeDistribution(std::vector<double> weights, std::vector<Vec> means,
                      std::vector<Vec> variances)
      : weights_(std::move(weights)), means_(std::move(means)), vars_(std::move(variances)) {
    if (weights_.empty() || weights_.size() != means_.size() ||
        weights_.size() != vars_.size())
      throw DimensionError("GmmCodeDistribution: component count mismatch");
    double sum = 0.0;
    for (double w : weights_) {
      if (!(w > 0.0)) throw ModelError("GmmCodeDistribution: weights must be positive");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw ModelError("GmmCodeDistribution: weights must sum to 1");
    for (const auto& v : vars_)
      if (v.minCoeff() <= 0.0)
        throw ModelError("GmmCodeDistribution: covariance diagonals must be positive");
  }

  int dim() const { return static_cast<int>(means_[0].size()); }
  int components() const { return static_cast<int>(weights_.size()); }

  double log_density(const Vec& z) const {
    std::vector<double> terms(weights_.size());
    for (std::size_t k = 0; k < weights_.size(); ++k)
      terms[k] = std::log(weights_[k]) + log_diag_normal_pdf(z, means_[k], vars_[k]);
    return log_sum_exp(terms);
  }

  // Membership posterior p(k | z) via Bayes rule; rows sum to 1.
  std::vector<double> posterior(const Vec& z) const {
    std::vector<double> terms(weights_.size());
    for (std::size_t k = 0; k < weights_.size(); ++k)
      terms[k] = std::log(weights_[k]) + log_diag_normal_pdf(z, means_[k], vars_[k]);
    const double lse = log_sum_exp(terms);
    std::vector<double> post(weights_.size());
    for (std::size_t k = 0; k < weights_.size(); ++k) post[k] = std::exp(terms[k] - lse);
    return post;
  }

  Vec sample(RngStream& rng) const {
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t k = weights_.size() - 1;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      acc += weights_[i];
      if (u <= acc) {
        k = i;
        break;
      }
    }
    Vec z(dim());
    for (int i = 0; i < dim(); ++i)
      z(i) = means_[k](i) + std::sqrt(vars_[k](i)) * rng.normal();
    return z;
  }

  CodeDistribution as_code_distribution() const {
    const GmmCodeDistribution self = *this;
    return CodeDistribution(
        dim(), [self](const Vec& z) { return self.log_density(z); },
        [self](RngStream& rng) { return self.sample(rng); });
  }

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Vec>& means() const { return means_; }
  const std::vector<Vec>& variances() const { return vars_; }

 private:
  std::vector<double> weights_;
  std::vector<Vec> means_;
  std::vector<Vec> vars_;
};

}  // namespace covkit::bijective
