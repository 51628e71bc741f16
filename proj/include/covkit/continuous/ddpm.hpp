#pragma once

// Discrete diffusion schedule and its Gaussian kernels: per-step forward
// kernels N(sqrt(1-beta_t) z, beta_t I) and the closed-form perturbation
// kernels N(sqrt(alpha_t) x, (1-alpha_t) I) with alpha_t = prod(1-beta_tau).

#include <string>
#include <vector>

#include "covkit/core/types.hpp"
#include "covkit/stochastic/kernel.hpp"

namespace covkit::continuous {

struct DdpmSchedule {
  std::vector<double> betas;
  std::vector<double> alphas;  // cumulative products, alphas[t-1] = alpha_t

  explicit DdpmSchedule(std::vector<double> b) : betas(std::move(b)) {
    alphas.reserve(betas.size());
    double acc = 1.0;
    for (double beta : betas) {
      if (!(beta > 0.0 && beta < 1.0))
        throw ModelError("DdpmSchedule: betas must lie in (0, 1)");
      acc *= 1.0 - beta;
      alphas.push_back(acc);
    }
  }

  static DdpmSchedule constant(double beta, int T) {
    return DdpmSchedule(std::vector<double>(static_cast<std::size_t>(T), beta));
  }

  int length() const { return static_cast<int>(betas.size()); }

  double beta(int t) const {  // 1-based
    check(t);
    return betas[static_cast<std::size_t>(t - 1)];
  }
  double alpha(int t) const {
    check(t);
    return alphas[static_cast<std::size_t>(t - 1)];
  }

 private:
  void check(int t) const {
    if (t < 1 || t > length())
      throw DimensionError("DdpmSchedule: step " + std::to_string(t) +
                           " outside 1.." + std::to_string(length()));
  }
};

// p(Z_t | Z_{t-1}) = N(sqrt(1 - beta_t) z_{t-1}, beta_t I)
inline stochastic::ConditionalKernel ddpm_forward_kernel(const DdpmSchedule& s, int t,
                                                         int dim) {
  const double b = s.beta(t);
  return stochastic::affine_gaussian_kernel(
      std::sqrt(1.0 - b) * Mat::Identity(dim, dim), Vec::Zero(dim),
      Vec::Constant(dim, b));
}

// p(Z_t | Z_0 = x) = N(sqrt(alpha_t) x, (1 - alpha_t) I)
inline stochastic::ConditionalKernel ddpm_perturbation(const DdpmSchedule& s, int t,
                                                       int dim) {
  const double a = s.alpha(t);
  return stochastic::affine_gaussian_kernel(std::sqrt(a) * Mat::Identity(dim, dim),
                                            Vec::Zero(dim), Vec::Constant(dim, 1.0 - a));
}

}  // namespace covkit::continuous
