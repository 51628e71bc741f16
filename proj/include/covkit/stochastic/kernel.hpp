#pragma once

// Conditional distributions with exact log-density evaluation and sampling.

#include <functional>
#include <utility>

#include "covkit/core/gaussian.hpp"
#include "covkit/core/rng.hpp"
#include "covkit/core/types.hpp"

namespace covkit::stochastic {

class ConditionalKernel {
 public:
  ConditionalKernel() = default;
  ConditionalKernel(int target_dim, int cond_dim,
                    std::function<double(const Vec&, const Vec&)> log_density,
                    std::function<Vec(const Vec&, RngStream&)> sample)
      : target_dim_(target_dim),
        cond_dim_(cond_dim),
        log_density_(std::move(log_density)),
        sample_(std::move(sample)) {}

  int target_dim() const { return target_dim_; }
  int cond_dim() const { return cond_dim_; }
  bool valid() const { return static_cast<bool>(log_density_); }

  double log_density(const Vec& target, const Vec& cond) const {
    require_dim(target, target_dim_, "ConditionalKernel target");
    require_dim(cond, cond_dim_, "ConditionalKernel condition");
    return log_density_(target, cond);
  }

  Vec sample(const Vec& cond, RngStream& rng) const { return sample_(cond, rng); }

 private:
  int target_dim_ = 0;
  int cond_dim_ = 0;
  std::function<double(const Vec&, const Vec&)> log_density_;
  std::function<Vec(const Vec&, RngStream&)> sample_;
};

// N(A c + b, diag(var)) — the affine-Gaussian family used by the serializable
// model files.
inline ConditionalKernel affine_gaussian_kernel(const Mat& A, const Vec& b,
                                                const Vec& var) {
  const int td = static_cast<int>(A.rows());
  const int cd = static_cast<int>(A.cols());
  if (b.size() != td || var.size() != td)
    throw DimensionError("affine_gaussian_kernel: inconsistent shapes");
  if (var.minCoeff() <= 0.0)
    throw ModelError("affine_gaussian_kernel: variances must be positive");
  return ConditionalKernel(
      td, cd,
      [A, b, var](const Vec& t, const Vec& c) {
        return log_diag_normal_pdf(t, A * c + b, var);
      },
      [A, b, var, td](const Vec& c, RngStream& rng) {
        Vec t = A * c + b;
        for (int i = 0; i < td; ++i) t(i) += std::sqrt(var(i)) * rng.normal();
        return t;
      });
}

}  // namespace covkit::stochastic
