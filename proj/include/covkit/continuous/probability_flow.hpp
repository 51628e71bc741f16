#pragma once

// Probability-flow reduction of a diffusion: the deterministic field
// F(t, z) = drift(t, z) - 1/2 * diff(t)^2 * score(t, z) generates the same
// marginals as the SDE and plugs into integrate_flow.

#include <cmath>
#include <functional>

#include "covkit/continuous/field.hpp"
#include "covkit/core/types.hpp"

namespace covkit::continuous {

// Score fields are time-dependent vector fields s(t, z) ~ grad_z log p_t(z).
using ScoreField = VectorField;

inline VectorField probability_flow_ode(const VectorField& drift,
                                        std::function<double(double)> diffusion,
                                        const ScoreField& score) {
  if (drift.dim() != score.dim())
    throw DimensionError("probability_flow_ode: drift/score dimension mismatch");
  const int dim = drift.dim();
  return VectorField(dim, [drift, diffusion, score](double t, const auto& z) {
    auto f = drift.eval(t, z);
    const double g2 = diffusion ? diffusion(t) * diffusion(t) : 0.0;
    if (g2 != 0.0) {
      const auto s = score.eval(t, z);
      for (std::size_t i = 0; i < f.size(); ++i) f[i] -= 0.5 * g2 * s[i];
    }
    return f;
  });
}

// Variance-preserving drift -1/2 beta(t) z.
inline VectorField vp_drift(std::function<double(double)> beta, int dim) {
  return VectorField(dim, [beta](double t, const auto& z) {
    auto f = z;
    const double b = beta(t);
    for (auto& v : f) v = -0.5 * b * v;
    return f;
  });
}

// Closed-form score of the variance-preserving marginals of a diagonal
// Gaussian target N(mu0, var0): with abar(t) = exp(-int_0^t beta), the
// marginal at t is N(sqrt(abar) mu0, abar var0 + 1 - abar) per dimension.
inline ScoreField vp_gaussian_score(double beta0, const Vec& mu0, const Vec& var0) {
  const int dim = static_cast<int>(mu0.size());
  std::vector<double> m(mu0.data(), mu0.data() + dim), v(var0.data(), var0.data() + dim);
  return ScoreField(dim, [beta0, m, v](double t, const auto& z) {
    const double abar = std::exp(-beta0 * t);
    const double root = std::sqrt(abar);
    auto s = z;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double mean = root * m[i];
      const double var = abar * v[i] + 1.0 - abar;
      s[i] = (mean - z[i]) / var;
    }
    return s;
  });
}

}  // namespace covkit::continuous
