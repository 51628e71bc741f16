#pragma once

// The anisotropic 2-D Gaussian N(0, diag(1, 1/4)) and its four model
// constructions: bijective pair, 1-D injective bottleneck, linear split, and
// the correlated stochastic pair indexed by rho.

#include <cmath>

#include "covkit/core/distribution.hpp"
#include "covkit/core/gaussian.hpp"
#include "covkit/core/map.hpp"
#include "covkit/core/types.hpp"

namespace covkit::analytic {

struct AnisotropicGaussian {
  // Covariance diag(1, 1/4); density at the origin is 1/pi.
  static Vec variances() { return make_vec({1.0, 0.25}); }

  static double log_density(const Vec& x) {
    require_dim(x, 2, "AnisotropicGaussian");
    return log_diag_normal_pdf(x, Vec::Zero(2), variances());
  }

  static CodeDistribution target() {
    return diag_normal(Vec::Zero(2), variances());
  }
};

// Bijective pair: g(z) = [z1, z2/2], f(x) = [x1, 2 x2].
inline SmoothMap gauss_bijective_decoder() {
  return make_map(2, 2, [](const auto& z) {
    auto x = z;
    x[1] = z[1] * 0.5;
    return x;
  });
}

inline SmoothMap gauss_bijective_encoder() {
  return make_map(2, 2, [](const auto& x) {
    auto z = x;
    z[1] = x[1] * 2.0;
    return z;
  });
}

// Injective pair: g(z) = [z, 0], f(x) = x1.
inline SmoothMap gauss_injective_decoder() {
  return make_map(1, 2, [](const auto& z) {
    using S = std::decay_t<decltype(z[0])>;
    std::vector<S> x(2);
    x[0] = z[0];
    x[1] = S(0.0);
    return x;
  });
}

inline SmoothMap gauss_injective_encoder() {
  return make_map(2, 1, [](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    return std::vector<S>{x[0]};
  });
}

// Stochastic pair with correlation rho between X1 and the 1-D code:
//   decoder  p(X | Z=z)  = N([rho z, 0], diag(1-rho^2, 1/4))
//   encoder  p(Z | X=x)  = N(rho x1, 1-rho^2)
//   prior    p(Z)        = N(0, 1)
struct GaussStochasticFlow {
  double rho = 0.5;

  double prior_log_density(double z) const { return log_normal_pdf(z, 0.0, 1.0); }

  double decoder_log_density(const Vec& x, double z) const {
    require_dim(x, 2, "GaussStochasticFlow decoder");
    return log_normal_pdf(x(0), rho * z, 1.0 - rho * rho) +
           log_normal_pdf(x(1), 0.0, 0.25);
  }

  double encoder_log_density(double z, const Vec& x) const {
    require_dim(x, 2, "GaussStochasticFlow encoder");
    return log_normal_pdf(z, rho * x(0), 1.0 - rho * rho);
  }

  double encoder_sample(const Vec& x, RngStream& rng) const {
    return rho * x(0) + std::sqrt(1.0 - rho * rho) * rng.normal();
  }

  Vec decoder_sample(double z, RngStream& rng) const {
    return make_vec({rho * z + std::sqrt(1.0 - rho * rho) * rng.normal(),
                     0.5 * rng.normal()});
  }
};

}  // namespace covkit::analytic
