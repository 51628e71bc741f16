#pragma once

// The donut target: uniform density on the annulus 3 <= |x| <= 8, together
// with the four closed-form model constructions on it (normalizing flow,
// circle autoencoder, split decoder, wedge VAE). These are exact and serve
// as oracles for the CoV evaluators.

#include <cmath>

#include "covkit/core/distribution.hpp"
#include "covkit/core/gaussian.hpp"
#include "covkit/core/map.hpp"
#include "covkit/core/rng.hpp"
#include "covkit/core/types.hpp"

namespace covkit::analytic {

struct Donut {
  static constexpr double kR0 = 3.0;
  static constexpr double kR1 = 8.0;
  // pi * (R1^2 - R0^2) = 55 pi
  static constexpr double kAreaFactor = kR1 * kR1 - kR0 * kR0;
  // Circle of minimal expected squared distance: (2/3)(R1^3-R0^3)/(R1^2-R0^2)
  static constexpr double kManifoldRadius = 194.0 / 33.0;
};

// Polar angle in [0, 2*pi).
inline double arg2d(const Vec& x) {
  double a = std::atan2(x(1), x(0));
  if (a < 0.0) a += 2.0 * kPi;
  return a;
}

// Circular distance between two angles.
inline double ang_dist(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

inline double donut_log_density(const Vec& x) {
  require_dim(x, 2, "donut_log_density");
  const double r = x.norm();
  if (r < Donut::kR0 || r > Donut::kR1) return kNegInf;
  return -std::log(kPi * Donut::kAreaFactor);
}

// Radial law p(R=r) = 2r / (R1^2-R0^2) on (R0, R1).
inline double donut_radial_log_density(double r) {
  if (r < Donut::kR0 || r > Donut::kR1) return kNegInf;
  return std::log(2.0 * r / Donut::kAreaFactor);
}

// Inverse-CDF sampler for the radial law: r = (u*(R1^2-R0^2) + R0^2)^(1/2).
inline double donut_sample_radius(RngStream& rng) {
  return std::sqrt(rng.uniform() * Donut::kAreaFactor + Donut::kR0 * Donut::kR0);
}

inline Vec donut_sample(RngStream& rng) {
  const double a = rng.uniform(0.0, 2.0 * kPi);
  const double r = donut_sample_radius(rng);
  return make_vec({r * std::cos(a), r * std::sin(a)});
}

inline CodeDistribution donut_target() {
  return CodeDistribution(2, donut_log_density,
                          [](RngStream& rng) { return donut_sample(rng); });
}

// ---------------------------------------------------------------------------
// Bijective construction: standard-normal codes pushed onto the annulus via
// inverse Box-Muller for the angle and an inverse probability integral
// transform for the radius.

inline SmoothMap donut_nf_decoder() {
  return make_map(2, 2, [](const auto& z) {
    using S = std::decay_t<decltype(z[0])>;
    const S n2 = z[0] * z[0] + z[1] * z[1];
    const S alpha = atan2(z[1], z[0]);
    const S r = sqrt((1.0 - exp(-0.5 * n2)) * Donut::kAreaFactor +
                     Donut::kR0 * Donut::kR0);
    std::vector<S> x(2);
    x[0] = r * cos(alpha);
    x[1] = r * sin(alpha);
    return x;
  });
}

inline SmoothMap donut_nf_encoder() {
  return make_map(2, 2, [](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    const S r2 = x[0] * x[0] + x[1] * x[1];
    const S r = sqrt(r2);
    const S rho = (r2 - Donut::kR0 * Donut::kR0) / Donut::kAreaFactor;
    const S zn = sqrt(-2.0 * log(1.0 - rho));
    std::vector<S> z(2);
    z[0] = zn * x[0] / r;
    z[1] = zn * x[1] / r;
    return z;
  });
}

// log|det J_g(z)| = -|z|^2/2 + log((R1^2-R0^2)/2)
inline double donut_nf_decoder_logdet(const Vec& z) {
  require_dim(z, 2, "donut_nf_decoder_logdet");
  if (z.squaredNorm() == 0.0)
    throw ModelError("donut_nf: the map is undefined at z = 0");
  return -0.5 * z.squaredNorm() + std::log(0.5 * Donut::kAreaFactor);
}

// Forward map with the z = 0 precondition enforced.
inline Vec donut_nf_forward(const Vec& z) {
  require_dim(z, 2, "donut_nf_forward");
  if (z.squaredNorm() == 0.0)
    throw ModelError("donut_nf: the map is undefined at z = 0");
  return donut_nf_decoder()(z);
}

// ---------------------------------------------------------------------------
// Injective construction: circle decoder of radius R_M with the polar-angle
// encoder.

inline SmoothMap donut_circle_decoder() {
  return make_map(1, 2, [](const auto& z) {
    using S = std::decay_t<decltype(z[0])>;
    std::vector<S> x(2);
    x[0] = Donut::kManifoldRadius * cos(z[0]);
    x[1] = Donut::kManifoldRadius * sin(z[0]);
    return x;
  });
}

inline SmoothMap donut_angle_encoder() {
  return make_map(2, 1, [](const auto& x) {
    using S = std::decay_t<decltype(x[0])>;
    std::vector<S> z(1);
    z[0] = atan2(x[1], x[0]);  // in (-pi, pi]; wrap handled at call sites
    return z;
  });
}

// ---------------------------------------------------------------------------
// Stochastic (VAE) construction: wedge encoder/decoder with half width
// alpha0 (default 5 degrees).

struct DonutVae {
  double alpha0 = 5.0 * kPi / 180.0;

  // p(Z | X=x): uniform on the wrapped interval arg(x) +- alpha0.
  double encoder_log_density(double z, const Vec& x) const {
    const double a = arg2d(x);
    return ang_dist(z, a) <= alpha0 ? -std::log(2.0 * alpha0) : kNegInf;
  }

  double encoder_sample(const Vec& x, RngStream& rng) const {
    double z = arg2d(x) + rng.uniform(-alpha0, alpha0);
    if (z < 0.0) z += 2.0 * kPi;
    if (z >= 2.0 * kPi) z -= 2.0 * kPi;
    return z;
  }

  // p(X=x | Z=z): angle uniform in the wedge, radius from the radial law,
  // times the polar-coordinates volume factor 1/r.
  double decoder_log_density(const Vec& x, double z) const {
    const double r = x.norm();
    if (r < Donut::kR0 || r > Donut::kR1) return kNegInf;
    if (ang_dist(arg2d(x), z) > alpha0) return kNegInf;
    return -std::log(2.0 * alpha0) + donut_radial_log_density(r) - std::log(r);
  }

  Vec decoder_sample(double z, RngStream& rng) const {
    const double a = z + rng.uniform(-alpha0, alpha0);
    const double r = donut_sample_radius(rng);
    return make_vec({r * std::cos(a), r * std::sin(a)});
  }

  // Marginal code distribution p(Z) = Uniform(0, 2*pi).
  static double prior_log_density(double) { return -std::log(2.0 * kPi); }
};

}  // namespace covkit::analytic
