#pragma once

// Kernel adapters for the analytic constructions, so they plug directly into
// the stochastic-flow evaluators.

#include "covkit/analytic/donut.hpp"
#include "covkit/analytic/gaussian_example.hpp"
#include "covkit/stochastic/kernel.hpp"

namespace covkit::analytic {

struct StochasticPair {
  CodeDistribution prior;
  stochastic::ConditionalKernel decoder;
  stochastic::ConditionalKernel encoder;
};

inline StochasticPair gauss_stochastic_pair(double rho) {
  GaussStochasticFlow m{rho};
  return StochasticPair{
      standard_normal(1),
      stochastic::ConditionalKernel(
          2, 1,
          [m](const Vec& x, const Vec& z) { return m.decoder_log_density(x, z(0)); },
          [m](const Vec& z, RngStream& rng) { return m.decoder_sample(z(0), rng); }),
      stochastic::ConditionalKernel(
          1, 2,
          [m](const Vec& z, const Vec& x) { return m.encoder_log_density(z(0), x); },
          [m](const Vec& x, RngStream& rng) {
            return make_vec({m.encoder_sample(x, rng)});
          })};
}

inline StochasticPair donut_vae_pair(double alpha0 = 5.0 * kPi / 180.0) {
  DonutVae vae{alpha0};
  return StochasticPair{
      uniform_box(make_box({0.0}, {2.0 * kPi})),
      stochastic::ConditionalKernel(
          2, 1,
          [vae](const Vec& x, const Vec& z) { return vae.decoder_log_density(x, z(0)); },
          [vae](const Vec& z, RngStream& rng) { return vae.decoder_sample(z(0), rng); }),
      stochastic::ConditionalKernel(
          1, 2,
          [vae](const Vec& z, const Vec& x) { return vae.encoder_log_density(z(0), x); },
          [vae](const Vec& x, RngStream& rng) {
            return make_vec({vae.encoder_sample(x, rng)});
          })};
}

}  // namespace covkit::analytic
