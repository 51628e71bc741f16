#pragma once

// Mean-field VAE: diagonal-Gaussian encoder and decoder conditionals with a
// standard-normal code prior.

#include <functional>
#include <utility>

#include "covkit/core/distribution.hpp"
#include "covkit/core/gaussian.hpp"
#include "covkit/core/types.hpp"
#include "covkit/stochastic/kernel.hpp"

namespace covkit::stochastic {

struct VaeModel {
  int data_dim = 0;
  int code_dim = 0;
  std::function<Vec(const Vec&)> enc_mean;   // mu_E(x)
  std::function<Vec(const Vec&)> enc_sigma;  // sigma_E(x) > 0
  std::function<Vec(const Vec&)> dec_mean;   // mu_D(z)
  std::function<Vec(const Vec&)> dec_sigma;  // sigma_D(z) > 0

  CodeDistribution prior() const { return standard_normal(code_dim); }

  double encoder_log_density(const Vec& z, const Vec& x) const {
    const Vec s = enc_sigma(x);
    check_sigma(s);
    return log_diag_normal_pdf(z, enc_mean(x), s.cwiseProduct(s));
  }

  double decoder_log_density(const Vec& x, const Vec& z) const {
    const Vec s = dec_sigma(z);
    check_sigma(s);
    return log_diag_normal_pdf(x, dec_mean(z), s.cwiseProduct(s));
  }

  Vec encoder_sample(const Vec& x, RngStream& rng) const {
    const Vec m = enc_mean(x);
    const Vec s = enc_sigma(x);
    Vec z(code_dim);
    for (int i = 0; i < code_dim; ++i) z(i) = m(i) + s(i) * rng.normal();
    return z;
  }

  Vec decoder_sample(const Vec& z, RngStream& rng) const {
    const Vec m = dec_mean(z);
    const Vec s = dec_sigma(z);
    Vec x(data_dim);
    for (int i = 0; i < data_dim; ++i) x(i) = m(i) + s(i) * rng.normal();
    return x;
  }

  ConditionalKernel encoder_kernel() const {
    const VaeModel self = *this;
    return ConditionalKernel(
        code_dim, data_dim,
        [self](const Vec& z, const Vec& x) { return self.encoder_log_density(z, x); },
        [self](const Vec& x, RngStream& rng) { return self.encoder_sample(x, rng); });
  }

  ConditionalKernel decoder_kernel() const {
    const VaeModel self = *this;
    return ConditionalKernel(
        data_dim, code_dim,
        [self](const Vec& x, const Vec& z) { return self.decoder_log_density(x, z); },
        [self](const Vec& z, RngStream& rng) { return self.decoder_sample(z, rng); });
  }

 private:
  static void check_sigma(const Vec& s) {
    if (s.minCoeff() <= 0.0)
      throw ModelError("VaeModel: sigma functions must be strictly positive");
  }
};

}  // namespace covkit::stochastic
