#pragma once

// Stochastic-flow CoV evaluators: decoder marginalization, discrete mixtures,
// the Bayes-rule form and its diagnostics, Markov chains, VAEs, conditional
// flow pairs, and augmented flows. Everything stays in log scale; the ratio
// form is never assembled in linear scale.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "covkit/bijective/cov.hpp"
#include "covkit/bijective/gmm.hpp"
#include "covkit/core/distribution.hpp"
#include "covkit/core/gaussian.hpp"
#include "covkit/core/integrate.hpp"
#include "covkit/core/types.hpp"
#include "covkit/stochastic/conditional_flow.hpp"
#include "covkit/stochastic/kernel.hpp"
#include "covkit/stochastic/markov.hpp"
#include "covkit/stochastic/vae.hpp"

namespace covkit::stochastic {

// --- decoder marginalization -------------------------------------------------

// Monte-Carlo marginal: log E_{z~p(Z)} [p(x|z)] by log-mean-exp, with the
// delta-method standard error of the log estimate.
inline LogDensity marginal_mc(const ConditionalKernel& decoder,
                              const CodeDistribution& prior, const Vec& x,
                              std::size_t n, RngStream rng) {
  std::vector<double> terms;
  terms.reserve(n);
  bool any_finite = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double lp = decoder.log_density(x, prior.sample(rng));
    any_finite = any_finite || std::isfinite(lp);
    terms.push_back(lp);
  }
  LogDensity out;
  if (!any_finite) {
    out.value = kNegInf;  // x unreachable from the sampled codes
    return out;
  }
  out.value = log_mean_exp(terms);
  out.std_error = log_mean_exp_std_error(terms);
  out.add("log E_z[p(x|z)] (MC)", out.value);
  return out;
}

// Quadrature marginal over an explicit code-space box (dim 1 or 2).
inline LogDensity marginal_quadrature(const ConditionalKernel& decoder,
                                      const std::function<double(const Vec&)>& prior_log,
                                      const Vec& x, const Box& domain,
                                      double tol = 1e-8) {
  double mass = 0.0;
  if (domain.dim() == 1) {
    mass = quad_integrate_1d(
        [&](double z) {
          const Vec zv = make_vec({z});
          const double lp = prior_log(zv) + decoder.log_density(x, zv);
          return std::isfinite(lp) ? std::exp(lp) : 0.0;
        },
        domain.lo(0), domain.hi(0), tol);
  } else if (domain.dim() == 2) {
    mass = quad_integrate_2d(
        [&](double a, double b) {
          const Vec zv = make_vec({a, b});
          const double lp = prior_log(zv) + decoder.log_density(x, zv);
          return std::isfinite(lp) ? std::exp(lp) : 0.0;
        },
        domain, tol);
  } else {
    throw DimensionError("marginal_quadrature: quadrature limited to code dim <= 2");
  }
  LogDensity out;
  out.value = mass > 0.0 ? std::log(mass) : kNegInf;
  out.add("log int p(z) p(x|z) dz (quadrature)", out.value);
  return out;
}

// --- discrete mixtures --------------------------------------------------------

inline CovReport cov_gmm(const bijective::GmmCodeDistribution& gmm, const Vec& x) {
  CovReport r;
  r.add("log sum_k p(k) N(x|mu_k,Sigma_k)", gmm.log_density(x));
  r.value = r.breakdown[0].second;
  return r;
}

// Membership posterior p(Z=k | x) by Bayes rule.
inline std::vector<double> gmm_posterior(const bijective::GmmCodeDistribution& gmm,
                                         const Vec& x) {
  return gmm.posterior(x);
}

// --- Bayes-rule CoV and diagnostics -------------------------------------------

// log p(x) = log p(z) + log p(x|z) - log p(z|x); z-independent when the model
// is self-consistent.
inline CovReport cov_bayes(const CodeDistribution& prior, const ConditionalKernel& decoder,
                           const ConditionalKernel& encoder, const Vec& x, const Vec& z) {
  const double lp_enc = encoder.log_density(z, x);
  if (!std::isfinite(lp_enc))
    throw ModelError("cov_bayes: z lies outside the encoder support at this x");
  CovReport r;
  r.add("log p(z)", prior.log_density(z));
  r.add("log p(x|z)", decoder.log_density(x, z));
  r.add("-log p(z|x)", -lp_enc);
  r.value = r.breakdown[0].second + r.breakdown[1].second + r.breakdown[2].second;
  return r;
}

struct ElboEstimate {
  double elbo = 0.0;
  double std_error = 0.0;
  double gap = std::numeric_limits<double>::quiet_NaN();  // log p(x) - elbo
};

// MC estimate of E_{z~p(Z|x)} [log (p(z) p(x|z) / p(z|x))]. When the true
// log p(x) is supplied (analytic targets or a quadrature marginal), the KL
// gap log p(x) - ELBO >= 0 is reported alongside.
inline ElboEstimate elbo(const CodeDistribution& prior, const ConditionalKernel& decoder,
                         const ConditionalKernel& encoder, const Vec& x, std::size_t n,
                         RngStream rng,
                         double log_px = std::numeric_limits<double>::quiet_NaN()) {
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec z = encoder.sample(x, rng);
    const double term =
        prior.log_density(z) + decoder.log_density(x, z) - encoder.log_density(z, x);
    s += term;
    s2 += term * term;
  }
  ElboEstimate e;
  const double m = static_cast<double>(n);
  e.elbo = s / m;
  e.std_error = std::sqrt(std::max(0.0, (s2 - m * e.elbo * e.elbo) / (m - 1.0)) / m);
  if (std::isfinite(log_px)) e.gap = log_px - e.elbo;
  return e;
}

// Variance-based self-consistency score: Var_z[RHS of the Bayes CoV] divided
// by 2 p(x)^2, with p(x) estimated from the same draws. Scale-invariant, so
// it is computed on max-shifted linear terms.
inline double kl_variance_diagnostic(const CodeDistribution& prior,
                                     const ConditionalKernel& decoder,
                                     const ConditionalKernel& encoder, const Vec& x,
                                     std::size_t n, RngStream rng) {
  if (n < 2) throw DimensionError("kl_variance_diagnostic: need n >= 2");
  std::vector<double> logr;
  logr.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec z = encoder.sample(x, rng);
    logr.push_back(prior.log_density(z) + decoder.log_density(x, z) -
                   encoder.log_density(z, x));
  }
  double mx = kNegInf;
  for (double v : logr) mx = std::max(mx, v);
  double s = 0.0, s2 = 0.0;
  for (double v : logr) {
    const double w = std::exp(v - mx);
    s += w;
    s2 += w * w;
  }
  const double m = static_cast<double>(n);
  const double mean = s / m;
  const double var = std::max(0.0, (s2 - m * mean * mean) / (m - 1.0));
  return var / (2.0 * mean * mean);
}

// --- Markov chains -------------------------------------------------------------

// Chain CoV along an explicit encoder path z_1..z_T:
//   log p(x) = log p(Z_T = z_T) + sum_t [log p(z_{t-1}|z_t) - log p(z_t|z_{t-1})]
// accumulated from t = T down to 1, so a one-step chain reproduces cov_bayes
// bit for bit.
inline CovReport cov_markov_chain(const MarkovChainModel& model, const Vec& x,
                                  const std::vector<Vec>& path) {
  model.validate();
  if (static_cast<int>(path.size()) != model.length())
    throw DimensionError("cov_markov_chain: path length mismatch");
  CovReport r;
  r.add("log p(Z_T)", model.terminal.log_density(path.back()));
  r.value = r.breakdown[0].second;
  for (int t = model.length(); t >= 1; --t) {
    const Vec& prev = (t == 1) ? x : path[static_cast<std::size_t>(t - 2)];
    const Vec& cur = path[static_cast<std::size_t>(t - 1)];
    const double fwd = model.forward[static_cast<std::size_t>(t - 1)].log_density(cur, prev);
    if (!std::isfinite(fwd))
      throw ModelError("cov_markov_chain: zero-density forward step at t = " +
                       std::to_string(t));
    const double rev = model.reverse[static_cast<std::size_t>(t - 1)].log_density(prev, cur);
    r.add("log p(z_" + std::to_string(t - 1) + "|z_" + std::to_string(t) + ")", rev);
    r.add("-log p(z_" + std::to_string(t) + "|z_" + std::to_string(t - 1) + ")", -fwd);
    r.value += rev;
    r.value -= fwd;
  }
  return r;
}

inline CovReport cov_markov_chain(const MarkovChainModel& model, const Vec& x,
                                  RngStream& rng) {
  return cov_markov_chain(model, x, sample_chain_path(model, x, rng));
}

struct PathSpread {
  std::vector<double> values;
  double max_spread = 0.0;
};

// Self-consistency means every encoder path yields the same value; the max
// log-spread over sampled paths is the diagnostic.
inline PathSpread markov_path_spread(const MarkovChainModel& model, const Vec& x,
                                     std::size_t n_paths, RngStream rng) {
  PathSpread out;
  double lo = std::numeric_limits<double>::infinity(), hi = kNegInf;
  for (std::size_t i = 0; i < n_paths; ++i) {
    const double v = cov_markov_chain(model, x, rng).value;
    out.values.push_back(v);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  out.max_spread = hi - lo;
  return out;
}

// --- VAEs -----------------------------------------------------------------------

inline CovReport cov_vae(const VaeModel& model, const Vec& x, const Vec& z) {
  const double lp_enc = model.encoder_log_density(z, x);
  if (!std::isfinite(lp_enc))
    throw ModelError("cov_vae: z outside the encoder support");
  CovReport r;
  r.add("log N(z|0,I)", log_std_normal_pdf(z));
  r.add("log N(x|mu_D(z),sigma_D^2(z))", model.decoder_log_density(x, z));
  r.add("-log N(z|mu_E(x),sigma_E^2(x))", -lp_enc);
  r.value = r.breakdown[0].second + r.breakdown[1].second + r.breakdown[2].second;
  return r;
}

// --- conditional flows ------------------------------------------------------------

// log p(x|z) = log p(S_x = g^{-1}(x; z)) - log|det J_g| with the Jacobian in
// the noise argument at s = g^{-1}(x; z).
inline LogDensity cov_conditional_bijective(const ConditionalFlow& flow,
                                            const CodeDistribution& noise_prior,
                                            const Vec& x, const Vec& z) {
  const Vec s = flow.inverse(x, z);
  const Mat J = flow.jacobian_noise(s, z);
  double logdet;
  try {
    logdet = logdet_lu(J);
  } catch (const SingularError&) {
    throw SingularError("cov_conditional_bijective: singular conditional Jacobian");
  }
  LogDensity r;
  r.add("log p(S_x=g^{-1}(x;z))", noise_prior.log_density(s));
  r.add("-log|det J_g|", -logdet);
  r.value = r.breakdown[0].second + r.breakdown[1].second;
  return r;
}

// Bayes CoV with both conditionals expanded through their flows.
inline CovReport cov_conditional_nf_pair(const ConditionalFlowPair& pair,
                                         const CodeDistribution& prior, const Vec& x,
                                         const Vec& z) {
  const LogDensity dec = cov_conditional_bijective(pair.decoder, pair.noise_x, x, z);
  const LogDensity enc = cov_conditional_bijective(pair.encoder, pair.noise_z, z, x);
  CovReport r;
  r.add("log p(z)", prior.log_density(z));
  r.add("log p(x|z)", dec.value);
  r.add("-log p(z|x)", -enc.value);
  r.value = r.breakdown[0].second + r.breakdown[1].second + r.breakdown[2].second;
  return r;
}

// Spread of the pair's Bayes RHS over encoder-sampled z; flags mismatched
// pairs the same way kl_variance_diagnostic does.
inline double conditional_pair_variance(const ConditionalFlowPair& pair,
                                        const CodeDistribution& prior, const Vec& x,
                                        std::size_t n, RngStream rng) {
  std::vector<double> logr;
  logr.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec z = pair.encoder_sample(x, rng);
    logr.push_back(cov_conditional_nf_pair(pair, prior, x, z).value);
  }
  double mx = kNegInf;
  for (double v : logr) mx = std::max(mx, v);
  double s = 0.0, s2 = 0.0;
  for (double v : logr) {
    const double w = std::exp(v - mx);
    s += w;
    s2 += w * w;
  }
  const double m = static_cast<double>(n);
  const double mean = s / m;
  return std::max(0.0, (s2 - m * mean * mean) / (m - 1.0)) / (2.0 * mean * mean);
}

// --- augmented flows ---------------------------------------------------------------

// Importance-sampling marginal over the augmentation noise:
//   log p(x) ~ log mean_k exp( cov_bijective([x, y_k]) - log p*(y_k) ),
// with y_k ~ p*(Y). Exact (zero variance) when the joint factorizes.
inline LogDensity cov_augmented(const bijective::FlowMap& flow,
                                const CodeDistribution& code_prior,
                                const CodeDistribution& noise_prior, const Vec& x,
                                std::size_t K, RngStream rng) {
  if (K < 1) throw DimensionError("cov_augmented: need K >= 1");
  const int aug = noise_prior.dim();
  if (flow.dim() != static_cast<int>(x.size()) + aug)
    throw DimensionError("cov_augmented: flow dim must be dim(x) + dim(y)");
  std::vector<double> terms;
  terms.reserve(K);
  Vec xy(flow.dim());
  xy.head(x.size()) = x;
  for (std::size_t k = 0; k < K; ++k) {
    const Vec y = noise_prior.sample(rng);
    xy.tail(aug) = y;
    terms.push_back(bijective::cov_bijective(flow, code_prior, xy).value -
                    noise_prior.log_density(y));
  }
  LogDensity out;
  out.value = log_mean_exp(terms);
  out.std_error = K > 1 ? log_mean_exp_std_error(terms) : 0.0;
  out.add("log mean_k p(x,y_k)/p*(y_k)", out.value);
  return out;
}

}  // namespace covkit::stochastic
