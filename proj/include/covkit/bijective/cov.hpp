#pragma once

// Change-of-variables evaluators for bijective flows: plain, incompressible,
// GMM-prior, and hard-clustered (VQ) variants.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "covkit/bijective/flow.hpp"
#include "covkit/bijective/gmm.hpp"
#include "covkit/core/distribution.hpp"
#include "covkit/core/jacobian.hpp"
#include "covkit/core/linalg.hpp"
#include "covkit/core/types.hpp"

namespace covkit::bijective {

// log p(x) = log p(Z = f(x)) + log|det J_f(x)|. The determinant term comes
// from the layers' closed forms; with cross_check the same value is recomputed
// from the dual-number Jacobian of the encoder and must agree to 1e-9.
inline CovReport cov_bijective(const FlowMap& flow, const CodeDistribution& prior,
                               const Vec& x, bool cross_check = false) {
  require_dim(x, flow.dim(), "cov_bijective");
  const Vec z = flow.inverse(x);
  const double logdet_f = -flow.forward_logdet(z);
  if (!std::isfinite(logdet_f))
    throw SingularError("cov_bijective: singular Jacobian at the given point");
  if (cross_check) {
    const double enc = logdet_lu(jacobian(flow.as_inverse_map(), x));
    if (std::abs(enc - logdet_f) > 1e-9)
      throw ModelError("cov_bijective: encoder- and decoder-form determinants "
                       "disagree by " + std::to_string(std::abs(enc - logdet_f)));
  }
  CovReport r;
  r.add("log p(Z=f(x))", prior.log_density(z));
  r.add("log|det J_f|", logdet_f);
  r.value = r.breakdown[0].second + r.breakdown[1].second;
  return r;
}

// Unit-determinant flows: log p(x) = log p(Z = f(x)). Layers must certify
// det = 1 at construction; the runtime assertion re-checks the sum.
inline CovReport cov_incompressible(const FlowMap& flow, const CodeDistribution& prior,
                                    const Vec& x) {
  if (!flow.all_unit_det())
    throw ModelError("cov_incompressible: flow contains a non-unit-determinant layer");
  const Vec z = flow.inverse(x);
  const double ld = flow.forward_logdet(z);
  if (std::abs(ld) > 1e-9)
    throw ModelError("cov_incompressible: |logdet| = " + std::to_string(std::abs(ld)));
  CovReport r;
  r.add("log p(Z=f(x))", prior.log_density(z));
  r.value = r.breakdown[0].second;
  return r;
}

// GMM code distribution: the mixture sum is evaluated in log space.
inline CovReport cov_gmm_flow(const FlowMap& flow, const GmmCodeDistribution& gmm,
                              const Vec& x) {
  require_dim(x, flow.dim(), "cov_gmm_flow");
  const Vec z = flow.inverse(x);
  const double logdet_f = -flow.forward_logdet(z);
  if (!std::isfinite(logdet_f))
    throw SingularError("cov_gmm_flow: singular Jacobian at the given point");
  CovReport r;
  r.add("log|det J_f|", logdet_f);
  r.add("log sum_k p(k) N(f(x)|mu_k,Sigma_k)", gmm.log_density(z));
  r.value = r.breakdown[0].second + r.breakdown[1].second;
  return r;
}

// Hard cluster assignment plus one flow per cluster.
struct VqFlowModel {
  std::vector<Vec> representatives;  // in embedding space
  std::vector<double> priors;
  std::vector<FlowMap> flows;
  SmoothMap embedding;  // optional; identity when not set
  std::function<int(const Vec&)> custom_assigner;  // optional; may return -1

  int clusters() const { return static_cast<int>(priors.size()); }

  // Nearest representative; ties broken by lowest index.
  int assign(const Vec& x) const {
    if (custom_assigner) return custom_assigner(x);
    const Vec e = embedding.valid() ? embedding(x) : x;
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < representatives.size(); ++k) {
      const double d = (e - representatives[k]).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(k);
      }
    }
    return best;
  }
};

inline CovReport cov_vq_flow(const VqFlowModel& model, const CodeDistribution& prior,
                             const Vec& x) {
  const int k = model.assign(x);
  if (k < 0 || k >= model.clusters())
    throw ModelError("cov_vq_flow: point not assigned to any cluster");
  const FlowMap& flow = model.flows[static_cast<std::size_t>(k)];
  const Vec z = flow.inverse(x);
  const double logdet_f = -flow.forward_logdet(z);
  CovReport r;
  r.add("log p(k=" + std::to_string(k) + ")", std::log(model.priors[static_cast<std::size_t>(k)]));
  r.add("log p(Z=f_k(x))", prior.log_density(z));
  r.add("log|det J_f_k|", logdet_f);
  r.value = r.breakdown[0].second + r.breakdown[1].second + r.breakdown[2].second;
  return r;
}

}  // namespace covkit::bijective
