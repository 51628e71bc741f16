#pragma once

// Time-dependent vector fields with dual-number access to the state Jacobian,
// and RK4 transport of the augmented state (z, integrated Jacobian trace).

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "covkit/core/distribution.hpp"
#include "covkit/core/dual.hpp"
#include "covkit/core/map.hpp"
#include "covkit/core/types.hpp"

namespace covkit::continuous {

class VectorField {
 public:
  VectorField() = default;

  template <class F>
  VectorField(int dim, F f)
      : dim_(dim),
        f64_([f](double t, const std::vector<double>& z) { return f(t, z); }),
        fdual_([f](double t, const DualVec& z) { return f(t, z); }) {}

  int dim() const { return dim_; }
  bool valid() const { return static_cast<bool>(f64_); }

  Vec operator()(double t, const Vec& z) const {
    require_dim(z, dim_, "VectorField");
    return detail::from_std(f64_(t, detail::to_std<double>(z)));
  }

  std::vector<double> eval(double t, const std::vector<double>& z) const {
    return f64_(t, z);
  }
  DualVec eval(double t, const DualVec& z) const { return fdual_(t, z); }

  Mat state_jacobian(double t, const Vec& z) const {
    DualVec in(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i)
      in[static_cast<std::size_t>(i)] = Dual::seeded(z(i), dim_, i);
    const DualVec out = fdual_(t, in);
    Mat J = Mat::Zero(dim_, dim_);
    for (int r = 0; r < dim_; ++r)
      if (out[static_cast<std::size_t>(r)].d.size() != 0)
        J.row(r) = out[static_cast<std::size_t>(r)].d;
    return J;
  }

  double trace_jacobian(double t, const Vec& z) const {
    return state_jacobian(t, z).trace();
  }

 private:
  int dim_ = 0;
  std::function<std::vector<double>(double, const std::vector<double>&)> f64_;
  std::function<DualVec(double, const DualVec&)> fdual_;
};

struct FlowIntegration {
  Vec endpoint;
  double trace_integral = 0.0;  // signed: integral of tr J_F dt from t0 to t1
};

// Classic fixed-step RK4 on the augmented state [z, l] with dl/dt = tr J_F.
// Integrates from t0 to t1 in either direction; aborts on trajectory blow-up.
inline FlowIntegration integrate_flow(const VectorField& field, const Vec& start,
                                      double t0, double t1, int steps) {
  if (steps < 1) throw DimensionError("integrate_flow: need steps >= 1");
  require_dim(start, field.dim(), "integrate_flow start");
  const double h = (t1 - t0) / steps;
  Vec z = start;
  double ell = 0.0;
  auto rhs = [&field](double t, const Vec& state, double& trace_out) {
    trace_out = field.trace_jacobian(t, state);
    return field(t, state);
  };
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * h;
    double tr1, tr2, tr3, tr4;
    const Vec k1 = rhs(t, z, tr1);
    const Vec k2 = rhs(t + 0.5 * h, z + 0.5 * h * k1, tr2);
    const Vec k3 = rhs(t + 0.5 * h, z + 0.5 * h * k2, tr3);
    const Vec k4 = rhs(t + h, z + h * k3, tr4);
    z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    ell += (h / 6.0) * (tr1 + 2.0 * tr2 + 2.0 * tr3 + tr4);
    if (!z.allFinite() || z.norm() > 1e8)
      throw ModelError("integrate_flow: trajectory blow-up at t = " +
                       std::to_string(t + h) + " (|z| = " + std::to_string(z.norm()) + ")");
  }
  return {z, ell};
}

// RK4 transport of the state alone; for sampling paths where the
// accumulated trace is not needed.
inline Vec transport(const VectorField& field, const Vec& start, double t0, double t1,
                     int steps) {
  if (steps < 1) throw DimensionError("transport: need steps >= 1");
  const double h = (t1 - t0) / steps;
  Vec z = start;
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * h;
    const Vec k1 = field(t, z);
    const Vec k2 = field(t + 0.5 * h, z + 0.5 * h * k1);
    const Vec k3 = field(t + 0.5 * h, z + 0.5 * h * k2);
    const Vec k4 = field(t + h, z + h * k3);
    z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!z.allFinite() || z.norm() > 1e8)
      throw ModelError("transport: trajectory blow-up at t = " + std::to_string(t + h));
  }
  return z;
}

// Continuous CoV: encode x over [0, T] and add the accumulated trace to the
// prior term. log p(x) = log p(Z = f(x)) + int_0^T tr J_F dt.
inline CovReport cov_continuous(const VectorField& field, const CodeDistribution& prior,
                                const Vec& x, double horizon, int steps) {
  const FlowIntegration enc = integrate_flow(field, x, 0.0, horizon, steps);
  CovReport r;
  r.add("log p(Z=f(x))", prior.log_density(enc.endpoint));
  r.add("int tr J_F dt", enc.trace_integral);
  r.value = r.breakdown[0].second + r.breakdown[1].second;
  return r;
}

}  // namespace covkit::continuous
