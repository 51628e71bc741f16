#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "covkit/continuous/ddpm.hpp"
#include "covkit/continuous/field.hpp"
#include "covkit/continuous/probability_flow.hpp"
#include "covkit/core/distribution.hpp"
#include "covkit/diagnostics/stats.hpp"

using namespace covkit;
using namespace covkit::continuous;
using Catch::Approx;

namespace {

VectorField linear_field(double a, int dim) {
  return VectorField(dim, [a](double, const auto& z) {
    auto f = z;
    for (auto& v : f) v = a * v;
    return f;
  });
}

}  // namespace

TEST_CASE("integrate_flow: zero field is a no-op") {
  VectorField zero(2, [](double, const auto& z) {
    auto f = z;
    for (auto& v : f) v = 0.0 * v;
    return f;
  });
  const Vec x = make_vec({1.0, -2.0});
  const auto r = integrate_flow(zero, x, 0.0, 1.0, 10);
  REQUIRE((r.endpoint - x).norm() == 0.0);
  REQUIRE(r.trace_integral == 0.0);
}

TEST_CASE("integrate_flow: linear field trace integral is C*a*T") {
  // a = 0.5, T = 1, C = 2: the trace is constant so RK4 integrates it
  // exactly; the endpoint carries the h^4 error.
  const auto field = linear_field(0.5, 2);
  const Vec x = make_vec({0.7, -0.3});
  const auto r = integrate_flow(field, x, 0.0, 1.0, 100);
  REQUIRE(r.trace_integral == Approx(2.0 * 0.5 * 1.0).margin(1e-12));
  REQUIRE((r.endpoint - std::exp(0.5) * x).norm() < 1e-8);
}

TEST_CASE("integrate_flow: forward then backward returns the start") {
  VectorField field(2, [](double t, const auto& z) {
    using S = std::decay_t<decltype(z[0])>;
    std::vector<S> f(2);
    f[0] = 0.3 * tanh(z[1]) + 0.1 * std::sin(t);
    f[1] = -0.4 * z[0] + 0.05 * z[1] * z[1];
    return f;
  });
  RngStream rng(41);
  for (int t = 0; t < 10; ++t) {
    const Vec x = make_vec({rng.normal(), rng.normal()});
    const auto fwd = integrate_flow(field, x, 0.0, 1.0, 100);
    const auto back = integrate_flow(field, fwd.endpoint, 1.0, 0.0, 100);
    REQUIRE((back.endpoint - x).norm() < 1e-6);
    REQUIRE(fwd.trace_integral + back.trace_integral == Approx(0.0).margin(1e-6));
  }
}

TEST_CASE("continuous CoV matches the closed form for contracting transport") {
  // Transport N(0, I_2) by F = a z for time T: pushforward is N(0, e^{2aT} I).
  const double a = -1.0, T = std::log(2.0);
  const auto field = linear_field(a, 2);
  auto prior = standard_normal(2);
  RngStream rng(42);
  for (int t = 0; t < 10; ++t) {
    const Vec y = make_vec({0.3 * rng.normal(), 0.3 * rng.normal()});
    // Reverse-transport y to the start, accumulate the signed trace.
    const auto back = integrate_flow(field, y, T, 0.0, 100);
    const double model = prior.log_density(back.endpoint) + back.trace_integral;
    const double closed = log_diag_normal_pdf(
        y, Vec::Zero(2), Vec::Constant(2, std::exp(2.0 * a * T)));
    REQUIRE(model == Approx(closed).margin(1e-6));
  }
}

TEST_CASE("continuous CoV converges at RK4 order on the linear field") {
  const double a = 0.5, T = 1.0;
  const auto field = linear_field(a, 2);
  auto prior = standard_normal(2);
  const Vec x = make_vec({0.8, -0.5});
  // Closed form: f(x) = e^{aT} x, log p = log phi2(e^{aT} x) + 2 a T.
  const double closed = prior.log_density(std::exp(a * T) * x) + 2.0 * a * T;
  std::vector<double> hs, errs;
  for (int steps : {4, 8, 16, 32}) {
    const double v = cov_continuous(field, prior, x, T, steps).value;
    hs.push_back(std::log(T / steps));
    errs.push_back(std::log(std::abs(v - closed)));
  }
  // Least-squares slope of log(err) vs log(h).
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    mx += hs[i];
    my += errs[i];
  }
  mx /= hs.size();
  my /= errs.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    num += (hs[i] - mx) * (errs[i] - my);
    den += (hs[i] - mx) * (hs[i] - mx);
  }
  const double slope = num / den;
  REQUIRE(slope == Approx(4.0).margin(0.3));
}

TEST_CASE("integrate_flow aborts on blow-up") {
  const auto field = linear_field(40.0, 1);
  REQUIRE_THROWS_AS(integrate_flow(field, make_vec({1.0}), 0.0, 1.0, 100), ModelError);
}

TEST_CASE("ddpm schedule and kernels") {
  SECTION("alpha accumulates and kernels have the stated parameters") {
    DdpmSchedule s({0.1, 0.2});
    REQUIRE(s.alpha(1) == Approx(0.9));
    REQUIRE(s.alpha(2) == Approx(0.9 * 0.8));
    // t=1 perturbation: N(sqrt(0.9) x, 0.1 I).
    auto pert = ddpm_perturbation(s, 1, 1);
    const double lp = pert.log_density(make_vec({0.5}), make_vec({1.0}));
    REQUIRE(lp == Approx(log_normal_pdf(0.5, std::sqrt(0.9), 0.1)).margin(1e-14));
    REQUIRE_THROWS_AS(s.beta(3), DimensionError);
    REQUIRE_THROWS_AS(s.beta(0), DimensionError);
  }

  SECTION("chained forward kernels match the perturbation kernel covariance") {
    DdpmSchedule s({0.15, 0.25, 0.1});
    const int t = 3, n = 100000;
    const Vec x = make_vec({1.3});
    RngStream rng(43);
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
      Vec z = x;
      for (int step = 1; step <= t; ++step)
        z = ddpm_forward_kernel(s, step, 1).sample(z, rng);
      sum += z(0);
      sumsq += z(0) * z(0);
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    const double expect_var = 1.0 - s.alpha(t);
    REQUIRE(mean == Approx(std::sqrt(s.alpha(t)) * x(0))
                        .margin(3.0 * std::sqrt(expect_var / n)));
    // variance estimator sd ~ var * sqrt(2/n)
    REQUIRE(var == Approx(expect_var).margin(3.0 * expect_var * std::sqrt(2.0 / n)));
  }

  SECTION("long constant schedule drives alpha_T to ~1.7e-9") {
    auto s = DdpmSchedule::constant(0.02, 1000);
    REQUIRE(s.alpha(1000) == Approx(std::pow(0.98, 1000)).epsilon(1e-12));
    REQUIRE(s.alpha(1000) < 2e-9);
    // Code marginal is then approximately standard normal for a unit-variance
    // target: z_T = sqrt(alpha) x + sqrt(1-alpha) eps.
    RngStream rng(44);
    std::vector<double> zs;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const double x = rng.normal();  // unit-variance target
      zs.push_back(std::sqrt(s.alpha(1000)) * x +
                   std::sqrt(1.0 - s.alpha(1000)) * rng.normal());
    }
    const double d = diagnostics::ks_statistic(
        zs, [](double v) { return diagnostics::std_normal_cdf(v); });
    REQUIRE(diagnostics::ks_pvalue(d, zs.size()) > 0.001);
  }
}

TEST_CASE("probability flow ODE") {
  SECTION("stationary standard normal is preserved (KS test)") {
    const double beta0 = 1.0, T = 2.0;
    auto drift = vp_drift([beta0](double) { return beta0; }, 1);
    auto score = vp_gaussian_score(beta0, Vec::Zero(1), Vec::Ones(1));
    auto field = probability_flow_ode(drift, [beta0](double) { return std::sqrt(beta0); },
                                      score);
    RngStream rng(45);
    std::vector<double> out;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      const Vec z = make_vec({rng.normal()});
      out.push_back(transport(field, z, T, 0.0, 50)(0));
    }
    const double d = diagnostics::ks_statistic(
        out, [](double v) { return diagnostics::std_normal_cdf(v); });
    REQUIRE(diagnostics::ks_pvalue(d, out.size()) > 0.001);
  }

  SECTION("zero diffusion returns the pure drift ODE") {
    auto drift = vp_drift([](double) { return 0.5; }, 2);
    auto score = vp_gaussian_score(0.5, Vec::Zero(2), Vec::Ones(2));
    auto field = probability_flow_ode(drift, nullptr, score);
    const Vec z = make_vec({1.0, -1.0});
    REQUIRE((field(0.3, z) - drift(0.3, z)).norm() == 0.0);
  }

  SECTION("gaussian target N(mu, sigma^2) is recovered by reverse transport") {
    const double beta0 = 1.0, T = 18.0;  // abar(T) ~ 1.5e-8
    const double mu = 0.7, var = 2.25;
    auto drift = vp_drift([beta0](double) { return beta0; }, 1);
    auto score = vp_gaussian_score(beta0, Vec::Constant(1, mu), Vec::Constant(1, var));
    auto field = probability_flow_ode(drift, [beta0](double) { return std::sqrt(beta0); },
                                      score);
    RngStream rng(46);
    const int n = 100000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const Vec z = make_vec({rng.normal()});
      const double x = transport(field, z, T, 0.0, 120)(0);
      s += x;
      s2 += x * x;
    }
    const double mean = s / n;
    const double v = s2 / n - mean * mean;
    REQUIRE(mean == Approx(mu).margin(3.0 * std::sqrt(var / n)));
    REQUIRE(v == Approx(var).margin(3.0 * var * std::sqrt(2.0 / n)));
  }
}
