#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "covkit/analytic/donut.hpp"
#include "covkit/analytic/gaussian_example.hpp"
#include "covkit/core/integrate.hpp"
#include "covkit/core/jacobian.hpp"
#include "covkit/core/linalg.hpp"

using namespace covkit;
using namespace covkit::analytic;
using Catch::Approx;

TEST_CASE("anisotropic gaussian density closed forms") {
  const double log_inv_pi = -std::log(kPi);
  REQUIRE(AnisotropicGaussian::log_density(make_vec({0.0, 0.0})) ==
          Approx(log_inv_pi).margin(1e-14));
  REQUIRE(AnisotropicGaussian::log_density(make_vec({1.0, 0.0})) ==
          Approx(log_inv_pi - 0.5).margin(1e-14));
  REQUIRE(AnisotropicGaussian::log_density(make_vec({0.0, 1.0})) ==
          Approx(log_inv_pi - 2.0).margin(1e-14));
}

TEST_CASE("gaussian bijective pair round-trips exactly") {
  auto f = gauss_bijective_encoder();
  auto g = gauss_bijective_decoder();
  RngStream rng(4);
  for (int i = 0; i < 20; ++i) {
    const Vec z = make_vec({rng.normal(), rng.normal()});
    REQUIRE((f(g(z)) - z).norm() == 0.0);
  }
  // Injective pair: f(g(z)) = z exactly.
  auto fi = gauss_injective_encoder();
  auto gi = gauss_injective_decoder();
  for (int i = 0; i < 20; ++i) {
    const Vec z = make_vec({rng.normal()});
    REQUIRE((fi(gi(z)) - z).norm() == 0.0);
  }
}

TEST_CASE("donut density closed forms") {
  REQUIRE(donut_log_density(make_vec({5.0, 0.0})) ==
          Approx(std::log(1.0 / (55.0 * kPi))).margin(1e-14));
  REQUIRE(donut_log_density(make_vec({0.0, 0.0})) == kNegInf);
  REQUIRE(donut_log_density(make_vec({8.001, 0.0})) == kNegInf);
}

TEST_CASE("donut nf radius limits and midpoint") {
  auto g = donut_nf_decoder();
  // |z| -> 0: r -> R0 = 3.
  REQUIRE(g(make_vec({1e-9, 0.0})).norm() == Approx(3.0).margin(1e-9));
  // |z| large: r -> R1 = 8.
  REQUIRE(g(make_vec({9.0, 0.0})).norm() == Approx(8.0).margin(1e-12));
  // |z|^2 = 2 ln 2: r = sqrt(0.5*55 + 9) = sqrt(36.5).
  const double zn = std::sqrt(2.0 * std::log(2.0));
  REQUIRE(g(make_vec({zn, 0.0})).norm() == Approx(std::sqrt(36.5)).margin(1e-12));
}

TEST_CASE("donut nf closed-form logdet matches the dual-number Jacobian") {
  auto g = donut_nf_decoder();
  RngStream rng(11);
  for (int i = 0; i < 30; ++i) {
    Vec z = make_vec({rng.normal(), rng.normal()});
    if (z.norm() < 0.05) z(0) += 0.5;
    const double expect = donut_nf_decoder_logdet(z);
    const double got = logdet_lu(jacobian(g, z));
    REQUIRE(got == Approx(expect).margin(1e-9));
  }
  REQUIRE_THROWS_AS(donut_nf_forward(make_vec({0.0, 0.0})), ModelError);
}

TEST_CASE("donut nf round trip") {
  auto g = donut_nf_decoder();
  auto f = donut_nf_encoder();
  RngStream rng(12);
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(0.0, 2.0 * kPi);
    const double n = rng.uniform(0.1, 4.0);
    const Vec z = make_vec({n * std::cos(a), n * std::sin(a)});
    REQUIRE((f(g(z)) - z).norm() < 1e-9);
  }
}

TEST_CASE("donut nf pushforward is uniform over the annulus (chi^2, polar grid)") {
  auto g = donut_nf_decoder();
  RngStream rng(13);
  const int n = 1000000;
  const int na = 16, nr = 16;
  std::vector<double> counts(na * nr, 0.0);
  // Equal-probability radial bins: P(|x| <= r) = (r^2 - 9) / 55.
  for (int i = 0; i < n; ++i) {
    const Vec z = make_vec({rng.normal(), rng.normal()});
    if (z.squaredNorm() == 0.0) continue;
    const Vec x = g(z);
    const double ang = arg2d(x);
    const double q = (x.squaredNorm() - 9.0) / 55.0;
    int ia = std::min(na - 1, int(ang / (2.0 * kPi) * na));
    int ir = std::min(nr - 1, std::max(0, int(q * nr)));
    counts[ia * nr + ir] += 1.0;
  }
  const double expect = double(n) / (na * nr);
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expect) * (c - expect) / expect;
  // 255 dof: mean 255, sd ~22.6; 350 is far beyond the p = 0.001 cutoff.
  REQUIRE(chi2 < 350.0);
}

TEST_CASE("donut radial sampler: endpoints and mean radius") {
  // Inverse CDF endpoints.
  REQUIRE(std::sqrt(0.0 * 55.0 + 9.0) == Approx(3.0));
  REQUIRE(std::sqrt(1.0 * 55.0 + 9.0) == Approx(8.0));

  RngStream rng(14);
  const int n = 1000000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = donut_sample_radius(rng);
    s += r;
    s2 += r * r;
  }
  const double mean = s / n;
  const double sd = std::sqrt(s2 / n - mean * mean);
  // E[R] = 194/33, the manifold radius.
  REQUIRE(mean == Approx(194.0 / 33.0).margin(3.0 * sd / std::sqrt(double(n))));
}

TEST_CASE("donut vae wedge encoder and decoder") {
  DonutVae vae;
  const Vec x = make_vec({5.0, 0.0});
  // Inside the wedge the encoder density is 1/(2 alpha0).
  REQUIRE(vae.encoder_log_density(0.01, x) ==
          Approx(-std::log(2.0 * vae.alpha0)).margin(1e-14));
  REQUIRE(vae.encoder_log_density(1.0, x) == kNegInf);

  // Wrap: a point just below angle 0 assigns mass to codes just above 0.
  const Vec xw = make_vec({5.0 * std::cos(-0.01), 5.0 * std::sin(-0.01)});
  REQUIRE(std::isfinite(vae.encoder_log_density(0.05, xw)));

  // Decoder density integrates to 1; quadrature over the exact support
  // (the density is smooth inside the wedge).
  const double mass = quad_integrate_1d(
      [&](double a) {
        return quad_integrate_1d(
            [&](double r) {
              const Vec p = make_vec({r * std::cos(a), r * std::sin(a)});
              const double ld = vae.decoder_log_density(p, 1.0);
              return std::isfinite(ld) ? std::exp(ld) * r : 0.0;
            },
            3.0 + 1e-7, 8.0 - 1e-7, 1e-9);
      },
      1.0 - vae.alpha0 + 1e-9, 1.0 + vae.alpha0 - 1e-9, 1e-8);
  REQUIRE(mass == Approx(1.0).margin(1e-6));
}

TEST_CASE("gauss stochastic flow is self-consistent pointwise") {
  // p*(x) p(z|x) = p(z) p(x|z) for the joint-Gaussian model, any rho.
  for (double rho : {0.1, 0.5, 0.9}) {
    GaussStochasticFlow m{rho};
    RngStream rng(15);
    for (int i = 0; i < 50; ++i) {
      const Vec x = make_vec({rng.normal(), 0.5 * rng.normal()});
      const double z = m.encoder_sample(x, rng);
      const double lhs = AnisotropicGaussian::log_density(x) + m.encoder_log_density(z, x);
      const double rhs = m.prior_log_density(z) + m.decoder_log_density(x, z);
      REQUIRE(lhs == Approx(rhs).margin(1e-10));
    }
  }
}
