#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gsg/closed_forms.hpp"
#include "gsg/errors.hpp"
#include "gsg/fluctuations.hpp"
#include "gsg/rng.hpp"

using namespace gsg;

TEST_CASE("cavity moments") {
  SUBCASE("q_bar = 0 leaves only the variance term") {
    const auto m = cavity_moments(1.3, 0.2, 0.0, 0.7);
    CHECK(m.omega_z == 0.0);
    CHECK(m.omega_z2 == doctest::Approx(1.0 / 0.8).epsilon(1e-14));
  }
  SUBCASE("worked point beta=2, lambda=0, q=0.25, J'=1") {
    const auto m = cavity_moments(2.0, 0.0, 0.25, 1.0);
    CHECK(m.omega_z == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(m.omega_z2 == doctest::Approx(0.75).epsilon(1e-14));
  }
  SUBCASE("J' = 0 kills the field term") {
    const auto m = cavity_moments(1.1, -0.4, 0.8, 0.0);
    CHECK(m.omega_z == 0.0);
    CHECK(m.omega_z2 == doctest::Approx(sigma(1.1, -0.4, 0.8) *
                                        sigma(1.1, -0.4, 0.8)).epsilon(1e-14));
  }
}

TEST_CASE("initial conditions") {
  SUBCASE("annealed regime: (sigma^4, 0, 0)") {
    const auto ic = initial_conditions(0.7, 0.3, 0.0);
    const double s = sigma(0.7, 0.3, 0.0);
    CHECK(ic.a == doctest::Approx(s * s * s * s).epsilon(1e-14));
    CHECK(ic.b == 0.0);
    CHECK(ic.c == 0.0);
  }
  SUBCASE("free field") {
    const auto ic = initial_conditions(0.5, 0.0, 0.0);
    CHECK(ic.a == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("Gaussian-moment oracle over J' at a condensed point") {
    const double beta = 2.0, lambda = 0.0, q = 0.25;
    const auto ic = initial_conditions(beta, lambda, q);
    // Monte Carlo over J': A(0) = E omega^2(z^2) - q^2, etc.
    CounterRng rng(271828, 1);
    const std::size_t n = 1000000;
    double a = 0.0, b = 0.0, c = 0.0;
    double a2 = 0.0, b2 = 0.0, c2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto m = cavity_moments(beta, lambda, q, rng.next_normal());
      const double va = m.omega_z2 * m.omega_z2 - q * q;
      const double vb = m.omega_z2 * m.omega_z * m.omega_z - q * q;
      const double vc =
          m.omega_z * m.omega_z * m.omega_z * m.omega_z - q * q;
      a += va;
      b += vb;
      c += vc;
      a2 += va * va;
      b2 += vb * vb;
      c2 += vc * vc;
    }
    const double dn = static_cast<double>(n);
    auto se = [dn](double s, double s2) {
      const double mean = s / dn;
      return std::sqrt(std::max(s2 / dn - mean * mean, 0.0) / dn);
    };
    CHECK(std::abs(ic.a - a / dn) <= 4.0 * se(a, a2));
    CHECK(std::abs(ic.b - b / dn) <= 4.0 * se(b, b2));
    CHECK(std::abs(ic.c - c / dn) <= 4.0 * se(c, c2));
  }
}

TEST_CASE("dynamical system right-hand side") {
  const auto zero = ode_rhs({0.0, 0.0, 0.0, 0.0}, 1.4);
  CHECK(zero.da == 0.0);
  CHECK(zero.db == 0.0);
  CHECK(zero.dc == 0.0);

  const auto pure_a = ode_rhs({1.0, 0.0, 0.0, 0.0}, 1.0);
  CHECK(pure_a.da == 1.0);
  CHECK(pure_a.db == 0.0);
  CHECK(pure_a.dc == 0.0);

  const auto mixed = ode_rhs({1.0, 1.0, 1.0, 0.0}, 1.0);
  CHECK(mixed.da == doctest::Approx(0.0));
  CHECK(mixed.db == doctest::Approx(0.0));
  CHECK(mixed.dc == doctest::Approx(-1.5));
}

TEST_CASE("trajectory integration in the annealed regime") {
  SUBCASE("closed-form endpoint at beta = 0.5") {
    const auto t = integrate_triple(0.5, 0.0, 0.0, 1.0, 10000);
    CHECK(t.a == doctest::Approx(4.0 / 3.0).epsilon(1e-8));
    CHECK(t.b == 0.0);  // preserved exactly, not just approximately
    CHECK(t.c == 0.0);
  }
  SUBCASE("t = 0 returns the initial condition") {
    const auto t = integrate_triple(0.9, -0.1, 0.0, 0.0, 100);
    const double s = sigma(0.9, -0.1, 0.0);
    CHECK(t.a == doctest::Approx(s * s * s * s).epsilon(1e-14));
  }
  SUBCASE("blow-up before t = 1 raises a divergence error with t*") {
    try {
      (void)integrate_triple(1.2, 0.0, 0.0, 1.0, 10000);
      FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
      CHECK(e.blow_up_time == doctest::Approx(1.0 / 1.44).epsilon(1e-12));
    }
  }
  SUBCASE("closed-form agreement at 50 random annealed points") {
    CounterRng rng(314, 2);
    for (int trial = 0; trial < 50; ++trial) {
      const double lambda = -1.0 + 1.85 * rng.next_double();
      const double beta = (0.1 + 0.7 * rng.next_double()) * (1.0 - lambda);
      const auto t = integrate_triple(beta, lambda, 0.0, 1.0, 10000);
      CHECK(std::abs(t.a - annealed_susceptibility(beta, lambda)) <= 1e-8);
    }
  }
  SUBCASE("numerical blow-up guard brackets the analytic time") {
    // a whisker of q_bar dodges the analytic annealed check, so the
    // step-doubling guard must fire close to t* = sigma^-4/beta^2
    const double t_star = 1.0 / 1.44;
    try {
      (void)integrate_triple(1.2, 0.0, 1e-12, 1.0, 2000);
      FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
      CHECK(e.blow_up_time <= t_star);
      CHECK(e.blow_up_time >= t_star - 0.05);
    }
  }
}

TEST_CASE("condensed-regime trajectories stay finite away from criticality") {
  // Gaussian-ansatz run: finite outputs, a stays positive
  const double q = rs_optimal_qbar(1.5, 0.0);
  const auto t = integrate_triple(1.5, 0.0, q, 0.5, 20000);
  CHECK(std::isfinite(t.a));
  CHECK(t.a > 0.0);
}

TEST_CASE("annealed susceptibility closed form") {
  CHECK(annealed_susceptibility(0.5, 0.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(annealed_susceptibility(1e-8, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(annealed_susceptibility(0.6, 0.2) ==
        doctest::Approx(1.0 / 0.28).epsilon(1e-14));
  CHECK_THROWS_AS(annealed_susceptibility(1.0, 0.0), DivergenceError);
  CHECK_THROWS_AS(annealed_susceptibility(0.5, 0.6), DivergenceError);
}

TEST_CASE("xi second moment MC") {
  SUBCASE("free field at quadrature size: exactly 1") {
    ModelParams p{0.0, 0.0, 0.0, 2, false};
    McConfig cfg;
    cfg.n_disorder = 10;
    cfg.seed = 7;
    const auto est = mc_xi_second_moment(p, cfg);
    CHECK(est.mean == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("free field at MC size: within errors of 1") {
    ModelParams p{0.0, 0.0, 0.0, 8, false};
    McConfig cfg;
    cfg.n_disorder = 64;
    cfg.n_directions = 1024;
    cfg.radial_points = 256;
    cfg.seed = 7;
    const auto est = mc_xi_second_moment(p, cfg);
    CHECK(std::abs(est.mean - 1.0) <= 3.0 * est.std_error + 1e-6);
  }
  SUBCASE("grows toward the critical line") {
    McConfig cfg;
    cfg.n_disorder = 192;
    cfg.n_directions = 1024;
    cfg.radial_points = 256;
    cfg.seed = 11;
    ModelParams near_critical{0.9, 0.0, 0.0, 16, false};
    ModelParams warm{0.5, 0.0, 0.0, 16, false};
    const auto hot = mc_xi_second_moment(near_critical, cfg);
    const auto mild = mc_xi_second_moment(warm, cfg);
    const double se = std::sqrt(hot.std_error * hot.std_error +
                                mild.std_error * mild.std_error);
    CHECK(hot.mean > mild.mean + 3.0 * se);
  }
}
