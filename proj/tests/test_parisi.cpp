#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gsg/closed_forms.hpp"
#include "gsg/errors.hpp"
#include "gsg/parisi.hpp"
#include "gsg/rng.hpp"

using namespace gsg;

namespace {

PiecewiseOrderParameter random_order_parameter(CounterRng& rng, std::size_t k,
                                               double q_max = 1.5) {
  std::vector<double> q(k), m(k);
  for (auto& v : q) v = q_max * rng.next_double();
  for (auto& v : m) v = rng.next_double();
  std::sort(q.begin(), q.end());
  std::sort(m.begin(), m.end());
  return PiecewiseOrderParameter(q, m);
}

}  // namespace

TEST_CASE("order parameter invariants") {
  CHECK_THROWS_AS(PiecewiseOrderParameter({0.5, 0.2}, {0.1, 0.9}), ArgumentError);
  CHECK_THROWS_AS(PiecewiseOrderParameter({0.2, 0.5}, {0.9, 0.1}), ArgumentError);
  CHECK_THROWS_AS(PiecewiseOrderParameter({0.2, 0.5}, {0.1, 1.2}), ArgumentError);
  CHECK_THROWS_AS(PiecewiseOrderParameter({-0.1, 0.5}, {0.1, 0.9}), ArgumentError);

  const PiecewiseOrderParameter x({0.3, 0.8}, {0.25, 0.75});
  CHECK(x.big_q() == 0.8);
  CHECK(x.value_at(0.1) == 0.25);
  CHECK(x.value_at(0.5) == 0.75);
  CHECK(x.integral_above(0.0) == doctest::Approx(0.3 * 0.25 + 0.5 * 0.75));
  CHECK(x.integral_above(0.5) == doctest::Approx(0.3 * 0.75));
  CHECK(x.q_weighted_integral() ==
        doctest::Approx(0.125 * 0.09 + 0.375 * (0.64 - 0.09)));
}

TEST_CASE("RS order parameter") {
  const auto degenerate = rs_order_parameter(0.0);
  CHECK(degenerate.big_q() == 0.0);
  const auto x = rs_order_parameter(0.25);
  CHECK(x.levels() == 2);
  CHECK(x.big_q() == 0.25);
  CHECK(x.value_at(0.1) == 0.0);  // x vanishes below q_bar
  CHECK(x.integral_above(0.0) == 0.0);
  CHECK_NOTHROW(rs_order_parameter(1.6));  // Q > 1 is legal
  CHECK_THROWS_AS(rs_order_parameter(-0.1), ArgumentError);
}

TEST_CASE("RSB functional embeds the RS trial pressure") {
  SUBCASE("x = 0 on [0, Q] collapses term by term") {
    for (double q : {0.1, 0.7, 1.3}) {
      const PiecewiseOrderParameter x({q}, {0.0});
      CHECK(rsb_pressure_functional(1.2, -0.4, x) ==
            doctest::Approx(rs_trial_pressure(1.2, -0.4, q)).epsilon(1e-14));
    }
  }
  SUBCASE("the RS order parameter reproduces the optimal pressure") {
    CHECK(rsb_pressure_functional(2.0, 0.0, rs_order_parameter(0.25)) ==
          doctest::Approx(-0.03407359027997264).epsilon(1e-13));
  }
  SUBCASE("degenerate Q = 0 reduces to log sigma(0)") {
    CHECK(rsb_pressure_functional(0.9, 0.5, rs_order_parameter(0.0)) ==
          doctest::Approx(0.34657359027997264).epsilon(1e-14));
  }
  SUBCASE("random embedding identity over the domain") {
    CounterRng rng(11, 1);
    for (int trial = 0; trial < 100; ++trial) {
      const double beta = 0.1 + 2.4 * rng.next_double();
      const double lambda = -1.0 + 1.9 * rng.next_double();
      const double q = 2.0 * rng.next_double();
      const PiecewiseOrderParameter x({q, q}, {0.0, 1.0});
      CHECK(rsb_pressure_functional(beta, lambda, x) ==
            doctest::Approx(rs_trial_pressure(beta, lambda, q)).epsilon(1e-12));
    }
  }
}

TEST_CASE("Parisi b profile") {
  const double beta = 1.0, lambda = 0.0;
  SUBCASE("final condition b(Q) = beta^2 sigma^2(Q)") {
    CounterRng rng(21, 2);
    const auto x = random_order_parameter(rng, 3);
    const double s = sigma(beta, lambda, x.big_q());
    CHECK(parisi_b_profile(beta, lambda, x, x.big_q()) ==
          doctest::Approx(beta * beta * s * s).epsilon(1e-14));
  }
  SUBCASE("x = 0 keeps b constant") {
    const PiecewiseOrderParameter x({0.8}, {0.0});
    const double s = sigma(beta, lambda, 0.8);
    CHECK(parisi_b_profile(beta, lambda, x, 0.0) ==
          doctest::Approx(beta * beta * s * s).epsilon(1e-14));
  }
  SUBCASE("x = 1 on [0, 0.5]: 1/b(0) = 1.5 - 0.5 = 1") {
    const PiecewiseOrderParameter x({0.5}, {1.0});
    CHECK(parisi_b_profile(1.0, 0.0, x, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("Parisi closed form") {
  SUBCASE("x = 0: constant integrand") {
    const PiecewiseOrderParameter x({0.7}, {0.0});
    const double s2 = 1.0 / (1.0 - 0.0 + 1.44 * 0.7);
    CHECK(parisi_closed_form(1.2, 0.0, x) ==
          doctest::Approx(0.5 * 1.44 * s2 * 0.7).epsilon(1e-14));
  }
  SUBCASE("Q = 0 vanishes") {
    CHECK(parisi_closed_form(1.0, 0.3, rs_order_parameter(0.0)) == 0.0);
  }
}

TEST_CASE("backward ODE agrees with the closed form") {
  SUBCASE("constant-b reference value") {
    const PiecewiseOrderParameter x({1.0}, {0.0});
    CHECK(parisi_ode_solve(1.0, 0.0, x, 20000) ==
          doctest::Approx(0.25).epsilon(1e-10));
    CHECK(parisi_ode_solve(1.0, 0.0, rs_order_parameter(0.0), 100) == 0.0);
  }
  SUBCASE("50 random order parameters, K <= 5") {
    CounterRng rng(31, 3);
    for (int trial = 0; trial < 50; ++trial) {
      const double beta = 0.3 + 2.2 * rng.next_double();
      const double lambda = -1.0 + 1.9 * rng.next_double();
      const auto x = random_order_parameter(rng, 1 + (rng.next_u64() % 5));
      const double closed = parisi_closed_form(beta, lambda, x);
      const double ode = parisi_ode_solve(beta, lambda, x, 10000);
      CHECK(std::abs(closed - ode) <= 1e-8);
    }
  }
  SUBCASE("exact per-level solution of b: 1/b is linear in q") {
    // one level with x = m: 1/b(0) = 1/(beta^2 sigma^2) - m Q
    const double beta = 1.3, lambda = -0.2, m = 0.6, big_q = 0.9;
    const PiecewiseOrderParameter x({big_q}, {m});
    const double s = sigma(beta, lambda, big_q);
    const double b_end = parisi_b_profile(beta, lambda, x, 0.0);
    CHECK(1.0 / b_end ==
          doctest::Approx(1.0 / (beta * beta * s * s) - m * big_q).epsilon(1e-13));
  }
}

TEST_CASE("entropy term identity: discrete sum equals integral form") {
  SUBCASE("RS order parameter gives beta^2 q^2 / 4") {
    CHECK(rsb_entropy_term(2.0, rs_order_parameter(0.25)) ==
          doctest::Approx(4.0 * 0.0625 / 4.0).epsilon(1e-14));
  }
  SUBCASE("x = 1 everywhere cancels") {
    const PiecewiseOrderParameter x({0.8}, {1.0});
    CHECK(rsb_entropy_term(1.5, x) == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("Q = 0") {
    CHECK(rsb_entropy_term(1.5, rs_order_parameter(0.0)) == 0.0);
  }
  SUBCASE("100 random order parameters (identity asserted internally)") {
    CounterRng rng(41, 4);
    for (int trial = 0; trial < 100; ++trial) {
      const auto x = random_order_parameter(rng, 1 + (rng.next_u64() % 6));
      CHECK_NOTHROW(rsb_entropy_term(0.3 + 2.0 * rng.next_double(), x));
    }
  }
}

TEST_CASE("stationarity residual") {
  SUBCASE("vanishes at the condensed RS optimum") {
    for (double beta : {1.5, 2.0, 2.8}) {
      const double q = rs_optimal_qbar(beta, 0.0);
      CHECK(stationarity_residual(beta, 0.0, rs_order_parameter(q)) <= 1e-12);
    }
  }
  SUBCASE("strictly positive for generic parameters") {
    const PiecewiseOrderParameter x({0.5}, {1.0});
    CHECK(stationarity_residual(1.0, 0.0, x) > 1e-3);
  }
  SUBCASE("Q = 0 leaves |1 - beta sigma^2(0)|") {
    const double s2 = 1.0 / (1.0 - 0.2);
    CHECK(stationarity_residual(0.7, 0.2, rs_order_parameter(0.0)) ==
          doctest::Approx(std::abs(1.0 - 0.7 * s2)).epsilon(1e-13));
  }
}

TEST_CASE("functional never dips below the RS pressure") {
  CounterRng rng(51, 5);
  for (int point = 0; point < 20; ++point) {
    const double beta = 0.2 + 2.5 * rng.next_double();
    const double lambda = -1.0 + 1.85 * rng.next_double();
    const double rs = rs_pressure(beta, lambda).pressure;
    for (int trial = 0; trial < 25; ++trial) {
      const auto x = random_order_parameter(rng, 1 + (rng.next_u64() % 6));
      CHECK(rsb_pressure_functional(beta, lambda, x) >= rs - 1e-9);
    }
  }
}

TEST_CASE("raising any m level weakly raises the entropic part") {
  CounterRng rng(61, 6);
  for (int trial = 0; trial < 50; ++trial) {
    const double beta = 0.3 + 2.0 * rng.next_double();
    const double lambda = -1.0 + 1.8 * rng.next_double();
    const std::size_t k = 2 + (rng.next_u64() % 3);
    const auto x = random_order_parameter(rng, k);
    auto q = x.q();
    auto m = x.m();
    // perturb one admissible level upward
    const std::size_t a = rng.next_u64() % k;
    const double hi = a + 1 < k ? m[a + 1] : 1.0;
    auto m_up = m;
    m_up[a] = m[a] + (hi - m[a]) * rng.next_double();
    const PiecewiseOrderParameter y(q, m_up);
    CHECK(parisi_closed_form(beta, lambda, y) >=
          parisi_closed_form(beta, lambda, x) - 1e-12);
  }
}

TEST_CASE("singular order parameters are rejected with the crossing point") {
  // lambda >= 1 makes the denominator cross zero for heavy x
  const PiecewiseOrderParameter x({0.6}, {1.0});
  try {
    (void)rsb_pressure_functional(1.0, 1.5, x);
    FAIL("expected SingularFunctionalError");
  } catch (const SingularFunctionalError& e) {
    CHECK(e.offending_q >= 0.0);
    CHECK(e.offending_q <= 0.6);
  }
}

TEST_CASE("infimum search lands on the RS value") {
  SUBCASE("annealed point") {
    InfimumOptions opts;
    opts.restarts = 8;
    opts.seed = 2;
    const auto found = rsb_infimum_search(0.5, 0.0, 3, opts);
    CHECK(found.value == doctest::Approx(0.0).epsilon(1e-6));
  }
  SUBCASE("condensed point recovers Q = q_bar and x = 0") {
    InfimumOptions opts;
    opts.restarts = 8;
    opts.seed = 2;
    const auto found = rsb_infimum_search(2.0, 0.0, 3, opts);
    CHECK(std::abs(found.value - (-0.03407359027997264)) <= 1e-6);
  }
  SUBCASE("fixing the RS parameter needs no search") {
    const double q = rs_optimal_qbar(1.8, -0.2);
    CHECK(rsb_pressure_functional(1.8, -0.2, rs_order_parameter(q)) ==
          doctest::Approx(rs_pressure(1.8, -0.2).pressure).epsilon(1e-13));
  }
}
