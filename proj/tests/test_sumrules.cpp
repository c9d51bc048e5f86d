#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gsg/closed_forms.hpp"
#include "gsg/errors.hpp"
#include "gsg/measure.hpp"
#include "gsg/model.hpp"
#include "gsg/montecarlo.hpp"
#include "gsg/rng.hpp"
#include "gsg/sumrules.hpp"
#include "gsg/types.hpp"

using namespace gsg;

TEST_CASE("interpolation spec pins the multiplier to -beta^2 q_bar") {
  const auto spec = make_rs_interpolation(1.5, 0.3, 0.4);
  CHECK(spec.c == doctest::Approx(-2.25 * 0.4).epsilon(1e-15));
  CHECK_THROWS_AS(make_rs_interpolation(1.0, 1.2, 0.1), ArgumentError);
  CHECK_THROWS_AS(make_rs_interpolation(1.0, 0.5, -0.1), ArgumentError);
}

TEST_CASE("interpolating measure boundary cases") {
  const std::size_t n = 2;
  const auto j = make_disorder(n, 61);
  ModelParams p{0.9, 0.2, 0.0, n, false};
  CounterRng rng(67, 1);
  const auto cavity = rng.normals(n);

  SUBCASE("t = 1 recovers the original system") {
    const auto spec = make_rs_interpolation(p.beta, 1.0, 0.35, cavity);
    const auto interp = rs_interpolating_measure(j, p, spec);
    const auto original = model_measure(j, p);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> z = {2.5 * rng.next_normal(), 2.5 * rng.next_normal()};
      CHECK(interp.exponent(z) == doctest::Approx(original.exponent(z)).epsilon(1e-13));
    }
  }
  SUBCASE("t = 0 factorizes into one-body systems") {
    const double q_bar = 0.35;
    const auto spec = make_rs_interpolation(p.beta, 0.0, q_bar, cavity);
    const auto interp = rs_interpolating_measure(j, p, spec);
    const double log_z = measure_quadrature(interp, false).log_z;
    // per-site Gaussian integral: log sigma + 1/2 beta^2 q sigma^2 J'_i^2
    const double s = sigma(p.beta, p.lambda, q_bar);
    double expected = 0.0;
    for (double jp : cavity)
      expected += std::log(s) +
                  0.5 * p.beta * p.beta * q_bar * s * s * jp * jp;
    CHECK(log_z == doctest::Approx(expected).epsilon(1e-10));
  }
  SUBCASE("the external field must vanish") {
    ModelParams with_field = p;
    with_field.h = 0.2;
    const auto spec = make_rs_interpolation(p.beta, 0.5, 0.1, cavity);
    CHECK_THROWS_AS(rs_interpolating_measure(j, with_field, spec), ArgumentError);
  }
}

TEST_CASE("interpolating pressure") {
  SUBCASE("t = 0 closed form is exact with zero error") {
    ModelParams p{1.2, -0.3, 0.0, 2, false};
    McConfig cfg;
    cfg.seed = 71;
    const auto spec = make_rs_interpolation(p.beta, 0.0, 0.6);
    const auto est = rs_interpolating_pressure(p, spec, cfg);
    const double s = sigma(1.2, -0.3, 0.6);
    CHECK(est.mean ==
          doctest::Approx(std::log(s) + 0.5 * 1.44 * 0.6 * s * s).epsilon(1e-13));
    CHECK(est.std_error == 0.0);
  }
  SUBCASE("beta = 0 is exact at every t") {
    ModelParams p{0.0, 0.3, 0.0, 2, false};
    McConfig cfg;
    cfg.n_disorder = 8;
    cfg.seed = 73;
    const auto spec = make_rs_interpolation(0.0, 0.5, 0.0);
    const auto est = rs_interpolating_pressure(p, spec, cfg);
    CHECK(est.mean == doctest::Approx(-0.5 * std::log(0.7)).epsilon(1e-10));
    CHECK(est.std_error < 1e-12);
  }
  SUBCASE("t = 1 estimates the quenched pressure") {
    ModelParams p{0.7, 0.0, 0.0, 2, false};
    McConfig cfg;
    cfg.n_disorder = 400;
    cfg.seed = 79;
    const auto spec = make_rs_interpolation(p.beta, 1.0, 0.2);
    const auto a = rs_interpolating_pressure(p, spec, cfg);
    McConfig cfg_b = cfg;
    cfg_b.seed = 83;
    const auto b = quenched_pressure(p, cfg_b);
    const double se = std::sqrt(a.std_error * a.std_error +
                                b.std_error * b.std_error);
    CHECK(std::abs(a.mean - b.mean) <= 3.0 * se);
  }
}

TEST_CASE("interpolation derivative") {
  SUBCASE("annealed choice q_bar = 0 makes the derivative nonpositive") {
    ModelParams p{0.8, 0.0, 0.0, 2, false};
    McConfig cfg;
    cfg.n_disorder = 200;
    cfg.seed = 89;
    const auto spec = make_rs_interpolation(p.beta, 0.4, 0.0);
    const auto est = rs_interpolation_derivative(p, spec, cfg);
    CHECK(est.mean < 0.0);
  }
  SUBCASE("beta = 0 gives zero exactly") {
    ModelParams p{0.0, 0.2, 0.0, 2, false};
    McConfig cfg;
    cfg.n_disorder = 10;
    cfg.seed = 97;
    const auto spec = make_rs_interpolation(0.0, 0.3, 0.0);
    const auto est = rs_interpolation_derivative(p, spec, cfg);
    CHECK(std::abs(est.mean) < 1e-12);
  }
  SUBCASE("bounded above by beta^2 q_bar^2 / 4") {
    ModelParams p{1.4, 0.0, 0.0, 2, false};
    McConfig cfg;
    cfg.n_disorder = 150;
    cfg.seed = 101;
    const double q = rs_optimal_qbar(1.4, 0.0);
    const auto spec = make_rs_interpolation(p.beta, 0.6, q);
    const auto est = rs_interpolation_derivative(p, spec, cfg);
    CHECK(est.mean <= 0.25 * 1.96 * q * q + 3.0 * est.std_error);
  }
  SUBCASE("matches a per-sample finite difference of phi(t)") {
    // common disorder across t +- delta makes the FD noise tiny
    ModelParams p{0.5, 0.0, 0.0, 2, false};
    const double q_bar = 0.0, t0 = 0.5, delta = 0.05;
    const std::size_t n_samples = 400;
    RunningStats fd;
    for (std::size_t i = 0; i < n_samples; ++i) {
      const auto j = sample_disorder(2, 103, i);
      CounterRng cav(103, streams::per_sample(streams::kCavity, i));
      const auto fields = cav.normals(2);
      const auto up = rs_interpolating_measure(
          j, p, make_rs_interpolation(p.beta, t0 + delta, q_bar, fields));
      const auto dn = rs_interpolating_measure(
          j, p, make_rs_interpolation(p.beta, t0 - delta, q_bar, fields));
      fd.add((measure_quadrature(up, false).log_z -
              measure_quadrature(dn, false).log_z) /
             (2.0 * delta * 2.0));
    }
    McConfig cfg;
    cfg.n_disorder = n_samples;
    cfg.seed = 103;
    const auto direct = rs_interpolation_derivative(
        p, make_rs_interpolation(p.beta, t0, q_bar), cfg);
    const double se =
        std::sqrt(fd.std_error() * fd.std_error() +
                  direct.std_error * direct.std_error);
    // O(delta^2) curvature allowance on top of the statistical band
    CHECK(std::abs(fd.mean() - direct.mean) <= 3.0 * se + 5e-3);
  }
}

TEST_CASE("sum rule residual") {
  SUBCASE("beta = 0 closes exactly") {
    ModelParams p{0.0, 0.0, 0.0, 2, false};
    McConfig cfg;
    cfg.n_disorder = 10;
    cfg.seed = 107;
    const auto res = rs_sum_rule_residual(p, 0.0, cfg, 5);
    CHECK(std::abs(res.mean) < 1e-10);
  }
  SUBCASE("annealed point at N = 2") {
    ModelParams p{0.5, 0.0, 0.0, 2, false};
    McConfig cfg;
    cfg.n_disorder = 150;
    cfg.seed = 109;
    const auto report = rs_sum_rule_report(p, 0.0, cfg, 11);
    const double tol = 3.0 * report.residual.std_error +
                       0.25 * 0.25 * report.discretization + 1e-6;
    CHECK(std::abs(report.residual.mean) <= tol);
    // the fluctuation integrand is nonnegative up to noise
    for (const auto& node : report.integrand)
      CHECK(node.mean >= -3.0 * node.std_error);
  }
  SUBCASE("condensed point at N = 2, q_bar = 2/9") {
    ModelParams p{1.5, 0.0, 0.0, 2, false};
    McConfig cfg;
    cfg.n_disorder = 150;
    cfg.seed = 113;
    const auto report = rs_sum_rule_report(p, 2.0 / 9.0, cfg, 11);
    const double tol = 3.0 * report.residual.std_error +
                       0.25 * 2.25 * report.discretization + 1e-6;
    CHECK(std::abs(report.residual.mean) <= tol);
  }
}

TEST_CASE("overlap decomposition identity") {
  // q_12,N is the convex combination of the block overlaps, configuration
  // by configuration
  CounterRng rng(127, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n1 = 1 + (rng.next_u64() % 3);
    const std::size_t n2 = 1 + (rng.next_u64() % 3);
    const std::size_t n = n1 + n2;
    SpinConfig z1, z2;
    for (std::size_t i = 0; i < n; ++i) {
      z1.z.push_back(rng.next_normal());
      z2.z.push_back(rng.next_normal());
    }
    SpinConfig a1{std::vector<double>(z1.z.begin(), z1.z.begin() + n1)};
    SpinConfig a2{std::vector<double>(z2.z.begin(), z2.z.begin() + n1)};
    SpinConfig b1{std::vector<double>(z1.z.begin() + n1, z1.z.end())};
    SpinConfig b2{std::vector<double>(z2.z.begin() + n1, z2.z.end())};
    const double combined =
        (static_cast<double>(n1) * overlap(a1, a2) +
         static_cast<double>(n2) * overlap(b1, b2)) /
        static_cast<double>(n);
    CHECK(overlap(z1, z2) == doctest::Approx(combined).epsilon(1e-13));
  }
}

TEST_CASE("thermodynamic interpolation derivative") {
  SUBCASE("beta = 0 vanishes") {
    ModelParams p{0.0, 0.1, 0.0, 3, false};
    McConfig cfg;
    cfg.n_disorder = 10;
    cfg.seed = 131;
    const auto est = thermo_interpolation_derivative(1, 2, p, 0.5, cfg);
    CHECK(std::abs(est.mean) < 1e-12);
  }
  SUBCASE("nonnegative by overlap convexity: N = 3 = 1 + 2, quadrature") {
    ModelParams p{0.5, 0.0, 0.0, 3, false};
    McConfig cfg;
    cfg.n_disorder = 120;
    cfg.seed = 137;
    const auto est = thermo_interpolation_derivative(1, 2, p, 0.5, cfg);
    CHECK(est.mean >= -3.0 * est.std_error);
  }
  SUBCASE("N = 4 = 2 + 2 through importance sampling") {
    ModelParams p{0.5, 0.0, 0.0, 4, false};
    McConfig cfg;
    cfg.n_disorder = 40;
    cfg.n_directions = 30000;  // IS sample count in this mode
    cfg.seed = 139;
    const auto est = thermo_interpolation_derivative(2, 2, p, 0.5, cfg);
    CHECK(est.mean >= -3.0 * est.std_error);
  }
  SUBCASE("t = 0 with equal halves: block moments agree in distribution") {
    ModelParams p{0.6, 0.0, 0.0, 2, false};
    McConfig cfg;
    cfg.seed = 149;
    RunningStats first, second;
    for (std::size_t i = 0; i < 200; ++i) {
      const auto jf = sample_disorder(2, cfg.seed, i);
      const auto j1 = make_disorder(
          1, CounterRng::derive_key(cfg.seed,
                                    streams::per_sample(streams::kDisorderB, i)));
      const auto j2 = make_disorder(
          1, CounterRng::derive_key(cfg.seed,
                                    streams::per_sample(streams::kDisorderC, i)));
      const auto spec = thermo_interpolating_measure(jf, j1, j2, p, 0.0);
      const auto mm = measure_quadrature(spec, true);
      first.add(mm.second(0, 0) * mm.second(0, 0));
      second.add(mm.second(1, 1) * mm.second(1, 1));
    }
    const double se = std::sqrt(first.std_error() * first.std_error() +
                                second.std_error() * second.std_error());
    CHECK(std::abs(first.mean() - second.mean()) <= 3.0 * se);
  }
  SUBCASE("subsystem sizes must add up") {
    ModelParams p{0.5, 0.0, 0.0, 4, false};
    McConfig cfg;
    CHECK_THROWS_AS(thermo_interpolation_derivative(1, 2, p, 0.5, cfg),
                    ArgumentError);
  }
}
