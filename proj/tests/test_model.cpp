#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gsg/errors.hpp"
#include "gsg/measure.hpp"
#include "gsg/model.hpp"
#include "gsg/montecarlo.hpp"
#include "gsg/rng.hpp"

using namespace gsg;

namespace {

DisorderSample fixed_disorder(std::size_t n, std::initializer_list<double> rows) {
  DisorderSample s;
  s.n = n;
  s.seed = 0;
  s.couplings = Matrix(n);
  auto it = rows.begin();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s.couplings(i, j) = *it++;
  return s;
}

// brute-force oracle for N = 1: trapezoid on [-12, 12] with 10^6 points
double log_z1_trapezoid(double j11, const ModelParams& p) {
  const std::size_t n_pts = 1000001;
  const double a = -12.0, b = 12.0;
  const double h = (b - a) / static_cast<double>(n_pts - 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < n_pts; ++i) {
    const double z = a + h * static_cast<double>(i);
    const double coupling = p.diagonal_removed ? 0.0 : j11 / std::numbers::sqrt2;
    const double expo = p.beta * coupling * z * z -
                        0.25 * p.beta * p.beta * z * z * z * z +
                        0.5 * p.lambda * z * z + p.beta * p.h * z - 0.5 * z * z;
    const double w = (i == 0 || i == n_pts - 1) ? 0.5 : 1.0;
    acc += w * std::exp(expo);
  }
  return std::log(acc * h / std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

TEST_CASE("hamiltonian matches direct evaluation of the double sum") {
  SUBCASE("zero configuration gives zero energy") {
    const auto j = make_disorder(3, 1);
    ModelParams p{1.0, 0.0, 0.0, 3, false};
    CHECK(hamiltonian({{0.0, 0.0, 0.0}}, j, p) == 0.0);
  }
  SUBCASE("N=1 with unit coupling") {
    const auto j = fixed_disorder(1, {1.0});
    ModelParams p{1.0, 0.0, 0.0, 1, false};
    CHECK(hamiltonian({{1.0}}, j, p) ==
          doctest::Approx(-1.0 / std::numbers::sqrt2).epsilon(1e-15));
  }
  SUBCASE("N=2 all-ones couplings with a field") {
    const auto j = fixed_disorder(2, {1.0, 1.0, 1.0, 1.0});
    ModelParams p{1.0, 0.0, 0.5, 2, false};
    CHECK(hamiltonian({{1.0, 1.0}}, j, p) == doctest::Approx(-3.0).epsilon(1e-15));
  }
  SUBCASE("diagonal-removed variant symmetrizes the couplings") {
    const auto j = fixed_disorder(2, {5.0, 1.0, 3.0, -7.0});
    ModelParams p{1.0, 0.0, 0.0, 2, true};
    // -(1/sqrt(2)) * (1+3)/sqrt(2) * z1 z2, diagonals 5 and -7 ignored
    const double expect = -(4.0 / std::numbers::sqrt2) / std::sqrt(2.0) * 2.0 * 3.0;
    CHECK(hamiltonian({{2.0, 3.0}}, j, p) == doctest::Approx(expect).epsilon(1e-14));
  }
  SUBCASE("dimension mismatch is rejected") {
    const auto j = make_disorder(3, 1);
    ModelParams p{1.0, 0.0, 0.0, 3, false};
    CHECK_THROWS_AS(hamiltonian({{1.0, 2.0}}, j, p), ArgumentError);
  }
}

TEST_CASE("regularized exponent") {
  SUBCASE("zero configuration") {
    const auto j = make_disorder(2, 4);
    ModelParams p{1.3, 0.7, 0.2, 2, false};
    CHECK(regularized_exponent({{0.0, 0.0}}, j, p) == 0.0);
  }
  SUBCASE("pure quartic term at J = 0") {
    const auto j = fixed_disorder(1, {0.0});
    ModelParams p{1.0, 0.0, 0.0, 1, false};
    CHECK(regularized_exponent({{2.0}}, j, p) == doctest::Approx(-4.0).epsilon(1e-15));
  }
  SUBCASE("coupling, quartic and lambda terms together") {
    const auto j = fixed_disorder(1, {1.0});
    ModelParams p{1.0, 0.5, 0.0, 1, false};
    CHECK(regularized_exponent({{1.0}}, j, p) ==
          doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-14));
  }
  SUBCASE("agrees with the Boltzmann measure exponent everywhere") {
    CounterRng rng(31, 9);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 1 + (rng.next_u64() % 3);
      const auto j = make_disorder(n, rng.next_u64());
      ModelParams p{0.2 + rng.next_double(), rng.next_double() - 0.5,
                    trial % 2 ? 0.3 : 0.0, n, trial % 3 == 0};
      const auto spec = model_measure(j, p);
      SpinConfig z;
      for (std::size_t i = 0; i < n; ++i) z.z.push_back(2.0 * rng.next_normal());
      CHECK(regularized_exponent(z, j, p) ==
            doctest::Approx(spec.exponent(z.z)).epsilon(1e-12));
    }
  }
}

TEST_CASE("overlap") {
  CHECK(overlap({{1.0, 1.0}}, {{1.0, 1.0}}) == 1.0);
  CHECK(overlap({{1.0, -1.0}}, {{1.0, 1.0}}) == 0.0);
  CHECK(overlap({{2.0, 0.0}}, {{3.0, 5.0}}) == 3.0);
  CHECK_THROWS_AS(overlap({{1.0}}, {{1.0, 2.0}}), ArgumentError);
}

TEST_CASE("log partition by quadrature") {
  SUBCASE("free field: Z = 1") {
    const auto j = make_disorder(2, 7);
    ModelParams p{1e-8, 0.0, 0.0, 2, false};
    CHECK(std::abs(log_partition_quadrature(j, p).log_z) < 1e-6);
  }
  SUBCASE("beta = 0 Gaussian integral gives (1-lambda)^{-N/2}") {
    const auto j = make_disorder(2, 7);
    ModelParams p{0.0, 0.5, 0.0, 2, false};
    const auto r = log_partition_quadrature(j, p);
    CHECK(r.log_z == doctest::Approx(std::log(2.0)).epsilon(1e-11));
    CHECK(r.std_error == 0.0);
    CHECK(r.method == LogPartitionMethod::quadrature);
  }
  SUBCASE("N=1 against the trapezoid oracle") {
    const auto j = fixed_disorder(1, {1.0});
    ModelParams p{1.0, 0.0, 0.0, 1, false};
    const double oracle = log_z1_trapezoid(1.0, p);
    CHECK(log_partition_quadrature(j, p).log_z ==
          doctest::Approx(oracle).epsilon(1e-9));
  }
  SUBCASE("N=2 with a field against a dense tensor oracle") {
    const auto j = fixed_disorder(2, {0.3, -0.8, 0.5, 1.1});
    ModelParams p{0.9, 0.2, 0.4, 2, false};
    // direct 2D trapezoid over [-10, 10]^2
    const std::size_t n_pts = 1601;
    const double a = -10.0, h = 20.0 / static_cast<double>(n_pts - 1);
    const auto spec = model_measure(j, p);
    double acc = 0.0;
    for (std::size_t i = 0; i < n_pts; ++i)
      for (std::size_t k = 0; k < n_pts; ++k) {
        const double z[2] = {a + h * static_cast<double>(i),
                             a + h * static_cast<double>(k)};
        const double wi = (i == 0 || i == n_pts - 1) ? 0.5 : 1.0;
        const double wk = (k == 0 || k == n_pts - 1) ? 0.5 : 1.0;
        acc += wi * wk *
               std::exp(spec.exponent(std::span(z, 2)) -
                        0.5 * (z[0] * z[0] + z[1] * z[1]));
      }
    const double oracle =
        std::log(acc * h * h / (2.0 * std::numbers::pi));
    CHECK(log_partition_quadrature(j, p).log_z ==
          doctest::Approx(oracle).epsilon(1e-7));
  }
  SUBCASE("N above the quadrature limit is rejected") {
    const auto j = make_disorder(4, 7);
    ModelParams p{1.0, 0.0, 0.0, 4, false};
    CHECK_THROWS_AS(log_partition_quadrature(j, p), ArgumentError);
  }
}

TEST_CASE("quadrature invariances") {
  SUBCASE("rotation invariance at h = 0") {
    for (std::size_t n : {2u, 3u}) {
      const auto j = make_disorder(n, 11 + n);
      ModelParams p{1.1, 0.2, 0.0, n, false};
      const double base = log_partition_quadrature(j, p).log_z;
      // a Givens rotation of the couplings: J -> R J R^T
      CounterRng rng(3, n);
      Matrix r(n);
      for (std::size_t i = 0; i < n; ++i) r(i, i) = 1.0;
      const double th = rng.next_double() * std::numbers::pi;
      r(0, 0) = std::cos(th);
      r(0, 1) = -std::sin(th);
      r(1, 0) = std::sin(th);
      r(1, 1) = std::cos(th);
      DisorderSample rotated;
      rotated.n = n;
      rotated.seed = 0;
      rotated.couplings = sandwich(r, j.couplings);
      CHECK(log_partition_quadrature(rotated, p).log_z ==
            doctest::Approx(base).epsilon(1e-9));
    }
  }
  SUBCASE("antisymmetric parts of the couplings are invisible") {
    const auto j = make_disorder(3, 17);
    ModelParams p{0.8, -0.3, 0.0, 3, false};
    const double base = log_partition_quadrature(j, p).log_z;
    DisorderSample mod;
    mod.n = 3;
    mod.seed = 0;
    mod.couplings = j.couplings.symmetrized();
    // add an antisymmetric perturbation
    mod.couplings(0, 1) += 0.7;
    mod.couplings(1, 0) -= 0.7;
    mod.couplings(1, 2) += -0.4;
    mod.couplings(2, 1) -= -0.4;
    CHECK(log_partition_quadrature(mod, p).log_z ==
          doctest::Approx(base).epsilon(1e-11));
  }
  SUBCASE("log Z increases strictly with lambda") {
    const auto j = make_disorder(2, 23);
    double prev = -1e300;
    for (double lambda : {-0.5, 0.0, 0.4}) {
      ModelParams p{0.7, lambda, 0.0, 2, false};
      const double v = log_partition_quadrature(j, p).log_z;
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("log partition by radial-spherical Monte Carlo") {
  McConfig cfg;
  cfg.n_directions = 1024;
  cfg.radial_points = 384;
  cfg.seed = 5;

  SUBCASE("beta = 0: integrand constant in the direction, zero error") {
    const auto j = make_disorder(3, 2);
    ModelParams p{0.0, 0.0, 0.0, 3, false};
    const auto r = log_partition_mc(j, p, cfg);
    CHECK(std::abs(r.log_z) < 1e-10);
    CHECK(r.std_error < 1e-12);
    CHECK(r.method == LogPartitionMethod::monte_carlo);
  }
  SUBCASE("N=2 agrees with quadrature within 3 SE") {
    const auto j = make_disorder(2, 31);
    ModelParams p{0.3, 0.0, 0.0, 2, false};
    const auto mc = log_partition_mc(j, p, cfg);
    const auto quad = log_partition_quadrature(j, p);
    CHECK(std::abs(mc.log_z - quad.log_z) <= 3.0 * mc.std_error);
  }
  SUBCASE("N=1 agrees with the trapezoid oracle within 3 SE") {
    const auto j = fixed_disorder(1, {1.0});
    ModelParams p{1.0, 0.0, 0.0, 1, false};
    const auto mc = log_partition_mc(j, p, cfg);
    const double oracle = log_z1_trapezoid(1.0, p);
    CHECK(std::abs(mc.log_z - oracle) <= 3.0 * mc.std_error + 1e-9);
  }
  SUBCASE("zero samples are rejected") {
    const auto j = make_disorder(2, 2);
    ModelParams p{0.5, 0.0, 0.0, 2, false};
    McConfig bad = cfg;
    bad.n_directions = 0;
    CHECK_THROWS_AS(log_partition_mc(j, p, bad), ArgumentError);
  }
}

TEST_CASE("MC/quadrature agreement across 100 seeds") {
  // random (beta, lambda, N) with beta <= 1.5, lambda <= 0.5, N <= 3;
  // at most one of 100 seeds may fall outside 3 SE
  CounterRng rng(2718, 1);
  McConfig cfg;
  cfg.n_directions = 768;
  cfg.radial_points = 320;
  int failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + (rng.next_u64() % 3);
    const double beta = 0.1 + 1.4 * rng.next_double();
    const double lambda = -0.5 + rng.next_double();
    const auto j = make_disorder(n, 40000 + trial);
    ModelParams p{beta, lambda, 0.0, n, false};
    cfg.seed = 600 + trial;
    const auto mc = log_partition_mc(j, p, cfg);
    const auto quad = log_partition_quadrature(j, p);
    if (std::abs(mc.log_z - quad.log_z) > 3.0 * mc.std_error + 1e-10) ++failures;
  }
  CHECK(failures <= 1);
}
