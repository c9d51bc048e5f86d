#include "gsg/closed_forms.hpp"

#include <cmath>
#include <numbers>

#include "gsg/errors.hpp"
#include "gsg/quadrature.hpp"

namespace gsg {

double annealed_pressure(double /*beta*/, double lambda) {
  if (lambda >= 1.0)
    throw DomainError("annealed pressure undefined for lambda >= 1");
  return -0.5 * std::log1p(-lambda);
}

double annealed_mean_partition_finite_n(const ModelParams& p) {
  p.validate();
  if (p.lambda >= 1.0)
    throw DomainError("mean partition function undefined for lambda >= 1");
  if (p.diagonal_removed)
    throw ArgumentError(
        "annealed_mean_partition_finite_n: diagonal-kept model only");
  if (p.h != 0.0)
    throw ArgumentError("annealed_mean_partition_finite_n: h = 0 only");
  return std::pow(1.0 - p.lambda, -0.5 * static_cast<double>(p.n_sites));
}

double annealed_mean_partition_prime_finite_n(const ModelParams& p) {
  p.validate();
  if (p.lambda >= 1.0)
    throw DomainError("mean partition function undefined for lambda >= 1");
  if (p.h != 0.0)
    throw ArgumentError("annealed_mean_partition_prime_finite_n: h = 0 only");
  const double n = static_cast<double>(p.n_sites);
  const double a =
      p.beta * p.beta / (4.0 * n * (1.0 - p.lambda) * (1.0 - p.lambda));
  // even integrand; tails are below 1e-30 by |z| = 12
  const double integral =
      2.0 * integrate_1d(
                [a](double z) {
                  return std::exp(-0.5 * z * z - a * z * z * z * z) /
                         std::sqrt(2.0 * std::numbers::pi);
                },
                0.0, 12.0, 1e-13);
  return std::pow(1.0 - p.lambda, -0.5 * n) * std::pow(integral, n);
}

bool is_annealed_region(double beta, double lambda) {
  return beta <= 1.0 - lambda;
}

double second_moment_bound(double beta_lambda) {
  if (beta_lambda < 0.0 || beta_lambda >= 1.0)
    throw DomainError("second_moment_bound: requires 0 <= beta_lambda < 1");
  return 1.0 / std::sqrt(1.0 - beta_lambda * beta_lambda);
}

double sigma(double beta, double lambda, double q_bar) {
  const double arg = 1.0 - lambda + beta * beta * q_bar;
  if (!(arg > 0.0))
    throw DomainError(
        "sigma: outside domain D, requires 1 - lambda + beta^2 q_bar > 0");
  return 1.0 / std::sqrt(arg);
}

double rs_trial_pressure(double beta, double lambda, double q_bar) {
  if (q_bar < 0.0) throw DomainError("rs_trial_pressure: q_bar must be >= 0");
  const double s = sigma(beta, lambda, q_bar);
  return std::log(s) + 0.5 * beta * beta * q_bar * s * s +
         0.25 * beta * beta * q_bar * q_bar;
}

double rs_trial_gradient(double beta, double lambda, double q_bar) {
  const double s = sigma(beta, lambda, q_bar);
  const double s2 = s * s;
  return 0.5 * beta * beta * q_bar * (1.0 - beta * beta * s2 * s2);
}

double rs_optimal_qbar(double beta, double lambda) {
  if (!(beta >= 0.0)) throw DomainError("rs_optimal_qbar: beta must be >= 0");
  if (is_annealed_region(beta, lambda)) return 0.0;
  if (beta == 0.0)
    throw DomainError("rs_optimal_qbar: optimum diverges as beta -> 0 for lambda > 1");
  return (beta - (1.0 - lambda)) / (beta * beta);
}

RsSolution rs_pressure(double beta, double lambda) {
  if (!(beta > 0.0)) throw DomainError("rs_pressure: beta must be > 0");
  RsSolution sol;
  if (is_annealed_region(beta, lambda)) {
    if (lambda >= 1.0)
      throw DomainError(
          "rs_pressure: no annealed branch for lambda >= 1 (needs beta > 1-lambda)");
    sol.q_bar = 0.0;
    sol.regime = Regime::annealed;
    sol.sigma = sigma(beta, lambda, 0.0);
    sol.pressure = rs_trial_pressure(beta, lambda, 0.0);
    return sol;
  }
  sol.q_bar = rs_optimal_qbar(beta, lambda);
  sol.regime = Regime::condensed;
  sol.sigma = sigma(beta, lambda, sol.q_bar);
  sol.pressure = rs_trial_pressure(beta, lambda, sol.q_bar);
  // condensed optimum has beta sigma^2 = 1, collapsing the trial pressure to
  // -1/2 log(beta) + beta q/2 + beta^2 q^2/4; evaluate both as a cross-check
  const double alt = -0.5 * std::log(beta) + 0.5 * beta * sol.q_bar +
                     0.25 * beta * beta * sol.q_bar * sol.q_bar;
  if (std::abs(alt - sol.pressure) > 1e-12 * (1.0 + std::abs(alt)))
    throw NumericError("rs_pressure: branch formulas disagree beyond 1e-12");
  return sol;
}

double spherical_pressure(double beta, double r) {
  if (!(beta > 0.0) || !(r > 0.0))
    throw DomainError("spherical_pressure: beta and R must be > 0");
  const double br2 = beta * r * r;
  if (br2 < 1.0) return 0.25 * br2 * br2;
  return br2 - std::log(r) - 0.5 * std::log(beta) - 0.75;
}

SphericalSolution spherical_variational(double beta) {
  if (!(beta > 0.0)) throw DomainError("spherical_variational: beta must be > 0");
  SphericalSolution sol;
  sol.q = beta < 1.0 ? 0.0 : 1.0 - 1.0 / beta;
  const double q = sol.q;
  sol.value = 0.5 * (q / (1.0 - q) + std::log1p(-q) +
                     0.5 * beta * beta * (1.0 - q * q));
  const double direct = spherical_pressure(beta, 1.0);
  if (std::abs(sol.value - direct) > 1e-12 * (1.0 + std::abs(direct)))
    throw NumericError(
        "spherical_variational: disagrees with spherical_pressure(beta, 1)");
  return sol;
}

double shell_objective(double beta, double lambda, double r_squared) {
  if (!(beta > 0.0) || !(r_squared > 0.0))
    throw DomainError("shell_objective: beta and R^2 must be > 0");
  const double br2 = beta * r_squared;
  if (br2 < 1.0)
    return 0.5 * (lambda - 1.0) * r_squared + 0.5 * std::log(r_squared) + 0.5;
  return br2 - 0.25 * br2 * br2 + 0.5 * (lambda - 1.0) * r_squared -
         0.5 * std::log(beta) - 0.25;
}

ShellSolution shell_lower_bound(double beta, double lambda) {
  if (!(beta > 0.0)) throw DomainError("shell_lower_bound: beta must be > 0");
  ShellSolution sol;
  if (beta <= 1.0 - lambda) {
    if (lambda >= 1.0)
      throw DomainError("shell_lower_bound: no stationary point exists");
    sol.r_squared = 1.0 / (1.0 - lambda);
  } else {
    sol.r_squared = (2.0 * beta + lambda - 1.0) / (beta * beta);
  }
  sol.value = shell_objective(beta, lambda, sol.r_squared);
  return sol;
}

}  // namespace gsg
