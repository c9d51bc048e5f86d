#ifndef GSG_CLOSED_FORMS_HPP
#define GSG_CLOSED_FORMS_HPP

#include "gsg/types.hpp"

namespace gsg {

enum class Regime { annealed, condensed };

// Replica-symmetric optimum: overlap q_bar, sigma, pressure, regime.
struct RsSolution {
  double q_bar = 0.0;
  double sigma = 1.0;
  double pressure = 0.0;
  Regime regime = Regime::annealed;
};

struct ShellSolution {
  double r_squared = 0.0;
  double value = 0.0;
};

// -1/2 log(1 - lambda); independent of beta. Requires lambda < 1.
double annealed_pressure(double beta, double lambda);

// E_J Z_N = (1 - lambda)^{-N/2}, exact at every finite N
// (diagonal-kept model, h = 0, lambda < 1).
double annealed_mean_partition_finite_n(const ModelParams& p);

// E_J Z'_N for the diagonal-removed model; the residual one-site integral
// is evaluated to 1e-12 relative accuracy.
double annealed_mean_partition_prime_finite_n(const ModelParams& p);

// beta <= 1 - lambda (the boundary ties toward q_bar = 0).
bool is_annealed_region(double beta, double lambda);

// limsup bound on E(Z'^2)/E^2(Z'): 1/sqrt(1 - beta_lambda^2).
double second_moment_bound(double beta_lambda);

// sigma = (1 - lambda + beta^2 q_bar)^{-1/2} on the domain D where the
// argument is positive.
double sigma(double beta, double lambda, double q_bar);

// trial pressure  log(sigma) + 1/2 beta^2 q_bar sigma^2 + beta^2/4 q_bar^2
double rs_trial_pressure(double beta, double lambda, double q_bar);

// d/dq_bar of the trial pressure: beta^2/2 q_bar (1 - beta^2 sigma^4)
double rs_trial_gradient(double beta, double lambda, double q_bar);

// 0 in the annealed region, else (beta - (1 - lambda))/beta^2 (also the
// optimizer for lambda > 1, where the condensed branch is always taken).
double rs_optimal_qbar(double beta, double lambda);

// inf over q_bar of the trial pressure; in the condensed regime the
// equivalent form -1/2 log(beta) + beta q/2 + beta^2 q^2/4 is evaluated
// as well and both must agree to 1e-12.
RsSolution rs_pressure(double beta, double lambda);

// spherical-model pressure A^sf(beta, R) = A^sf(beta R^2, 1), piecewise in
// beta R^2 and continuous across beta R^2 = 1.
double spherical_pressure(double beta, double r);

struct SphericalSolution {
  double q = 0.0;
  double value = 0.0;
};

// min over q in [0,1] of 1/2 ( q/(1-q) + log(1-q) + beta^2/2 (1-q^2) );
// must reproduce spherical_pressure(beta, 1) to 1e-12.
SphericalSolution spherical_variational(double beta);

// shell objective f(beta, R) whose supremum over R gives the lower bound.
double shell_objective(double beta, double lambda, double r_squared);

// closed-form stationary point of the shell objective and its value;
// equals the RS pressure (checked by the acceptance suite, not assumed).
ShellSolution shell_lower_bound(double beta, double lambda);

}  // namespace gsg

#endif
