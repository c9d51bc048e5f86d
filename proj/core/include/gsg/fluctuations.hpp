#ifndef GSG_FLUCTUATIONS_HPP
#define GSG_FLUCTUATIONS_HPP

#include "gsg/types.hpp"

namespace gsg {

// Correlations of the rescaled overlap xi_ab = sqrt(N)(q_ab - q_bar) at
// interpolation time t: a = <xi_12^2>, b = <xi_12 xi_13>, c = <xi_12 xi_34>.
struct CorrelationTriple {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double t = 0.0;
};

// One-site cavity moments at t = 0: omega(z) = beta sqrt(q) sigma^2 J' and
// omega(z^2) = sigma^2 + beta^2 q sigma^4 J'^2.
struct CavityMoments {
  double omega_z = 0.0;
  double omega_z2 = 0.0;
};
CavityMoments cavity_moments(double beta, double lambda, double q_bar,
                             double j_prime);

// Gaussian-moment closed forms over J' (E J'^2 = 1, E J'^4 = 3).
CorrelationTriple initial_conditions(double beta, double lambda, double q_bar);

struct TripleDerivative {
  double da = 0.0;
  double db = 0.0;
  double dc = 0.0;
};

// The quadratic dynamical system for (A, B, C).
TripleDerivative ode_rhs(const CorrelationTriple& triple, double beta);

// Fixed-step RK4 with step-doubling blow-up guards. In the annealed regime
// (q_bar = 0) the trajectory must match A(t) = 1/(sigma^-4 - beta^2 t) and
// B = C = 0 are preserved exactly; divergence before t_end raises
// DivergenceError carrying the blow-up time.
CorrelationTriple integrate_triple(double beta, double lambda, double q_bar,
                                   double t_end, std::size_t n_steps);

// A(1) = 1/((1-lambda)^2 - beta^2) for beta < 1 - lambda; the critical line
// beta = 1 - lambda is the divergence locus.
double annealed_susceptibility(double beta, double lambda);

// N <(q_12 - q_bar*)^2> by two-replica quenched Monte Carlo; converges to
// the annealed susceptibility for beta < 1 - lambda.
McEstimate mc_xi_second_moment(const ModelParams& p, const McConfig& cfg);

}  // namespace gsg

#endif
