#include "gsg/fluctuations.hpp"

#include <cmath>

#include "gsg/closed_forms.hpp"
#include "gsg/errors.hpp"
#include "gsg/montecarlo.hpp"

namespace gsg {

CavityMoments cavity_moments(double beta, double lambda, double q_bar,
                             double j_prime) {
  const double s = sigma(beta, lambda, q_bar);
  const double s2 = s * s;
  CavityMoments m;
  m.omega_z = beta * std::sqrt(q_bar) * s2 * j_prime;
  m.omega_z2 = s2 + beta * beta * q_bar * s2 * s2 * j_prime * j_prime;
  return m;
}

CorrelationTriple initial_conditions(double beta, double lambda, double q_bar) {
  const double s = sigma(beta, lambda, q_bar);
  const double s2 = s * s;
  const double s4 = s2 * s2;
  const double s6 = s4 * s2;
  const double s8 = s4 * s4;
  const double b2q = beta * beta * q_bar;
  CorrelationTriple out;
  out.t = 0.0;
  out.a = s4 + 2.0 * b2q * s6 + 3.0 * b2q * b2q * s8 - q_bar * q_bar;
  out.b = b2q * s6 + 3.0 * b2q * b2q * s8 - q_bar * q_bar;
  out.c = 3.0 * b2q * b2q * s8 - q_bar * q_bar;
  return out;
}

TripleDerivative ode_rhs(const CorrelationTriple& x, double beta) {
  const double b2 = beta * beta;
  TripleDerivative d;
  d.da = b2 * (x.a * x.a - 4.0 * x.b * x.b + 3.0 * x.c * x.c);
  d.db = b2 * (2.0 * x.a * x.b - 6.0 * x.b * x.c + 6.0 * x.c * x.c -
               2.0 * x.b * x.b);
  d.dc = b2 * (0.5 * x.a * x.c + 4.0 * x.b * x.b - 16.0 * x.b * x.c +
               10.0 * x.c * x.c);
  return d;
}

namespace {

CorrelationTriple rk4_step(const CorrelationTriple& x, double beta, double h) {
  const auto k1 = ode_rhs(x, beta);
  CorrelationTriple x2{x.a + 0.5 * h * k1.da, x.b + 0.5 * h * k1.db,
                       x.c + 0.5 * h * k1.dc, x.t};
  const auto k2 = ode_rhs(x2, beta);
  CorrelationTriple x3{x.a + 0.5 * h * k2.da, x.b + 0.5 * h * k2.db,
                       x.c + 0.5 * h * k2.dc, x.t};
  const auto k3 = ode_rhs(x3, beta);
  CorrelationTriple x4{x.a + h * k3.da, x.b + h * k3.db, x.c + h * k3.dc, x.t};
  const auto k4 = ode_rhs(x4, beta);
  return {x.a + h / 6.0 * (k1.da + 2.0 * k2.da + 2.0 * k3.da + k4.da),
          x.b + h / 6.0 * (k1.db + 2.0 * k2.db + 2.0 * k3.db + k4.db),
          x.c + h / 6.0 * (k1.dc + 2.0 * k2.dc + 2.0 * k3.dc + k4.dc),
          x.t + h};
}

}  // namespace

CorrelationTriple integrate_triple(double beta, double lambda, double q_bar,
                                   double t_end, std::size_t n_steps) {
  if (t_end < 0.0 || t_end > 1.0)
    throw ArgumentError("integrate_triple: t_end must lie in [0, 1]");
  if (n_steps < 1) throw ArgumentError("integrate_triple: need steps");

  CorrelationTriple x = initial_conditions(beta, lambda, q_bar);
  if (t_end == 0.0) return x;

  if (q_bar == 0.0) {
    // annealed closed form A(t) = 1/(sigma^-4 - beta^2 t) blows up at
    // t* = sigma^-4 / beta^2; refuse the run when it precedes t_end
    const double s = sigma(beta, lambda, 0.0);
    const double inv_a0 = 1.0 / (s * s * s * s);
    if (beta * beta * t_end >= inv_a0)
      throw DivergenceError(
          "integrate_triple: annealed susceptibility diverges before t_end",
          inv_a0 / (beta * beta));
  }

  const double h = t_end / static_cast<double>(n_steps);
  for (std::size_t s = 0; s < n_steps; ++s) {
    const CorrelationTriple full = rk4_step(x, beta, h);
    const CorrelationTriple half =
        rk4_step(rk4_step(x, beta, 0.5 * h), beta, 0.5 * h);
    const double scale = std::abs(half.a) + std::abs(half.b) +
                         std::abs(half.c) + 1.0;
    const bool blow_up = !std::isfinite(full.a) || !std::isfinite(half.a) ||
                         std::abs(half.a) > 1e12 ||
                         std::abs(full.a - half.a) > 1e-3 * scale;
    if (blow_up)
      throw DivergenceError("integrate_triple: trajectory blew up", x.t);
    x = half;
  }
  x.t = t_end;
  return x;
}

double annealed_susceptibility(double beta, double lambda) {
  if (!(beta > 0.0)) throw DomainError("annealed_susceptibility: beta > 0");
  if (beta >= 1.0 - lambda)
    throw DivergenceError(
        "annealed_susceptibility: critical line reached (beta >= 1 - lambda)",
        (1.0 - lambda) * (1.0 - lambda) / (beta * beta));
  const double om = 1.0 - lambda;
  return 1.0 / (om * om - beta * beta);
}

McEstimate mc_xi_second_moment(const ModelParams& p, const McConfig& cfg) {
  return xi_second_moment_mc(p, cfg);
}

}  // namespace gsg
