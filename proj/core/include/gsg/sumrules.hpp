#ifndef GSG_SUMRULES_HPP
#define GSG_SUMRULES_HPP

#include <vector>

#include "gsg/measure.hpp"
#include "gsg/model.hpp"
#include "gsg/types.hpp"

namespace gsg {

// One-body interpolation toward the RS trial system: at time t the
// two-body coupling is scaled by sqrt(t), the cavity fields J'_i by
// sqrt(1-t), and the quadratic multiplier c is pinned to -beta^2 q_bar.
struct RsInterpolationSpec {
  double t = 1.0;
  double q_bar = 0.0;
  double c = 0.0;
  std::vector<double> cavity_fields;  // per-site J'_i (resampled per sample
                                      // by the quenched estimators)
};

RsInterpolationSpec make_rs_interpolation(double beta, double t, double q_bar,
                                          std::vector<double> cavity_fields = {});

// Boltzmann weight of the interpolating partition function for one
// concrete (J, J') draw.
BoltzmannSpec rs_interpolating_measure(const DisorderSample& j,
                                       const ModelParams& p,
                                       const RsInterpolationSpec& spec);

// phi_N(t) = (1/N) E log Z(t, J, J'). At t = 0 the one-site closed form
// log(sigma) + 1/2 beta^2 q_bar sigma^2 is returned with zero error.
McEstimate rs_interpolating_pressure(const ModelParams& p,
                                     const RsInterpolationSpec& spec,
                                     const McConfig& cfg);

// d phi/dt estimated from its analytic form
// beta^2 q_bar^2/4 - beta^2/4 <(q_12 - q_bar)^2>_t.
McEstimate rs_interpolation_derivative(const ModelParams& p,
                                       const RsInterpolationSpec& spec,
                                       const McConfig& cfg);

struct SumRuleReport {
  McEstimate residual;                // A_N - [trial - beta^2/4 integral]
  McEstimate quenched;                // A_N estimate
  double trial = 0.0;                 // RS trial pressure at q_bar
  double integral = 0.0;              // trapezoid of <(q12-q)^2>_t
  double integral_coarse = 0.0;       // every-other-node trapezoid
  double discretization = 0.0;        // |fine - coarse| / 3 Richardson proxy
  std::vector<McEstimate> integrand;  // per-node fluctuation estimates
};

SumRuleReport rs_sum_rule_report(const ModelParams& p, double q_bar,
                                 const McConfig& cfg, std::size_t t_grid);

// Residual of the sum rule A_N = trial - beta^2/4 int_0^1 <(q12-q)^2>_t dt;
// zero within errors at every N.
McEstimate rs_sum_rule_residual(const ModelParams& p, double q_bar,
                                const McConfig& cfg, std::size_t t_grid);

// Three-noise thermodynamic interpolation between the N system and the
// (N1, N2) subsystem pair.
BoltzmannSpec thermo_interpolating_measure(const DisorderSample& j_full,
                                           const DisorderSample& j1,
                                           const DisorderSample& j2,
                                           const ModelParams& p, double t);

// -beta^2/4 ( <q12_N^2> - N1/N <q12_N1^2> - N2/N <q12_N2^2> ) under the
// interpolated measure; nonnegative in expectation by overlap convexity.
McEstimate thermo_interpolation_derivative(std::size_t n1, std::size_t n2,
                                           const ModelParams& p, double t,
                                           const McConfig& cfg);

}  // namespace gsg

#endif
