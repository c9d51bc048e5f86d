#ifndef GSG_MEASURE_HPP
#define GSG_MEASURE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gsg/linalg.hpp"
#include "gsg/quadrature.hpp"
#include "gsg/rng.hpp"

namespace gsg {

// One additive term c2*s + c4*s^2 in the exponent, with s the squared
// norm of the coordinate block [begin, end). The regularizers of the
// interpolating partition functions are sums of such terms.
struct QuarticGroup {
  std::size_t begin = 0;
  std::size_t end = 0;
  double c2 = 0.0;
  double c4 = 0.0;
};

// A Boltzmann weight against the product standard Gaussian base measure:
//
//   Z = E_z exp( z.Az + b.z + sum_g [ c2_g s_g + c4_g s_g^2 ] ),
//
// with A symmetric (temperature folded in) and s_g block squared norms.
// Every partition function in this project is an instance of this form.
struct BoltzmannSpec {
  std::size_t n = 0;
  Matrix coupling;             // symmetric n x n
  std::vector<double> linear;  // empty means zero
  std::vector<QuarticGroup> groups;

  double exponent(std::span<const double> z) const;
  bool has_linear() const;
  bool single_full_group() const;
  void validate() const;
};

// Worst-case log magnitude of the integrand on the sphere of radius r,
// without (with_jacobian) the r^{N-1} surface factor.
double radial_envelope(const BoltzmannSpec& spec, double r, bool with_jacobian);

// Radius beyond which the integrand is below e^{tail_log} of its peak.
double envelope_radius(const BoltzmannSpec& spec, double tail_log,
                       bool with_jacobian);

struct MeasureMoments {
  double log_z = 0.0;
  double log_z_std_error = 0.0;  // zero for quadrature
  bool has_moments = false;
  std::vector<double> first;  // omega(z_i)
  Matrix second;              // omega(z_i z_j)
  std::size_t evaluations = 0;
  // unbiased access to Z itself (MC backends): Z_hat = z_shifted_mean * e^shift
  double z_shifted_mean = 0.0;
  double z_shifted_var = 0.0;  // between-sample variance of the shifted values
  double shift = 0.0;
};

struct QuadratureSettings {
  double rel_tol = 1e-11;
  std::size_t order = 15;
  std::size_t initial_panels = 2;
  std::size_t max_doublings = 7;
  double tail_log = -32.236191301916641;  // log(1e-14)
  std::size_t max_n = 3;
};

// Deterministic evaluation for n <= max_n. With a zero linear term and a
// single full-range quartic group the quadratic form is diagonalized first
// and the integral runs in eigen-coordinates over one orthant (the
// integrand is even in each eigen-coordinate); otherwise a plain
// tensor-grid pass over the truncated box is used.
MeasureMoments measure_quadrature(const BoltzmannSpec& spec, bool want_moments,
                                  const QuadratureSettings& settings = {});

// Exact per-sample replica-overlap moments Omega(q_12^k), k = 1..max_power,
// from monomial moments of a single replica (the replicated measure is a
// product, so Omega(q_12^k) reduces to squared monomial moments).
std::vector<double> overlap_moments_quadrature(
    const BoltzmannSpec& spec, std::size_t max_power,
    const QuadratureSettings& settings = {});

struct RadialMcSettings {
  std::size_t n_directions = 2048;
  std::size_t radial_points = 512;
  double tail_log = -32.236191301916641;
};

// Stratified radial-spherical estimator: deterministic Gauss-Legendre grid
// in the radius against the chi_N weight, Monte Carlo over directions
// shared across all radii. Requires a single full-range quartic group.
MeasureMoments measure_radial_mc(const BoltzmannSpec& spec,
                                 const CounterRng& directions,
                                 const RadialMcSettings& settings,
                                 bool want_moments);

// Per-direction radial sums S_m^(k) = sum_g w_g W(r_g, u_m) r_g^k plus the
// directions themselves; two of these (independent streams) combine into
// two-replica overlap moments.
struct RadialReplicaData {
  std::size_t n = 0;
  std::size_t n_directions = 0;
  std::size_t max_power = 0;
  std::vector<double> directions;   // n_directions x n
  std::vector<double> radial_sums;  // n_directions x (max_power + 1)
};

RadialReplicaData radial_replica_data(const BoltzmannSpec& spec,
                                      const CounterRng& directions,
                                      const RadialMcSettings& settings,
                                      std::size_t max_power);

// Omega(q_12^k) for k = 1..max_power from two independent replicas.
std::vector<double> overlap_moments_radial(const RadialReplicaData& a,
                                           const RadialReplicaData& b);

struct ImportanceSettings {
  std::size_t n_samples = 100000;
};

// Plain importance sampling from the Gaussian base measure. Works for any
// BoltzmannSpec (multi-group interpolations included); only viable at
// small N and moderate couplings, which is where it is used.
MeasureMoments measure_importance(const BoltzmannSpec& spec,
                                  const CounterRng& stream,
                                  const ImportanceSettings& settings,
                                  bool want_moments);

}  // namespace gsg

#endif
