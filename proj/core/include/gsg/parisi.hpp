#ifndef GSG_PARISI_HPP
#define GSG_PARISI_HPP

#include <cstdint>
#include <vector>

#include "gsg/types.hpp"

namespace gsg {

// Piecewise-constant functional order parameter: x(q) = m_a on
// [q_{a-1}, q_a) with 0 = q_0 <= q_1 <= ... <= q_K = Q and
// 0 <= m_1 <= ... <= m_K <= 1 (m_0 = 0 and m_{K+1} = 1 implied).
// Q may exceed 1: the spins are Gaussian, overlaps are unbounded.
class PiecewiseOrderParameter {
 public:
  PiecewiseOrderParameter() = default;  // degenerate Q = 0
  PiecewiseOrderParameter(std::vector<double> q, std::vector<double> m);

  std::size_t levels() const { return q_.size(); }
  double big_q() const { return q_.empty() ? 0.0 : q_.back(); }
  const std::vector<double>& q() const { return q_; }
  const std::vector<double>& m() const { return m_; }

  double value_at(double q) const;        // x(q)
  double integral_above(double q) const;  // int_q^Q x(q') dq'
  double q_weighted_integral() const;     // int_0^Q q x(q) dq

 private:
  std::vector<double> q_;  // q_1..q_K (q_K = Q)
  std::vector<double> m_;  // m_1..m_K
};

// K = 2 parameter with q_1 = q_2 = q_bar, m = (0, 1): x vanishes on
// [0, q_bar) and the functional collapses to the RS trial pressure.
PiecewiseOrderParameter rs_order_parameter(double q_bar);

// Full RSB trial functional
//   log sigma(Q) + f(0,0;x) + beta^2 Q^2/4 - beta^2/2 int_0^Q q x(q) dq,
// with all integrals evaluated per level in closed form.
double rsb_pressure_functional(double beta, double lambda,
                               const PiecewiseOrderParameter& x);

// b(q) from 1/b(q) = 1/(beta^2 sigma^2(Q)) - int_q^Q x.
double parisi_b_profile(double beta, double lambda,
                        const PiecewiseOrderParameter& x, double q);

// f(0,0;x) of the Parisi equation under the quadratic ansatz, exact
// per-level antiderivatives.
double parisi_closed_form(double beta, double lambda,
                          const PiecewiseOrderParameter& x);

// Same quantity by backward RK4 integration of a' = -b/2, b' = -x b^2 from
// q = Q with n_steps per level; the independent numerical route.
double parisi_ode_solve(double beta, double lambda,
                        const PiecewiseOrderParameter& x, std::size_t n_steps);

// beta^2/4 sum_a (m_{a+1} - m_a) q_a^2, evaluated both as the discrete sum
// and as beta^2 Q^2/4 - beta^2/2 int q x; both must agree to 1e-12.
double rsb_entropy_term(double beta, const PiecewiseOrderParameter& x);

// max_q | (1 - beta^2 sigma^2(Q) int_q^Q x) - beta sigma^2(Q) |; vanishes
// exactly at the stationary order parameter (x = 0, beta sigma^2(Q) = 1).
double stationarity_residual(double beta, double lambda,
                             const PiecewiseOrderParameter& x);

struct InfimumResult {
  PiecewiseOrderParameter x;
  double value = 0.0;
  std::size_t restarts_used = 0;
};

struct InfimumOptions {
  std::size_t restarts = 16;
  std::uint64_t seed = 7;
  double q_max = 0.0;  // 0: derive from the RS optimum
  std::size_t max_sweeps = 200;
  double tol = 1e-12;
  unsigned threads = 0;  // restarts run concurrently; results don't depend on it
};

// Multi-restart projected coordinate descent over (q_a, m_a) with Q free.
InfimumResult rsb_infimum_search(double beta, double lambda,
                                 std::size_t k_levels,
                                 const InfimumOptions& opts = {});

}  // namespace gsg

#endif
