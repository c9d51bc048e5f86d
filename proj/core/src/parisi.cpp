#include "gsg/parisi.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "gsg/closed_forms.hpp"
#include "gsg/errors.hpp"
#include "gsg/parallel.hpp"
#include "gsg/rng.hpp"

namespace gsg {

PiecewiseOrderParameter::PiecewiseOrderParameter(std::vector<double> q,
                                                 std::vector<double> m)
    : q_(std::move(q)), m_(std::move(m)) {
  if (q_.size() != m_.size())
    throw ArgumentError("order parameter: q and m must have equal length");
  double prev = 0.0;
  for (double v : q_) {
    if (!(v >= prev))
      throw ArgumentError("order parameter: q levels must be nondecreasing from 0");
    prev = v;
  }
  prev = 0.0;
  for (double v : m_) {
    if (!(v >= prev) || v > 1.0)
      throw ArgumentError("order parameter: m levels must be nondecreasing in [0,1]");
    prev = v;
  }
}

double PiecewiseOrderParameter::value_at(double q) const {
  double lo = 0.0;
  for (std::size_t a = 0; a < q_.size(); ++a) {
    if (q >= lo && q < q_[a]) return m_[a];
    lo = q_[a];
  }
  return q_.empty() ? 0.0 : m_.back();
}

double PiecewiseOrderParameter::integral_above(double q) const {
  double acc = 0.0;
  double lo = 0.0;
  for (std::size_t a = 0; a < q_.size(); ++a) {
    const double hi = q_[a];
    const double from = std::max(q, lo);
    if (from < hi) acc += m_[a] * (hi - from);
    lo = hi;
  }
  return acc;
}

double PiecewiseOrderParameter::q_weighted_integral() const {
  double acc = 0.0;
  double lo = 0.0;
  for (std::size_t a = 0; a < q_.size(); ++a) {
    const double hi = q_[a];
    acc += 0.5 * m_[a] * (hi * hi - lo * lo);
    lo = hi;
  }
  return acc;
}

PiecewiseOrderParameter rs_order_parameter(double q_bar) {
  if (q_bar < 0.0) throw ArgumentError("rs_order_parameter: q_bar must be >= 0");
  if (q_bar == 0.0) return PiecewiseOrderParameter{};
  return PiecewiseOrderParameter({q_bar, q_bar}, {0.0, 1.0});
}

namespace {

double sigma2_of_big_q(double beta, double lambda, double big_q) {
  const double arg = 1.0 - lambda + beta * beta * big_q;
  if (!(arg > 0.0))
    throw DomainError("order parameter outside domain: sigma(Q) undefined");
  return 1.0 / arg;
}

// per-level closed form of int_0^Q dq / (1 - beta^2 sigma^2(Q) int_q^Q x)
double denominator_integral(double beta, double lambda,
                            const PiecewiseOrderParameter& x) {
  const double s2 = sigma2_of_big_q(beta, lambda, x.big_q());
  const double b2s2 = beta * beta * s2;
  double acc = 0.0;
  double lo = 0.0;
  for (std::size_t a = 0; a < x.levels(); ++a) {
    const double hi = x.q()[a];
    if (hi <= lo) {
      lo = hi;
      continue;
    }
    // on [lo, hi): int_q^Q x = m_a (hi - q) + tail, affine in q
    const double m = x.m()[a];
    const double d_lo = 1.0 - b2s2 * x.integral_above(lo);
    const double d_hi = 1.0 - b2s2 * x.integral_above(hi);
    const double d_min = std::min(d_lo, d_hi);
    if (d_min <= 1e-12) {
      // report the crossing point of the affine denominator
      double q_cross = hi;
      const double slope = b2s2 * m;
      if (slope > 0.0) q_cross = std::clamp(lo + (0.0 - d_lo) / slope, lo, hi);
      throw SingularFunctionalError(
          "rsb functional: denominator 1 - beta^2 sigma^2 int x reached zero",
          q_cross);
    }
    if (m == 0.0) {
      acc += (hi - lo) / d_lo;
    } else {
      acc += std::log(d_hi / d_lo) / (b2s2 * m);
    }
    lo = hi;
  }
  return acc;
}

}  // namespace

double parisi_closed_form(double beta, double lambda,
                          const PiecewiseOrderParameter& x) {
  const double big_q = x.big_q();
  if (big_q == 0.0) {
    sigma2_of_big_q(beta, lambda, 0.0);  // domain check
    return 0.0;
  }
  const double s2 = sigma2_of_big_q(beta, lambda, big_q);
  return 0.5 * beta * beta * s2 * denominator_integral(beta, lambda, x);
}

double parisi_b_profile(double beta, double lambda,
                        const PiecewiseOrderParameter& x, double q) {
  const double s2 = sigma2_of_big_q(beta, lambda, x.big_q());
  const double inv_b = 1.0 / (beta * beta * s2) - x.integral_above(q);
  if (!(inv_b > 0.0))
    throw SingularFunctionalError("parisi_b_profile: 1/b(q) not positive", q);
  return 1.0 / inv_b;
}

double rsb_pressure_functional(double beta, double lambda,
                               const PiecewiseOrderParameter& x) {
  const double big_q = x.big_q();
  const double s2 = sigma2_of_big_q(beta, lambda, big_q);
  const double entropic = parisi_closed_form(beta, lambda, x);
  return 0.5 * std::log(s2) + entropic + 0.25 * beta * beta * big_q * big_q -
         0.5 * beta * beta * x.q_weighted_integral();
}

double parisi_ode_solve(double beta, double lambda,
                        const PiecewiseOrderParameter& x,
                        std::size_t n_steps) {
  if (n_steps < 1) throw ArgumentError("parisi_ode_solve: need steps");
  const double big_q = x.big_q();
  const double s2 = sigma2_of_big_q(beta, lambda, big_q);
  if (big_q == 0.0) return 0.0;

  double a_val = 0.0;
  double b_val = beta * beta * s2;

  // integrate level by level from q = Q down to 0; x is constant per level
  for (std::size_t lev = x.levels(); lev-- > 0;) {
    const double hi = x.q()[lev];
    const double lo = lev == 0 ? 0.0 : x.q()[lev - 1];
    if (hi <= lo) continue;
    const double m = x.m()[lev];
    const double h = (hi - lo) / static_cast<double>(n_steps);
    for (std::size_t s = 0; s < n_steps; ++s) {
      // RK4 on (a, b)' = (-b/2, -m b^2) backward in q (step -h)
      auto fa = [](double b) { return -0.5 * b; };
      auto fb = [m](double b) { return -m * b * b; };
      const double k1a = fa(b_val), k1b = fb(b_val);
      const double k2a = fa(b_val - 0.5 * h * k1b), k2b = fb(b_val - 0.5 * h * k1b);
      const double k3a = fa(b_val - 0.5 * h * k2b), k3b = fb(b_val - 0.5 * h * k2b);
      const double k4a = fa(b_val - h * k3b), k4b = fb(b_val - h * k3b);
      a_val -= h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
      b_val -= h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
      if (!(std::isfinite(b_val)) || b_val < 0.0 || b_val > 1e14)
        throw SingularFunctionalError("parisi_ode_solve: b(q) blew up",
                                      hi - static_cast<double>(s + 1) * h);
    }
  }
  return a_val;
}

double rsb_entropy_term(double beta, const PiecewiseOrderParameter& x) {
  const double big_q = x.big_q();
  // discrete side, with m_{K+1} = 1
  double sum = 0.0;
  for (std::size_t a = 0; a < x.levels(); ++a) {
    const double m_next = a + 1 < x.levels() ? x.m()[a + 1] : 1.0;
    sum += (m_next - x.m()[a]) * x.q()[a] * x.q()[a];
  }
  sum *= 0.25 * beta * beta;
  const double integral_form = 0.25 * beta * beta * big_q * big_q -
                               0.5 * beta * beta * x.q_weighted_integral();
  if (std::abs(sum - integral_form) > 1e-12 * (1.0 + std::abs(sum)))
    throw NumericError("rsb_entropy_term: discrete and integral forms disagree");
  return sum;
}

double stationarity_residual(double beta, double lambda,
                             const PiecewiseOrderParameter& x) {
  const double s2 = sigma2_of_big_q(beta, lambda, x.big_q());
  const double b2s2 = beta * beta * s2;
  const double target = beta * s2;
  // bar_b(q) = 1 - beta^2 sigma^2 int_q^Q x is affine per level, so the
  // extrema sit at level endpoints
  double residual = std::abs(1.0 - b2s2 * x.integral_above(0.0) - target);
  for (double q : x.q())
    residual = std::max(residual,
                        std::abs(1.0 - b2s2 * x.integral_above(q) - target));
  return residual;
}

namespace {

struct Candidate {
  std::vector<double> q, m;
};

double evaluate(double beta, double lambda, const Candidate& c) {
  try {
    PiecewiseOrderParameter x(c.q, c.m);
    return rsb_pressure_functional(beta, lambda, x);
  } catch (const NumericError&) {
    return std::numeric_limits<double>::infinity();
  } catch (const DomainError&) {
    return std::numeric_limits<double>::infinity();
  }
}

// golden-section minimization of a 1D slice, tolerant of infinities
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  int iters = 60) {
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

}  // namespace

InfimumResult rsb_infimum_search(double beta, double lambda,
                                 std::size_t k_levels,
                                 const InfimumOptions& opts) {
  if (k_levels < 1) throw ArgumentError("rsb_infimum_search: need K >= 1");
  if (!(beta > 0.0)) throw DomainError("rsb_infimum_search: beta must be > 0");

  double q_max = opts.q_max;
  double q_floor = 0.0;
  if (lambda >= 1.0) q_floor = (lambda - 1.0) / (beta * beta) + 1e-9;
  if (q_max <= 0.0) {
    double qbar = 0.0;
    try {
      qbar = rs_optimal_qbar(beta, lambda);
    } catch (const DomainError&) {
    }
    q_max = std::max(2.0, 2.0 * qbar + 1.0);
  }
  if (q_max <= q_floor)
    throw DomainError("rsb_infimum_search: empty feasible Q range");

  // restarts run concurrently on independent generators; the best-value
  // reduction below is serial, so results are deterministic for a given
  // master seed whatever the worker count
  std::vector<double> values(opts.restarts,
                             std::numeric_limits<double>::infinity());
  std::vector<Candidate> candidates(opts.restarts);
  parallel_for(opts.restarts, opts.threads, [&](std::size_t restart) {
    CounterRng rng(opts.seed, 1000 + restart);
    Candidate c;
    c.q.resize(k_levels);
    c.m.resize(k_levels);
    for (auto& v : c.q)
      v = q_floor + (q_max - q_floor) * rng.next_double();
    for (auto& v : c.m) v = rng.next_double();
    std::sort(c.q.begin(), c.q.end());
    std::sort(c.m.begin(), c.m.end());

    double value = evaluate(beta, lambda, c);
    if (!std::isfinite(value)) {
      // shrink toward a safe configuration: x = 0 with small Q
      std::fill(c.m.begin(), c.m.end(), 0.0);
      for (std::size_t a = 0; a < k_levels; ++a)
        c.q[a] = q_floor + (q_max - q_floor) * 0.1 *
                               (static_cast<double>(a + 1) /
                                static_cast<double>(k_levels));
      value = evaluate(beta, lambda, c);
      if (!std::isfinite(value)) return;
    }

    for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      const double before = value;
      for (std::size_t a = 0; a < k_levels; ++a) {
        const double lo = a == 0 ? 0.0 : c.q[a - 1];
        const double hi = a + 1 < k_levels ? c.q[a + 1] : q_max;
        if (hi - lo > 1e-14) {
          const double q_best = golden_min(
              [&](double v) {
                Candidate t = c;
                t.q[a] = v;
                return evaluate(beta, lambda, t);
              },
              std::max(lo, q_floor), hi);
          Candidate t = c;
          t.q[a] = q_best;
          const double fv = evaluate(beta, lambda, t);
          if (fv < value) {
            c = t;
            value = fv;
          }
        }
      }
      for (std::size_t a = 0; a < k_levels; ++a) {
        const double lo = a == 0 ? 0.0 : c.m[a - 1];
        const double hi = a + 1 < k_levels ? c.m[a + 1] : 1.0;
        if (hi - lo > 1e-14) {
          const double m_best = golden_min(
              [&](double v) {
                Candidate t = c;
                t.m[a] = v;
                return evaluate(beta, lambda, t);
              },
              lo, hi);
          Candidate t = c;
          t.m[a] = m_best;
          const double fv = evaluate(beta, lambda, t);
          if (fv < value) {
            c = t;
            value = fv;
          }
        }
        // the infimum often sits on the m = 0 boundary; probe it explicitly
        Candidate t = c;
        for (std::size_t b = 0; b <= a; ++b) t.m[b] = 0.0;
        const double fv = evaluate(beta, lambda, t);
        if (fv < value) {
          c = t;
          value = fv;
        }
      }
      if (before - value < opts.tol) break;
    }
    values[restart] = value;
    candidates[restart] = std::move(c);
  });

  double best_value = std::numeric_limits<double>::infinity();
  std::size_t best_at = opts.restarts;
  std::size_t feasible_restarts = 0;
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    if (!std::isfinite(values[r])) continue;
    ++feasible_restarts;
    if (values[r] < best_value) {
      best_value = values[r];
      best_at = r;
    }
  }
  if (feasible_restarts == 0)
    throw DomainError("rsb_infimum_search: no feasible starting point found");

  InfimumResult result;
  result.x = PiecewiseOrderParameter(candidates[best_at].q, candidates[best_at].m);
  result.value = best_value;
  result.restarts_used = feasible_restarts;

  // the variational principle guarantees the functional never dips below
  // the RS value; a violation would be an implementation bug
  try {
    const double rs = rs_pressure(beta, lambda).pressure;
    if (result.value < rs - 1e-9)
      throw NumericError("rsb_infimum_search: value below the RS pressure");
  } catch (const DomainError&) {
    // lambda >= 1 with beta <= 1-lambda: no RS reference available
  }
  return result;
}

}  // namespace gsg
