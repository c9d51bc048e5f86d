#include "gsg/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gsg/closed_forms.hpp"
#include "gsg/fluctuations.hpp"
#include "gsg/montecarlo.hpp"
#include "gsg/parisi.hpp"
#include "gsg/rng.hpp"
#include "gsg/sumrules.hpp"

namespace gsg::acceptance {

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

std::string point_label(double beta, double lambda) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "beta=%.4g lambda=%.4g", beta, lambda);
  return buf;
}

// ---- criterion 1: shell lower bound equals the RS pressure -------------
CheckResult check_theorem_main() {
  Timer timer;
  CheckResult r{"theorem-main-equality", 0.0, 0.0, 1e-10, false, 0.0, ""};
  double worst = 0.0;
  std::string where;
  for (int i = 0; i < 50; ++i) {
    const double beta = 3.0 * (i + 1) / 50.0;
    for (int j = 0; j < 50; ++j) {
      const double lambda = -1.0 + 1.9 * j / 49.0;
      const double rs = rs_pressure(beta, lambda).pressure;
      const double shell = shell_lower_bound(beta, lambda).value;
      const double dev = std::abs(shell - rs);
      if (dev > worst) {
        worst = dev;
        where = point_label(beta, lambda);
      }
    }
  }
  r.got = worst;
  r.pass = worst <= r.tolerance;
  r.detail = "50x50 grid, worst at " + where;
  r.seconds = timer.seconds();
  return r;
}

// ---- criterion 2: annealed coincidence for beta <= 1 - lambda ----------
CheckResult check_annealed_coincidence() {
  Timer timer;
  CheckResult r{"annealed-coincidence", 0.0, 0.0, 1e-12, false, 0.0, ""};
  double worst = 0.0;
  int cells = 0;
  for (int i = 0; i < 50; ++i) {
    const double beta = 3.0 * (i + 1) / 50.0;
    for (int j = 0; j < 50; ++j) {
      const double lambda = -1.0 + 1.9 * j / 49.0;
      if (beta > 1.0 - lambda) continue;
      ++cells;
      worst = std::max(worst, std::abs(rs_pressure(beta, lambda).pressure -
                                       annealed_pressure(beta, lambda)));
    }
  }
  r.got = worst;
  r.pass = worst <= r.tolerance;
  r.detail = std::to_string(cells) + " annealed cells";
  r.seconds = timer.seconds();
  return r;
}

const double kRsbBetas[5] = {0.3, 0.7, 1.2, 2.0, 2.8};
const double kRsbLambdas[2] = {-0.5, 0.4};

// ---- criterion 3: RSB infimum collapses onto the RS value --------------
CheckResult check_rsb_search(unsigned threads) {
  (void)threads;
  Timer timer;
  CheckResult r{"rsb-collapse-search", 0.0, 0.0, 1e-6, false, 0.0, ""};
  double worst = -1e300;
  std::string where;
  for (double beta : kRsbBetas) {
    for (double lambda : kRsbLambdas) {
      const double rs = rs_pressure(beta, lambda).pressure;
      InfimumOptions opts;
      opts.restarts = 16;
      opts.seed = 20240901;
      const auto found = rsb_infimum_search(beta, lambda, 3, opts);
      const double dev = found.value - rs;  // must sit in [-1e-9, 1e-6]
      if (dev > worst) {
        worst = dev;
        where = point_label(beta, lambda);
      }
    }
  }
  r.got = worst;
  r.pass = worst <= r.tolerance;
  r.detail = "K=3, 16 restarts, 10 points, worst at " + where;
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_rsb_identity() {
  Timer timer;
  CheckResult r{"rsb-collapse-identity", 0.0, 0.0, 1e-12, false, 0.0, ""};
  double worst = 0.0;
  for (double beta : kRsbBetas) {
    for (double lambda : kRsbLambdas) {
      const auto rs = rs_pressure(beta, lambda);
      const double functional = rsb_pressure_functional(
          beta, lambda, rs_order_parameter(rs.q_bar));
      worst = std::max(worst, std::abs(functional - rs.pressure));
    }
  }
  r.got = worst;
  r.pass = worst <= r.tolerance;
  r.detail = "functional at the RS order parameter, 10 points";
  r.seconds = timer.seconds();
  return r;
}

// ---- criterion 4: Parisi closed form vs backward ODE -------------------
CheckResult check_parisi_consistency() {
  Timer timer;
  CheckResult r{"parisi-consistency", 0.0, 0.0, 1e-8, false, 0.0, ""};
  CounterRng rng(424242, 1);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double beta = 0.3 + 2.2 * rng.next_double();
    const double lambda = -1.0 + 1.9 * rng.next_double();
    const std::size_t k = 1 + (rng.next_u64() % 5);
    std::vector<double> q(k), m(k);
    for (auto& v : q) v = 1.5 * rng.next_double();
    for (auto& v : m) v = rng.next_double();
    std::sort(q.begin(), q.end());
    std::sort(m.begin(), m.end());
    PiecewiseOrderParameter x(q, m);
    const double closed = parisi_closed_form(beta, lambda, x);
    const double ode = parisi_ode_solve(beta, lambda, x, 10000);
    worst = std::max(worst, std::abs(closed - ode));
  }
  r.got = worst;
  r.pass = worst <= r.tolerance;
  r.detail = "50 random order parameters, K <= 5, 1e4 steps/level";
  r.seconds = timer.seconds();
  return r;
}

// ---- criterion 5: finite-N annealed identity E Z = (1-l)^{-N/2} --------
CheckResult check_finite_n_annealed(unsigned threads) {
  Timer timer;
  CheckResult r{"finite-n-annealed-identity", 0.0, 0.0, 3.0, false, 0.0, ""};
  double worst = 0.0;
  std::string where;
  for (std::size_t n : {1u, 2u, 4u}) {
    for (double lambda : {0.0, 0.5}) {
      ModelParams p{0.5, lambda, 0.0, n, false};
      McConfig cfg;
      cfg.n_disorder = 10000;
      cfg.n_directions = 256;
      cfg.radial_points = 256;
      cfg.seed = 91;
      cfg.threads = threads;
      const auto est = annealed_mean_partition_mc(p, cfg);
      const double exact = annealed_mean_partition_finite_n(p);
      const double dev = std::abs(est.mean - exact) / est.std_error;
      if (dev > worst) {
        worst = dev;
        where = "N=" + std::to_string(n) + " lambda=" + std::to_string(lambda);
      }
    }
  }
  r.got = worst;
  r.pass = worst <= r.tolerance;
  r.detail = "deviation in SE units, worst at " + where;
  r.seconds = timer.seconds();
  return r;
}

// ---- criterion 6: RS and annealed upper bounds on A_N ------------------
CheckResult check_rs_upper_bound(unsigned threads) {
  Timer timer;
  CheckResult r{"rs-and-annealed-upper-bounds", 0.0, 0.0, 3.0, false, 0.0, ""};
  double worst = -1e300;
  std::string where;
  for (std::size_t n : {2u, 3u}) {
    for (double beta : {0.5, 1.5}) {
      ModelParams p{beta, 0.0, 0.0, n, false};
      McConfig cfg;
      cfg.n_disorder = 200;
      cfg.seed = 17;
      cfg.threads = threads;
      const auto est = quenched_pressure(p, cfg);
      const double bound = std::min(rs_pressure(beta, 0.0).pressure,
                                    annealed_pressure(beta, 0.0));
      const double excess = (est.mean - bound) / est.std_error;
      if (excess > worst) {
        worst = excess;
        where = "N=" + std::to_string(n) + " beta=" + std::to_string(beta);
      }
    }
  }
  r.got = worst;
  r.pass = worst <= r.tolerance;
  r.detail = "bound excess in SE units, worst at " + where;
  r.seconds = timer.seconds();
  return r;
}

// ---- criterion 7: superadditivity gap >= -3 SE --------------------------
CheckResult check_superadditivity(unsigned threads) {
  Timer timer;
  CheckResult r{"superadditivity", 0.0, 0.0, 3.0, false, 0.0, ""};
  double worst = -1e300;
  std::string where;
  for (auto [n1, n2] : {std::pair<std::size_t, std::size_t>{1, 2},
                        std::pair<std::size_t, std::size_t>{2, 2}}) {
    for (double beta : {0.5, 0.8}) {
      ModelParams p{beta, 0.0, 0.0, n1 + n2, false};
      McConfig cfg;
      cfg.n_disorder = 200;
      cfg.n_directions = 2048;
      cfg.radial_points = 384;
      cfg.seed = 23;
      cfg.threads = threads;
      const auto gap = superadditivity_check(n1, n2, p, cfg);
      const double deficit = -gap.mean / gap.std_error;
      if (deficit > worst) {
        worst = deficit;
        where = std::to_string(n1) + "+" + std::to_string(n2) +
                " beta=" + std::to_string(beta);
      }
    }
  }
  r.got = worst;
  r.pass = worst <= r.tolerance;
  r.detail = "gap deficit in SE units, worst at " + where;
  r.seconds = timer.seconds();
  return r;
}

// ---- criterion 8: sum rule residual --------------------------------------
CheckResult check_sum_rule(unsigned threads) {
  Timer timer;
  CheckResult r{"rs-sum-rule", 0.0, 0.0, 1.0, false, 0.0, ""};
  double worst = 0.0;
  std::string where;
  struct Case {
    double beta, q_bar;
  };
  for (const Case c : {Case{0.5, 0.0}, Case{1.5, 2.0 / 9.0}}) {
    ModelParams p{c.beta, 0.0, 0.0, 2, false};
    McConfig cfg;
    cfg.n_disorder = 200;
    cfg.seed = 29;
    cfg.threads = threads;
    const auto report = rs_sum_rule_report(p, c.q_bar, cfg, 11);
    const double allowance =
        3.0 * report.residual.std_error +
        0.25 * c.beta * c.beta * report.discretization;
    const double dev = std::abs(report.residual.mean) / allowance;
    if (dev > worst) {
      worst = dev;
      where = "beta=" + std::to_string(c.beta);
    }
  }
  r.got = worst;
  r.pass = worst <= r.tolerance;
  r.detail = "|residual| / (3 SE + trapezoid allowance), worst at " + where;
  r.seconds = timer.seconds();
  return r;
}

// ---- criterion 9: fluctuation susceptibility ----------------------------
CheckResult check_fluctuation_ode() {
  Timer timer;
  CheckResult r{"fluctuation-ode-susceptibility", 0.0, 0.0, 1e-8, false, 0.0, ""};
  CounterRng rng(5150, 2);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double lambda = -1.0 + 1.85 * rng.next_double();
    const double beta = (0.1 + 0.7 * rng.next_double()) * (1.0 - lambda);
    const auto triple = integrate_triple(beta, lambda, 0.0, 1.0, 10000);
    worst = std::max(worst,
                     std::abs(triple.a - annealed_susceptibility(beta, lambda)));
  }
  r.got = worst;
  r.pass = worst <= r.tolerance;
  r.detail = "50 random annealed points, RK4 vs closed form";
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_fluctuation_mc(unsigned threads) {
  Timer timer;
  CheckResult r{"fluctuation-mc-susceptibility", 0.0, 0.0, 1.0, false, 0.0, ""};
  const double target = 4.0 / 3.0;
  double dist_prev = 1e300;
  bool monotone = true;
  double final_dev = 0.0, final_tol = 1.0;
  std::ostringstream detail;
  for (std::size_t n : {8u, 16u, 32u}) {
    ModelParams p{0.5, 0.0, 0.0, n, false};
    McConfig cfg;
    cfg.n_disorder = 256;
    cfg.n_directions = 3072;
    cfg.radial_points = 384;
    cfg.seed = 37;
    cfg.threads = threads;
    const auto est = xi_second_moment_mc(p, cfg);
    const double dist = std::abs(est.mean - target);
    detail << "N=" << n << ": " << est.mean << "+-" << est.std_error << "  ";
    if (dist > dist_prev) monotone = false;
    dist_prev = dist;
    if (n == 32) {
      final_tol = std::max(0.1, 3.0 * est.std_error);
      final_dev = dist;
    }
  }
  r.got = final_dev / final_tol + (monotone ? 0.0 : 10.0);
  r.pass = monotone && final_dev <= final_tol;
  r.detail = detail.str() + (monotone ? "(monotone)" : "(NOT monotone)");
  r.seconds = timer.seconds();
  return r;
}

// ---- criterion 10: second-moment bound ----------------------------------
CheckResult check_second_moment(unsigned threads) {
  Timer timer;
  CheckResult r{"second-moment-bound", 0.0, 0.0, 3.0, false, 0.0, ""};
  const double bound = second_moment_bound(0.6);  // 1.25
  double worst = -1e300;
  std::string where;
  for (std::size_t n : {4u, 8u, 16u}) {
    ModelParams p{0.6, 0.0, 0.0, n, true};
    McConfig cfg;
    cfg.n_disorder = 2000;
    cfg.n_directions = 1024;
    cfg.radial_points = 320;
    cfg.seed = 41;
    cfg.threads = threads;
    const auto est = second_moment_ratio_mc(p, cfg);
    const double excess = (est.mean - bound) / est.std_error;
    if (excess > worst) {
      worst = excess;
      where = "N=" + std::to_string(n);
    }
  }
  r.got = worst;
  r.pass = worst <= r.tolerance;
  r.detail = "ratio excess over 1.25 in SE units, worst at " + where;
  r.seconds = timer.seconds();
  return r;
}

// ---- criterion 11: gradient and stationarity ----------------------------
CheckResult check_gradient() {
  Timer timer;
  CheckResult r{"rs-gradient-finite-difference", 0.0, 0.0, 1e-7, false, 0.0, ""};
  CounterRng rng(777, 3);
  double worst = 0.0;
  const double step = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const double beta = 0.1 + 2.4 * rng.next_double();
    const double lambda = -1.0 + 1.9 * rng.next_double();
    const double q = 2.0 * step + 2.0 * rng.next_double();
    const double fd = (rs_trial_pressure(beta, lambda, q + step) -
                       rs_trial_pressure(beta, lambda, q - step)) /
                      (2.0 * step);
    worst = std::max(worst, std::abs(fd - rs_trial_gradient(beta, lambda, q)));
  }
  r.got = worst;
  r.pass = worst <= r.tolerance;
  r.detail = "100 random domain points, step 1e-6";
  r.seconds = timer.seconds();
  return r;
}

CheckResult check_stationarity() {
  Timer timer;
  CheckResult r{"rsb-stationarity-residual", 0.0, 0.0, 1e-12, false, 0.0, ""};
  CounterRng rng(888, 4);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double lambda = -1.0 + 1.9 * rng.next_double();
    const double beta = (1.0 - lambda) * (1.2 + 2.0 * rng.next_double());
    const double q = rs_optimal_qbar(beta, lambda);
    worst = std::max(worst, stationarity_residual(beta, lambda,
                                                  rs_order_parameter(q)));
  }
  r.got = worst;
  r.pass = worst <= r.tolerance;
  r.detail = "20 condensed-regime RS optima";
  r.seconds = timer.seconds();
  return r;
}

}  // namespace

std::vector<CheckResult> run_checks(Level level, unsigned threads) {
  std::vector<CheckResult> out;
  out.push_back(check_theorem_main());
  out.push_back(check_annealed_coincidence());
  out.push_back(check_rsb_search(threads));
  out.push_back(check_rsb_identity());
  out.push_back(check_parisi_consistency());
  out.push_back(check_fluctuation_ode());
  out.push_back(check_gradient());
  out.push_back(check_stationarity());
  if (level == Level::full) {
    out.push_back(check_finite_n_annealed(threads));
    out.push_back(check_rs_upper_bound(threads));
    out.push_back(check_superadditivity(threads));
    out.push_back(check_sum_rule(threads));
    out.push_back(check_fluctuation_mc(threads));
    out.push_back(check_second_moment(threads));
  }
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.pass; });
}

std::string format_table(const std::vector<CheckResult>& results) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-34s %-6s %12s %12s %8s  %s\n", "check",
                "status", "got", "tolerance", "time", "detail");
  os << line;
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-34s %-6s %12.4e %12.4e %7.2fs  %s\n",
                  r.name.c_str(), r.pass ? "PASS" : "FAIL", r.got, r.tolerance,
                  r.seconds, r.detail.c_str());
    os << line;
  }
  return os.str();
}

}  // namespace gsg::acceptance
