// gsg: batch front-end for the Gaussian spin-glass laboratory.
//
// Subcommands: phase-scan, rs-eval, rsb-eval, quenched, fluctuations,
// sum-rule, verify. All numeric options live at the top level so a flat
// key=value config file (--config) can set any of them; command-line flags
// override the file, the file overrides defaults.
//
// Exit codes: 0 ok, 1 check failed, 2 usage, 3 numeric failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsg/acceptance.hpp"
#include "gsg/closed_forms.hpp"
#include "gsg/errors.hpp"
#include "gsg/fluctuations.hpp"
#include "gsg/montecarlo.hpp"
#include "gsg/parisi.hpp"
#include "gsg/serialize.hpp"
#include "gsg/sumrules.hpp"

namespace {

struct Options {
  double beta = 1.0;
  double lambda = 0.0;
  double h = 0.0;
  std::size_t n = 2;
  std::size_t n1 = 1;
  std::size_t n2 = 1;
  double qbar = -1.0;  // negative: use the RS optimum
  std::uint64_t seed = 1;
  std::size_t samples = 200;
  std::size_t directions = 2048;
  std::size_t radial_points = 512;
  unsigned threads = 0;
  bool diagonal_removed = false;
  std::string scheme = "quadrature_if_small";
  std::string out;
  std::string format;  // "", "csv", "json"
  // scans
  std::string quantity = "rs";
  double beta_min = 0.1, beta_max = 3.0;
  std::size_t beta_steps = 30;
  double lambda_min = 0.0, lambda_max = 0.0;
  std::size_t lambda_steps = 1;
  // interpolation / ODE
  double t = 1.0;
  double t_end = 1.0;
  std::size_t t_grid = 11;
  std::size_t steps = 10000;
  std::size_t mc_n = 0;  // fluctuations: also run the xi MC at this N
  // rsb
  std::size_t levels = 3;
  std::size_t restarts = 16;
  // verify
  std::string level = "fast";
};

gsg::ModelParams make_params(const Options& o, std::size_t n_sites) {
  gsg::ModelParams p;
  p.beta = o.beta;
  p.lambda = o.lambda;
  p.h = o.h;
  p.n_sites = n_sites;
  p.diagonal_removed = o.diagonal_removed;
  return p;
}

gsg::McConfig make_config(const Options& o) {
  gsg::McConfig cfg;
  cfg.n_disorder = o.samples;
  cfg.n_directions = o.directions;
  cfg.radial_points = o.radial_points;
  cfg.seed = o.seed;
  cfg.scheme = o.scheme == "radial_mc" ? gsg::McScheme::radial_mc
                                       : gsg::McScheme::quadrature_if_small;
  cfg.threads = o.threads;
  return cfg;
}

void write_text(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw gsg::ArgumentError("cannot open output file: " + o.out);
  f << text;
}

void flatten_json(const nlohmann::json& j, const std::string& prefix,
                  std::string& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten_json(*it, key, out);
    } else {
      out += key;
      out += ",";
      out += it->is_string() ? it->get<std::string>() : it->dump();
      out += "\n";
    }
  }
}

void emit_record(const Options& o, const nlohmann::json& record) {
  if (o.format == "csv") {
    std::string text = "key,value\n";
    flatten_json(record, "", text);
    write_text(o, text);
  } else {
    write_text(o, record.dump(2) + "\n");
  }
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int cmd_phase_scan(const Options& o) {
  struct Cell {
    double value = 0.0;
    std::string regime = "out-of-domain";
    bool valid = false;
  };
  auto evaluate = [&](double beta, double lambda) -> Cell {
    Cell c;
    try {
      const std::string regime =
          gsg::is_annealed_region(beta, lambda) ? "annealed" : "condensed";
      if (o.quantity == "annealed") {
        c.value = gsg::annealed_pressure(beta, lambda);
      } else if (o.quantity == "rs") {
        c.value = gsg::rs_pressure(beta, lambda).pressure;
      } else if (o.quantity == "shell") {
        c.value = gsg::shell_lower_bound(beta, lambda).value;
      } else if (o.quantity == "susceptibility") {
        c.value = gsg::annealed_susceptibility(beta, lambda);
      } else if (o.quantity == "rsb_check") {
        const auto rs = gsg::rs_pressure(beta, lambda);
        c.value = gsg::rsb_pressure_functional(
                      beta, lambda, gsg::rs_order_parameter(rs.q_bar)) -
                  rs.pressure;
      } else {
        throw gsg::ArgumentError("unknown scan quantity: " + o.quantity);
      }
      c.regime = regime;
      c.valid = true;
    } catch (const gsg::DomainError&) {
    } catch (const gsg::DivergenceError&) {
    }
    return c;
  };

  const bool as_json = o.format == "json";
  nlohmann::json rows = nlohmann::json::array();
  std::string csv = "beta,lambda,value,regime\n";
  for (std::size_t i = 0; i < o.beta_steps; ++i) {
    const double beta =
        o.beta_steps == 1
            ? o.beta_min
            : o.beta_min + (o.beta_max - o.beta_min) * static_cast<double>(i) /
                               static_cast<double>(o.beta_steps - 1);
    for (std::size_t j = 0; j < o.lambda_steps; ++j) {
      const double lambda =
          o.lambda_steps == 1
              ? o.lambda_min
              : o.lambda_min + (o.lambda_max - o.lambda_min) *
                                   static_cast<double>(j) /
                                   static_cast<double>(o.lambda_steps - 1);
      const Cell c = evaluate(beta, lambda);
      if (as_json) {
        nlohmann::json row = {{"beta", beta},
                              {"lambda", lambda},
                              {"regime", c.regime}};
        if (c.valid) row["value"] = c.value;
        rows.push_back(std::move(row));
      } else {
        csv += fmt_double(beta);
        csv += ",";
        csv += fmt_double(lambda);
        csv += ",";
        if (c.valid) csv += fmt_double(c.value);
        csv += ",";
        csv += c.regime;
        csv += "\n";
      }
    }
  }
  if (as_json)
    write_text(o, nlohmann::json{{"quantity", o.quantity}, {"rows", rows}}.dump(2) +
                      "\n");
  else
    write_text(o, csv);
  return 0;
}

int cmd_rs_eval(const Options& o) {
  nlohmann::json out;
  out["beta"] = o.beta;
  out["lambda"] = o.lambda;
  if (o.qbar >= 0.0) {
    out["q_bar"] = o.qbar;
    out["sigma"] = gsg::sigma(o.beta, o.lambda, o.qbar);
    out["trial_pressure"] = gsg::rs_trial_pressure(o.beta, o.lambda, o.qbar);
    out["trial_gradient"] = gsg::rs_trial_gradient(o.beta, o.lambda, o.qbar);
  } else {
    const auto sol = gsg::rs_pressure(o.beta, o.lambda);
    out["q_bar"] = sol.q_bar;
    out["sigma"] = sol.sigma;
    out["pressure"] = sol.pressure;
    out["regime"] = sol.regime == gsg::Regime::annealed ? "annealed" : "condensed";
    const auto shell = gsg::shell_lower_bound(o.beta, o.lambda);
    out["shell_r_squared"] = shell.r_squared;
    out["shell_value"] = shell.value;
  }
  emit_record(o, out);
  return 0;
}

int cmd_rsb_eval(const Options& o) {
  gsg::InfimumOptions opts;
  opts.restarts = o.restarts;
  opts.seed = o.seed;
  const auto found = gsg::rsb_infimum_search(o.beta, o.lambda, o.levels, opts);
  const auto rs = gsg::rs_pressure(o.beta, o.lambda);
  nlohmann::json out;
  out["beta"] = o.beta;
  out["lambda"] = o.lambda;
  out["levels"] = o.levels;
  out["restarts"] = o.restarts;
  out["seed"] = o.seed;
  out["value"] = found.value;
  out["rs_pressure"] = rs.pressure;
  out["gap"] = found.value - rs.pressure;
  out["order_parameter"] = gsg::order_parameter_to_json(found.x);
  emit_record(o, out);
  return 0;
}

int cmd_quenched(const Options& o) {
  const auto p = make_params(o, o.n);
  const auto cfg = make_config(o);
  const auto est = gsg::quenched_pressure(p, cfg);

  nlohmann::json estimates;
  estimates["quenched_pressure"] = gsg::estimate_to_json(est);
  bool ok = true;
  try {
    const double rs = gsg::rs_pressure(o.beta, o.lambda).pressure;
    estimates["rs_pressure"] = rs;
    const bool rs_ok = est.mean <= rs + 3.0 * est.std_error;
    estimates["rs_bound_ok"] = rs_ok;
    ok = ok && rs_ok;
  } catch (const gsg::DomainError&) {
  }
  try {
    const double ann = gsg::annealed_pressure(o.beta, o.lambda);
    estimates["annealed_pressure"] = ann;
    const bool ann_ok = est.mean <= ann + 3.0 * est.std_error;
    estimates["annealed_bound_ok"] = ann_ok;
    ok = ok && ann_ok;
  } catch (const gsg::DomainError&) {
  }
  emit_record(o, gsg::make_run_record(p, cfg, estimates));
  return ok ? 0 : 1;
}

int cmd_fluctuations(const Options& o) {
  const double q_bar =
      o.qbar >= 0.0 ? o.qbar : gsg::rs_optimal_qbar(o.beta, o.lambda);
  nlohmann::json out;
  out["beta"] = o.beta;
  out["lambda"] = o.lambda;
  out["q_bar"] = q_bar;
  const auto ic = gsg::initial_conditions(o.beta, o.lambda, q_bar);
  out["initial"] = {{"a", ic.a}, {"b", ic.b}, {"c", ic.c}};
  const auto triple =
      gsg::integrate_triple(o.beta, o.lambda, q_bar, o.t_end, o.steps);
  out["triple"] = {
      {"a", triple.a}, {"b", triple.b}, {"c", triple.c}, {"t", triple.t}};
  if (q_bar == 0.0 && o.t_end == 1.0)
    out["annealed_susceptibility"] =
        gsg::annealed_susceptibility(o.beta, o.lambda);
  if (o.mc_n > 0) {
    const auto p = make_params(o, o.mc_n);
    const auto cfg = make_config(o);
    out["xi_second_moment_mc"] =
        gsg::estimate_to_json(gsg::mc_xi_second_moment(p, cfg));
    out["seed"] = o.seed;
  }
  emit_record(o, out);
  return 0;
}

int cmd_sum_rule(const Options& o) {
  const double q_bar =
      o.qbar >= 0.0 ? o.qbar : gsg::rs_optimal_qbar(o.beta, o.lambda);
  const auto p = make_params(o, o.n);
  const auto cfg = make_config(o);
  const auto report = gsg::rs_sum_rule_report(p, q_bar, cfg, o.t_grid);
  const double allowance = 3.0 * report.residual.std_error +
                           0.25 * o.beta * o.beta * report.discretization;
  const bool ok = std::abs(report.residual.mean) <= allowance;

  nlohmann::json estimates;
  estimates["q_bar"] = q_bar;
  estimates["t_grid"] = o.t_grid;
  estimates["quenched_pressure"] = gsg::estimate_to_json(report.quenched);
  estimates["trial_pressure"] = report.trial;
  estimates["fluctuation_integral"] = report.integral;
  estimates["trapezoid_allowance"] = report.discretization;
  estimates["residual"] = gsg::estimate_to_json(report.residual);
  estimates["within_tolerance"] = ok;
  emit_record(o, gsg::make_run_record(p, cfg, estimates));
  return ok ? 0 : 1;
}

int cmd_verify(const Options& o) {
  const auto level = o.level == "full" ? gsg::acceptance::Level::full
                                       : gsg::acceptance::Level::fast;
  const auto results = gsg::acceptance::run_checks(level, o.threads);
  write_text(o, gsg::acceptance::format_table(results));
  return gsg::acceptance::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for the fully Gaussian mean-field spin glass"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value config file; flags override");

  Options o;
  app.add_option("--beta", o.beta, "inverse temperature");
  app.add_option("--lambda", o.lambda, "variance-shift parameter");
  app.add_option("--field", o.h, "external field h");
  app.add_option("--n", o.n, "system size N");
  app.add_option("--n1", o.n1, "first subsystem size");
  app.add_option("--n2", o.n2, "second subsystem size");
  app.add_option("--qbar", o.qbar, "overlap q_bar (negative: RS optimum)");
  app.add_option("--seed", o.seed, "master seed");
  app.add_option("--samples", o.samples, "disorder samples");
  app.add_option("--n-directions", o.directions, "spherical MC directions");
  app.add_option("--radial-points", o.radial_points, "radial grid points");
  app.add_option("--threads", o.threads, "worker threads (0 = hardware)");
  app.add_flag("--diag-removed", o.diagonal_removed,
               "use the diagonal-removed model Z'");
  app.add_option("--scheme", o.scheme, "quadrature_if_small | radial_mc")
      ->check(CLI::IsMember({"quadrature_if_small", "radial_mc"}));
  app.add_option("--out", o.out, "output file (default stdout)");
  app.add_option("--format", o.format, "csv | json")
      ->check(CLI::IsMember({"", "csv", "json"}));
  app.add_option("--quantity", o.quantity,
                 "scan quantity: annealed | rs | shell | susceptibility | rsb_check")
      ->check(CLI::IsMember(
          {"annealed", "rs", "shell", "susceptibility", "rsb_check"}));
  app.add_option("--beta-min", o.beta_min, "scan: smallest beta");
  app.add_option("--beta-max", o.beta_max, "scan: largest beta");
  app.add_option("--beta-steps", o.beta_steps, "scan: beta grid size");
  app.add_option("--lambda-min", o.lambda_min, "scan: smallest lambda");
  app.add_option("--lambda-max", o.lambda_max, "scan: largest lambda");
  app.add_option("--lambda-steps", o.lambda_steps, "scan: lambda grid size");
  app.add_option("--t", o.t, "interpolation time");
  app.add_option("--t-end", o.t_end, "ODE end time");
  app.add_option("--t-grid", o.t_grid, "sum rule t-grid points");
  app.add_option("--steps", o.steps, "ODE steps");
  app.add_option("--mc-n", o.mc_n, "fluctuations: also run the xi MC at this N");
  app.add_option("--levels", o.levels, "RSB levels K");
  app.add_option("--restarts", o.restarts, "RSB search restarts");
  app.add_option("--level", o.level, "verify level: fast | full")
      ->check(CLI::IsMember({"fast", "full"}));

  auto* scan = app.add_subcommand("phase-scan", "closed-form scans over (beta, lambda)");
  auto* rs = app.add_subcommand("rs-eval", "replica symmetric solution at a point");
  auto* rsb = app.add_subcommand("rsb-eval", "RSB infimum search at a point");
  auto* quenched = app.add_subcommand("quenched", "quenched pressure MC with bound checks");
  auto* fluct = app.add_subcommand("fluctuations", "overlap fluctuation ODE and xi MC");
  auto* sumrule = app.add_subcommand("sum-rule", "RS interpolation sum rule residual");
  auto* verify = app.add_subcommand("verify", "run the acceptance checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (scan->parsed()) return cmd_phase_scan(o);
    if (rs->parsed()) return cmd_rs_eval(o);
    if (rsb->parsed()) return cmd_rsb_eval(o);
    if (quenched->parsed()) return cmd_quenched(o);
    if (fluct->parsed()) return cmd_fluctuations(o);
    if (sumrule->parsed()) return cmd_sum_rule(o);
    if (verify->parsed()) return cmd_verify(o);
  } catch (const gsg::ArgumentError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const gsg::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const gsg::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
