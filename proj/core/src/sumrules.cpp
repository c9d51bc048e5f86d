#include "gsg/sumrules.hpp"

#include <cmath>

#include "gsg/closed_forms.hpp"
#include "gsg/errors.hpp"
#include "gsg/montecarlo.hpp"
#include "gsg/parallel.hpp"
#include "gsg/rng.hpp"

namespace gsg {

RsInterpolationSpec make_rs_interpolation(double beta, double t, double q_bar,
                                          std::vector<double> cavity_fields) {
  if (t < 0.0 || t > 1.0)
    throw ArgumentError("rs interpolation: t must lie in [0, 1]");
  if (q_bar < 0.0) throw ArgumentError("rs interpolation: q_bar must be >= 0");
  RsInterpolationSpec spec;
  spec.t = t;
  spec.q_bar = q_bar;
  spec.c = -beta * beta * q_bar;
  spec.cavity_fields = std::move(cavity_fields);
  return spec;
}

BoltzmannSpec rs_interpolating_measure(const DisorderSample& j,
                                       const ModelParams& p,
                                       const RsInterpolationSpec& spec) {
  p.validate();
  if (p.h != 0.0)
    throw ArgumentError("rs interpolation: defined at zero external field");
  if (spec.cavity_fields.size() != p.n_sites)
    throw ArgumentError("rs interpolation: cavity field count must equal N");
  const double n = static_cast<double>(p.n_sites);
  const double beta = p.beta;

  BoltzmannSpec b;
  b.n = p.n_sites;
  b.coupling = coupling_form(j, p);
  const double cscale = beta * std::sqrt(spec.t);
  for (auto& x : b.coupling.data()) x *= cscale;
  const double lscale = beta * std::sqrt(1.0 - spec.t) * std::sqrt(spec.q_bar);
  if (lscale != 0.0) {
    b.linear.resize(p.n_sites);
    for (std::size_t i = 0; i < p.n_sites; ++i)
      b.linear[i] = lscale * spec.cavity_fields[i];
  }
  b.groups.push_back({0, p.n_sites,
                      0.5 * ((1.0 - spec.t) * spec.c + p.lambda),
                      -spec.t * beta * beta / (4.0 * n)});
  return b;
}

namespace {

bool quadrature_mode(const ModelParams& p, const McConfig& cfg) {
  return cfg.scheme == McScheme::quadrature_if_small &&
         p.n_sites <= cfg.quadrature_max_n;
}

std::vector<double> draw_cavity(const McConfig& cfg, std::size_t index,
                                std::size_t n) {
  CounterRng rng(cfg.seed, streams::per_sample(streams::kCavity, index));
  return rng.normals(n);
}

RadialMcSettings radial_settings(const McConfig& cfg) {
  RadialMcSettings r;
  r.n_directions = cfg.n_directions;
  r.radial_points = cfg.radial_points;
  return r;
}

// <(q12 - q_bar)^2> for one disorder draw of the interpolated system
double sample_fluctuation(const BoltzmannSpec& spec, double q_bar,
                          const ModelParams& p, const McConfig& cfg,
                          std::size_t index) {
  const double n = static_cast<double>(p.n_sites);
  double q1, q2;  // Omega(q12), Omega(q12^2)
  if (quadrature_mode(p, cfg)) {
    const auto mm = measure_quadrature(spec, true);
    q1 = norm2(mm.first) / n;
    q2 = mm.second.frobenius_inner(mm.second) / (n * n);
  } else {
    const auto rs = radial_settings(cfg);
    const auto da = radial_replica_data(
        spec, CounterRng(cfg.seed, streams::per_sample(streams::kReplicaA, index)),
        rs, 2);
    const auto db = radial_replica_data(
        spec, CounterRng(cfg.seed, streams::per_sample(streams::kReplicaB, index)),
        rs, 2);
    const auto mom = overlap_moments_radial(da, db);
    q1 = mom[0];
    q2 = mom[1];
  }
  return q2 - 2.0 * q_bar * q1 + q_bar * q_bar;
}

}  // namespace

McEstimate rs_interpolating_pressure(const ModelParams& p,
                                     const RsInterpolationSpec& spec,
                                     const McConfig& cfg) {
  p.validate();
  cfg.validate();
  if (spec.t == 0.0) {
    // factorized one-body system: exact value, no sampling noise
    const double s = sigma(p.beta, p.lambda, spec.q_bar);
    return {std::log(s) + 0.5 * p.beta * p.beta * spec.q_bar * s * s, 0.0, 1};
  }
  const std::size_t n_samples = cfg.n_disorder;
  std::vector<double> values(n_samples);
  parallel_for(n_samples, cfg.threads, [&](std::size_t i) {
    const auto j = sample_disorder(p.n_sites, cfg.seed, i);
    RsInterpolationSpec local = spec;
    local.cavity_fields = draw_cavity(cfg, i, p.n_sites);
    const auto b = rs_interpolating_measure(j, p, local);
    double log_z;
    if (quadrature_mode(p, cfg)) {
      log_z = measure_quadrature(b, false).log_z;
    } else {
      log_z = measure_radial_mc(
                  b,
                  CounterRng(cfg.seed,
                             streams::per_sample(streams::kReplicaA, i)),
                  radial_settings(cfg), false)
                  .log_z;
    }
    values[i] = log_z / static_cast<double>(p.n_sites);
  });
  RunningStats stats;
  for (double v : values) stats.add(v);
  return stats.estimate();
}

McEstimate rs_interpolation_derivative(const ModelParams& p,
                                       const RsInterpolationSpec& spec,
                                       const McConfig& cfg) {
  p.validate();
  cfg.validate();
  const double b2 = p.beta * p.beta;
  const std::size_t n_samples = cfg.n_disorder;
  std::vector<double> values(n_samples);
  parallel_for(n_samples, cfg.threads, [&](std::size_t i) {
    const auto j = sample_disorder(p.n_sites, cfg.seed, i);
    RsInterpolationSpec local = spec;
    local.cavity_fields = draw_cavity(cfg, i, p.n_sites);
    const auto b = rs_interpolating_measure(j, p, local);
    values[i] = sample_fluctuation(b, spec.q_bar, p, cfg, i);
  });
  RunningStats stats;
  for (double v : values) stats.add(v);
  return {0.25 * b2 * spec.q_bar * spec.q_bar - 0.25 * b2 * stats.mean(),
          0.25 * b2 * stats.std_error(), stats.count()};
}

SumRuleReport rs_sum_rule_report(const ModelParams& p, double q_bar,
                                 const McConfig& cfg, std::size_t t_grid) {
  p.validate();
  cfg.validate();
  if (t_grid < 2) throw ArgumentError("rs_sum_rule_report: need t_grid >= 2");
  const double b2 = p.beta * p.beta;

  SumRuleReport report;
  report.trial = rs_trial_pressure(p.beta, p.lambda, q_bar);

  // A_N from its own disorder stream family
  McConfig cfg_a = cfg;
  cfg_a.seed = CounterRng::derive_key(cfg.seed, 499);
  report.quenched = quenched_pressure(p, cfg_a);

  report.integrand.resize(t_grid);
  const double h = 1.0 / static_cast<double>(t_grid - 1);
  for (std::size_t k = 0; k < t_grid; ++k) {
    const double t = static_cast<double>(k) * h;
    McConfig cfg_k = cfg;
    cfg_k.seed = CounterRng::derive_key(cfg.seed, 500 + k);
    const auto spec = make_rs_interpolation(p.beta, t, q_bar);
    const std::size_t n_samples = cfg_k.n_disorder;
    std::vector<double> values(n_samples);
    parallel_for(n_samples, cfg_k.threads, [&](std::size_t i) {
      const auto j = sample_disorder(p.n_sites, cfg_k.seed, i);
      RsInterpolationSpec local = spec;
      local.cavity_fields = draw_cavity(cfg_k, i, p.n_sites);
      const auto b = rs_interpolating_measure(j, p, local);
      values[i] = sample_fluctuation(b, q_bar, p, cfg_k, i);
    });
    RunningStats stats;
    for (double v : values) stats.add(v);
    report.integrand[k] = stats.estimate();
  }

  double integral = 0.0, var = 0.0;
  for (std::size_t k = 0; k < t_grid; ++k) {
    const double w = (k == 0 || k == t_grid - 1) ? 0.5 * h : h;
    integral += w * report.integrand[k].mean;
    var += w * w * report.integrand[k].std_error * report.integrand[k].std_error;
  }
  report.integral = integral;

  // trapezoid on every other node gives the h -> 2h Richardson proxy
  if (t_grid >= 3 && (t_grid - 1) % 2 == 0) {
    double coarse = 0.0;
    const double h2 = 2.0 * h;
    for (std::size_t k = 0; k < t_grid; k += 2) {
      const double w = (k == 0 || k == t_grid - 1) ? 0.5 * h2 : h2;
      coarse += w * report.integrand[k].mean;
    }
    report.integral_coarse = coarse;
    report.discretization = std::abs(integral - coarse) / 3.0;
  }

  const double residual =
      report.quenched.mean - (report.trial - 0.25 * b2 * integral);
  const double se = std::sqrt(report.quenched.std_error * report.quenched.std_error +
                              0.0625 * b2 * b2 * var);
  report.residual = {residual, se, report.quenched.n_samples};
  return report;
}

McEstimate rs_sum_rule_residual(const ModelParams& p, double q_bar,
                                const McConfig& cfg, std::size_t t_grid) {
  return rs_sum_rule_report(p, q_bar, cfg, t_grid).residual;
}

BoltzmannSpec thermo_interpolating_measure(const DisorderSample& j_full,
                                           const DisorderSample& j1,
                                           const DisorderSample& j2,
                                           const ModelParams& p, double t) {
  p.validate();
  if (t < 0.0 || t > 1.0)
    throw ArgumentError("thermo interpolation: t must lie in [0, 1]");
  const std::size_t n = p.n_sites;
  const std::size_t n1 = j1.n;
  const std::size_t n2 = j2.n;
  if (n1 + n2 != n || j_full.n != n)
    throw ArgumentError("thermo interpolation: subsystem sizes must add to N");
  const double beta = p.beta;

  BoltzmannSpec b;
  b.n = n;
  ModelParams pf = p;
  b.coupling = coupling_form(j_full, pf);
  const double sf = beta * std::sqrt(t);
  for (auto& x : b.coupling.data()) x *= sf;

  // embed the subsystem couplings on their blocks, scaled by sqrt(1-t)
  const double s1 = beta * std::sqrt(1.0 - t);
  ModelParams p1 = p;
  p1.n_sites = n1;
  const Matrix c1 = coupling_form(j1, p1);
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t c = 0; c < n1; ++c) b.coupling(a, c) += s1 * c1(a, c);
  ModelParams p2 = p;
  p2.n_sites = n2;
  const Matrix c2 = coupling_form(j2, p2);
  for (std::size_t a = 0; a < n2; ++a)
    for (std::size_t c = 0; c < n2; ++c)
      b.coupling(n1 + a, n1 + c) += s1 * c2(a, c);

  if (p.h != 0.0) b.linear.assign(n, beta * p.h);

  const double b2 = beta * beta;
  b.groups.push_back({0, n, 0.5 * p.lambda, -t * b2 / (4.0 * static_cast<double>(n))});
  b.groups.push_back({0, n1, 0.0, -(1.0 - t) * b2 / (4.0 * static_cast<double>(n1))});
  b.groups.push_back({n1, n, 0.0, -(1.0 - t) * b2 / (4.0 * static_cast<double>(n2))});
  return b;
}

McEstimate thermo_interpolation_derivative(std::size_t n1, std::size_t n2,
                                           const ModelParams& p, double t,
                                           const McConfig& cfg) {
  p.validate();
  cfg.validate();
  if (n1 + n2 != p.n_sites)
    throw ArgumentError("thermo_interpolation_derivative: n1 + n2 != N");
  const double nn = static_cast<double>(p.n_sites);
  const double dn1 = static_cast<double>(n1);
  const double dn2 = static_cast<double>(n2);
  const double b2 = p.beta * p.beta;

  const std::size_t n_samples = cfg.n_disorder;
  std::vector<double> values(n_samples);
  parallel_for(n_samples, cfg.threads, [&](std::size_t i) {
    const auto jf = sample_disorder(p.n_sites, cfg.seed, i);
    const auto j1 = make_disorder(
        n1, CounterRng::derive_key(cfg.seed,
                                   streams::per_sample(streams::kDisorderB, i)));
    const auto j2 = make_disorder(
        n2, CounterRng::derive_key(cfg.seed,
                                   streams::per_sample(streams::kDisorderC, i)));
    const auto spec = thermo_interpolating_measure(jf, j1, j2, p, t);

    Matrix ma, mb;  // omega(z_i z_j) from two independent streams
    if (quadrature_mode(p, cfg)) {
      const auto mm = measure_quadrature(spec, true);
      ma = mm.second;
      mb = mm.second;
    } else {
      ImportanceSettings iset{cfg.n_directions};
      ma = measure_importance(
               spec,
               CounterRng(cfg.seed, streams::per_sample(streams::kReplicaA, i)),
               iset, true)
               .second;
      mb = measure_importance(
               spec,
               CounterRng(cfg.seed, streams::per_sample(streams::kReplicaB, i)),
               iset, true)
               .second;
    }
    const double q_full = ma.frobenius_inner(mb) / (nn * nn);
    const double q_sub1 = ma.frobenius_inner_block(mb, 0, n1) / (dn1 * dn1);
    const double q_sub2 =
        ma.frobenius_inner_block(mb, n1, p.n_sites) / (dn2 * dn2);
    values[i] = q_full - dn1 / nn * q_sub1 - dn2 / nn * q_sub2;
  });

  RunningStats stats;
  for (double v : values) stats.add(v);
  return {-0.25 * b2 * stats.mean(), 0.25 * b2 * stats.std_error(),
          stats.count()};
}

}  // namespace gsg
