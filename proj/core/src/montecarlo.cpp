#include "gsg/montecarlo.hpp"

#include <cmath>
#include <optional>

#include "gsg/closed_forms.hpp"
#include "gsg/errors.hpp"
#include "gsg/parallel.hpp"
#include "gsg/rng.hpp"

namespace gsg {

DisorderSample sample_disorder(std::size_t n, std::uint64_t seed,
                               std::uint64_t index) {
  return make_disorder(
      n, CounterRng::derive_key(seed, streams::per_sample(streams::kDisorder,
                                                          index)));
}

namespace {

bool use_quadrature(const ModelParams& p, const McConfig& cfg) {
  return cfg.scheme == McScheme::quadrature_if_small &&
         p.n_sites <= cfg.quadrature_max_n;
}

RadialMcSettings radial_settings(const McConfig& cfg) {
  RadialMcSettings r;
  r.n_directions = cfg.n_directions;
  r.radial_points = cfg.radial_points;
  return r;
}

// Unbiased per-sample Z estimate: value and (shifted) spread.
struct ZSample {
  double z = 0.0;        // e^{shift} * mean, unbiased
  double z_second = 0.0; // unbiased estimate of Z^2 (two-stream product)
};

ZSample sample_z(const DisorderSample& j, const ModelParams& p,
                 const McConfig& cfg, std::uint64_t index) {
  ZSample out;
  if (use_quadrature(p, cfg)) {
    const double z = std::exp(log_partition_quadrature(j, p).log_z);
    out.z = z;
    out.z_second = z * z;
    return out;
  }
  const auto spec = model_measure(j, p);
  const auto rs = radial_settings(cfg);
  const auto a = measure_radial_mc(
      spec, CounterRng(cfg.seed, streams::per_sample(streams::kReplicaA, index)),
      rs, false);
  const auto b = measure_radial_mc(
      spec, CounterRng(cfg.seed, streams::per_sample(streams::kReplicaB, index)),
      rs, false);
  const double za = std::exp(a.shift) * a.z_shifted_mean;
  const double zb = std::exp(b.shift) * b.z_shifted_mean;
  out.z = 0.5 * (za + zb);
  out.z_second = za * zb;
  return out;
}

}  // namespace

LogPartitionResult sample_log_partition(const DisorderSample& j,
                                        const ModelParams& p,
                                        const McConfig& cfg,
                                        std::uint64_t direction_stream) {
  if (use_quadrature(p, cfg)) return log_partition_quadrature(j, p);
  return log_partition_mc(j, p, cfg, direction_stream);
}

McEstimate quenched_pressure(const ModelParams& p, const McConfig& cfg) {
  p.validate();
  cfg.validate();
  const std::size_t n_samples = cfg.n_disorder;
  std::vector<std::optional<double>> values(n_samples);

  parallel_for(n_samples, cfg.threads, [&](std::size_t i) {
    try {
      const auto j = sample_disorder(p.n_sites, cfg.seed, i);
      const auto lp = sample_log_partition(
          j, p, cfg, streams::per_sample(streams::kReplicaA, i));
      values[i] = lp.log_z / static_cast<double>(p.n_sites);
    } catch (const NumericError&) {
      values[i] = std::nullopt;  // skipped, counted below
    }
  });

  RunningStats stats;
  std::size_t skips = 0;
  for (const auto& v : values) {
    if (v)
      stats.add(*v);
    else
      ++skips;
  }
  if (skips * 100 > n_samples)
    throw NumericError("quenched_pressure: more than 1% of samples failed");
  return stats.estimate();
}

McEstimate annealed_mean_partition_mc(const ModelParams& p,
                                      const McConfig& cfg) {
  p.validate();
  cfg.validate();
  std::vector<double> values(cfg.n_disorder);
  parallel_for(cfg.n_disorder, cfg.threads, [&](std::size_t i) {
    const auto j = sample_disorder(p.n_sites, cfg.seed, i);
    values[i] = sample_z(j, p, cfg, i).z;
  });
  RunningStats stats;
  for (double v : values) stats.add(v);
  return stats.estimate();
}

McEstimate second_moment_ratio_mc(const ModelParams& p, const McConfig& cfg) {
  p.validate();
  cfg.validate();
  if (!p.diagonal_removed)
    throw ArgumentError(
        "second_moment_ratio_mc: requires the diagonal-removed model Z'");
  if (p.lambda >= 1.0 || p.beta / (1.0 - p.lambda) >= 1.0)
    throw DomainError("second_moment_ratio_mc: requires beta_lambda < 1");

  const std::size_t n = cfg.n_disorder;
  std::vector<double> xs(n), ys(n);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    const auto j = sample_disorder(p.n_sites, cfg.seed, i);
    const auto z = sample_z(j, p, cfg, i);
    xs[i] = z.z;
    ys[i] = z.z_second;
  });

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double denom = static_cast<double>(n > 1 ? n - 1 : 1);
  sxx /= denom;
  syy /= denom;
  sxy /= denom;

  const double ratio = my / (mx * mx);
  // delta method: R = y/x^2, grad = (-2y/x^3, 1/x^2)
  const double gx = -2.0 * my / (mx * mx * mx);
  const double gy = 1.0 / (mx * mx);
  const double var =
      (gx * gx * sxx + 2.0 * gx * gy * sxy + gy * gy * syy) /
      static_cast<double>(n);
  return {ratio, std::sqrt(std::max(var, 0.0)), n};
}

namespace {

// per-sample Omega(q12^k), k = 1..max_power, with two replica streams
std::vector<double> sample_overlap_moments(const DisorderSample& j,
                                           const ModelParams& p,
                                           const McConfig& cfg,
                                           std::uint64_t index,
                                           std::size_t max_power) {
  const auto spec = model_measure(j, p);
  if (use_quadrature(p, cfg)) return overlap_moments_quadrature(spec, max_power);
  const auto rs = radial_settings(cfg);
  const auto da = radial_replica_data(
      spec, CounterRng(cfg.seed, streams::per_sample(streams::kReplicaA, index)),
      rs, max_power);
  const auto db = radial_replica_data(
      spec, CounterRng(cfg.seed, streams::per_sample(streams::kReplicaB, index)),
      rs, max_power);
  return overlap_moments_radial(da, db);
}

}  // namespace

std::vector<McEstimate> replica_overlap_moments(const ModelParams& p,
                                                const McConfig& cfg,
                                                std::size_t max_power) {
  p.validate();
  cfg.validate();
  if (max_power < 1) throw ArgumentError("replica_overlap_moments: max_power >= 1");
  const std::size_t n = cfg.n_disorder;
  std::vector<std::vector<double>> rows(n);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    const auto j = sample_disorder(p.n_sites, cfg.seed, i);
    rows[i] = sample_overlap_moments(j, p, cfg, i, max_power);
  });
  std::vector<RunningStats> stats(max_power);
  for (const auto& row : rows)
    for (std::size_t k = 0; k < max_power; ++k) stats[k].add(row[k]);
  std::vector<McEstimate> out(max_power);
  for (std::size_t k = 0; k < max_power; ++k) out[k] = stats[k].estimate();
  return out;
}

McEstimate xi_second_moment_mc(const ModelParams& p, const McConfig& cfg) {
  p.validate();
  cfg.validate();
  const double q_bar = rs_optimal_qbar(p.beta, p.lambda);
  const double nn = static_cast<double>(p.n_sites);
  const std::size_t n = cfg.n_disorder;
  std::vector<double> values(n);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    const auto j = sample_disorder(p.n_sites, cfg.seed, i);
    const auto mom = sample_overlap_moments(j, p, cfg, i, 2);
    values[i] = nn * (mom[1] - 2.0 * q_bar * mom[0] + q_bar * q_bar);
  });
  RunningStats stats;
  for (double v : values) stats.add(v);
  return stats.estimate();
}

McEstimate superadditivity_check(std::size_t n1, std::size_t n2,
                                 const ModelParams& p, const McConfig& cfg) {
  p.validate();
  cfg.validate();
  if (n1 + n2 != p.n_sites)
    throw ArgumentError("superadditivity_check: n1 + n2 must equal N");

  ModelParams p1 = p;
  p1.n_sites = n1;
  ModelParams p2 = p;
  p2.n_sites = n2;

  const std::size_t n = cfg.n_disorder;
  std::vector<double> gaps(n);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    const auto j_full = sample_disorder(p.n_sites, cfg.seed, i);
    const auto j1 = make_disorder(
        n1, CounterRng::derive_key(
                cfg.seed, streams::per_sample(streams::kDisorderB, i)));
    const auto j2 = make_disorder(
        n2, CounterRng::derive_key(
                cfg.seed, streams::per_sample(streams::kDisorderC, i)));
    const double lz = sample_log_partition(
                          j_full, p, cfg,
                          streams::per_sample(streams::kReplicaA, i))
                          .log_z;
    const double lz1 = sample_log_partition(
                           j1, p1, cfg,
                           streams::per_sample(streams::kDirectionsB, i))
                           .log_z;
    const double lz2 = sample_log_partition(
                           j2, p2, cfg,
                           streams::per_sample(streams::kDirectionsC, i))
                           .log_z;
    gaps[i] = lz - lz1 - lz2;
  });
  RunningStats stats;
  for (double g : gaps) stats.add(g);
  return stats.estimate();
}

}  // namespace gsg
