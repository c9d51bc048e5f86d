#include "gsg/model.hpp"

#include <cmath>
#include <numbers>

#include "gsg/errors.hpp"
#include "gsg/rng.hpp"

namespace gsg {

DisorderSample make_disorder(std::size_t n, std::uint64_t seed) {
  DisorderSample s;
  s.n = n;
  s.seed = seed;
  s.couplings = Matrix(n);
  CounterRng rng(seed, streams::kDisorder);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s.couplings(i, j) = rng.next_normal();
  return s;
}

namespace {

void check_dims(const SpinConfig& z, const DisorderSample& j,
                const ModelParams& p) {
  p.validate();
  if (z.size() != j.n || j.n != p.n_sites)
    throw ArgumentError("dimension mismatch between spins, couplings, params");
}

}  // namespace

double hamiltonian(const SpinConfig& z, const DisorderSample& j,
                   const ModelParams& p) {
  check_dims(z, j, p);
  const std::size_t n = p.n_sites;
  double field = 0.0;
  for (double x : z.z) field += x;

  double pair = 0.0;
  if (!p.diagonal_removed) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        pair += j.couplings(a, b) * z.z[a] * z.z[b];
    pair /= std::sqrt(2.0 * static_cast<double>(n));
  } else {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        pair += (j.couplings(a, b) + j.couplings(b, a)) / std::numbers::sqrt2 *
                z.z[a] * z.z[b];
    pair /= std::sqrt(static_cast<double>(n));
  }
  return -pair - p.h * field;
}

double regularized_exponent(const SpinConfig& z, const DisorderSample& j,
                            const ModelParams& p) {
  check_dims(z, j, p);
  const double s = norm2(z.z);
  return -p.beta * hamiltonian(z, j, p) -
         p.beta * p.beta / (4.0 * static_cast<double>(p.n_sites)) * s * s +
         0.5 * p.lambda * s;
}

double overlap(const SpinConfig& z1, const SpinConfig& z2) {
  if (z1.size() != z2.size())
    throw ArgumentError("overlap: configurations of different length");
  return dot(z1.z, z2.z) / static_cast<double>(z1.size());
}

Matrix coupling_form(const DisorderSample& j, const ModelParams& p) {
  const std::size_t n = j.n;
  Matrix s(n);
  if (!p.diagonal_removed) {
    const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        s(a, b) = 0.5 * (j.couplings(a, b) + j.couplings(b, a)) * scale;
  } else {
    const double scale = 1.0 / (2.0 * std::sqrt(static_cast<double>(n)));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) continue;
        s(a, b) = (j.couplings(a, b) + j.couplings(b, a)) /
                  std::numbers::sqrt2 * scale;
      }
  }
  return s;
}

BoltzmannSpec model_measure(const DisorderSample& j, const ModelParams& p) {
  p.validate();
  if (j.n != p.n_sites)
    throw ArgumentError("model_measure: couplings/params size mismatch");
  BoltzmannSpec spec;
  spec.n = p.n_sites;
  spec.coupling = coupling_form(j, p);
  for (auto& x : spec.coupling.data()) x *= p.beta;
  if (p.h != 0.0) spec.linear.assign(p.n_sites, p.beta * p.h);
  spec.groups.push_back(
      {0, p.n_sites, 0.5 * p.lambda,
       -p.beta * p.beta / (4.0 * static_cast<double>(p.n_sites))});
  return spec;
}

LogPartitionResult log_partition_quadrature(const DisorderSample& j,
                                            const ModelParams& p,
                                            const QuadratureConfig& cfg) {
  if (p.n_sites > cfg.max_n)
    throw ArgumentError("log_partition_quadrature: N exceeds quadrature limit");
  QuadratureSettings qs;
  qs.max_n = cfg.max_n;
  qs.rel_tol = cfg.rel_tol;
  qs.order = cfg.order;
  const auto mm = measure_quadrature(model_measure(j, p), false, qs);
  return {mm.log_z, LogPartitionMethod::quadrature, 0.0};
}

LogPartitionResult log_partition_mc(const DisorderSample& j,
                                    const ModelParams& p, const McConfig& cfg,
                                    std::uint64_t direction_stream) {
  cfg.validate();
  RadialMcSettings rset;
  rset.n_directions = cfg.n_directions;
  rset.radial_points = cfg.radial_points;
  CounterRng dirs(cfg.seed, direction_stream != 0
                                ? direction_stream
                                : streams::per_sample(streams::kReplicaA, 0));
  const auto mm = measure_radial_mc(model_measure(j, p), dirs, rset, false);
  return {mm.log_z, LogPartitionMethod::monte_carlo, mm.log_z_std_error};
}

}  // namespace gsg
