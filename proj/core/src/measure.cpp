#include "gsg/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "gsg/errors.hpp"
#include "gsg/types.hpp"

namespace gsg {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2*pi)

double group_sum(const QuarticGroup& g, std::span<const double> z) {
  double s = 0.0;
  for (std::size_t i = g.begin; i < g.end; ++i) s += z[i] * z[i];
  return s;
}

// log of the chi_N radial density r^{N-1} e^{-r^2/2} / (2^{N/2-1} Gamma(N/2))
double log_chi_density(std::size_t n, double r) {
  return (static_cast<double>(n) - 1.0) * std::log(r) - 0.5 * r * r -
         (0.5 * static_cast<double>(n) - 1.0) * std::numbers::ln2 -
         std::lgamma(0.5 * static_cast<double>(n));
}

}  // namespace

double BoltzmannSpec::exponent(std::span<const double> z) const {
  double e = coupling.quadratic_form(z);
  if (!linear.empty()) e += dot(linear, z);
  for (const auto& g : groups) {
    const double s = group_sum(g, z);
    e += g.c2 * s + g.c4 * s * s;
  }
  return e;
}

bool BoltzmannSpec::has_linear() const {
  for (double b : linear)
    if (b != 0.0) return true;
  return false;
}

bool BoltzmannSpec::single_full_group() const {
  return groups.size() == 1 && groups[0].begin == 0 && groups[0].end == n;
}

void BoltzmannSpec::validate() const {
  if (n == 0) throw ArgumentError("BoltzmannSpec: empty system");
  if (coupling.size() != n) throw ArgumentError("BoltzmannSpec: coupling size mismatch");
  if (!linear.empty() && linear.size() != n)
    throw ArgumentError("BoltzmannSpec: linear size mismatch");
  for (const auto& g : groups) {
    if (g.end <= g.begin || g.end > n)
      throw ArgumentError("BoltzmannSpec: bad quartic group range");
    if (g.c4 > 0.0) throw ArgumentError("BoltzmannSpec: positive quartic term");
  }
}

namespace {

// envelope with the expensive spectral data precomputed once
double envelope_with(const BoltzmannSpec& spec, double lambda_max_pos,
                     double linear_norm, double r, bool with_jacobian) {
  const double r2 = r * r;
  double e = lambda_max_pos * r2 + linear_norm * r;

  // split groups into full-range terms (block norm equals r^2 exactly) and
  // partial blocks, whose squared norms share the budget r^2
  std::vector<const QuarticGroup*> partial;
  for (const auto& g : spec.groups) {
    if (g.begin == 0 && g.end == spec.n) {
      e += g.c2 * r2 + g.c4 * r2 * r2;
    } else {
      partial.push_back(&g);
    }
  }
  if (partial.size() == 1) {
    // sup over s in [0, r^2] of a concave quadratic: endpoints or vertex
    const auto& g = *partial[0];
    double best = std::max(0.0, g.c2 * r2 + g.c4 * r2 * r2);
    if (g.c4 < 0.0) {
      const double sv = std::clamp(-g.c2 / (2.0 * g.c4), 0.0, r2);
      best = std::max(best, g.c2 * sv + g.c4 * sv * sv);
    }
    e += best;
  } else if (partial.size() == 2) {
    // two blocks partitioning the budget: s and r^2 - s, concave in s
    const auto& g1 = *partial[0];
    const auto& g2 = *partial[1];
    auto value = [&](double s) {
      const double t = r2 - s;
      return g1.c2 * s + g1.c4 * s * s + g2.c2 * t + g2.c4 * t * t;
    };
    double best = std::max(value(0.0), value(r2));
    const double curv = 2.0 * (g1.c4 + g2.c4);
    if (curv < 0.0) {
      const double sv =
          std::clamp((g2.c2 - g1.c2 + 2.0 * g2.c4 * r2) / (-curv), 0.0, r2);
      best = std::max(best, value(sv));
    }
    e += best;
  } else if (!partial.empty()) {
    throw ArgumentError("radial_envelope: more than two partial quartic groups");
  }

  e -= 0.5 * r2;
  if (with_jacobian)
    e += (static_cast<double>(spec.n) - 1.0) * std::log(std::max(r, 1e-300));
  return e;
}

double envelope_radius_with(const BoltzmannSpec& spec, double lambda_max_pos,
                            double linear_norm, double tail_log,
                            bool with_jacobian) {
  // coarse scan for the peak, then extend until the tail threshold is met
  auto env = [&](double r) {
    return envelope_with(spec, lambda_max_pos, linear_norm, r, with_jacobian);
  };
  double r_hi = 8.0;
  for (int rounds = 0; rounds < 64; ++rounds) {
    double peak = -1e300, r_peak = r_hi;
    const int n_scan = 2048;
    for (int i = 1; i <= n_scan; ++i) {
      const double r = r_hi * static_cast<double>(i) / n_scan;
      const double g = env(r);
      if (g > peak) {
        peak = g;
        r_peak = r;
      }
    }
    const double threshold = peak + tail_log - 3.0;
    if (env(r_hi) < threshold) {
      // bisect the right crossing in [r_peak, r_hi]
      double lo = r_peak, hi = r_hi;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (env(mid) < threshold)
          hi = mid;
        else
          lo = mid;
      }
      return hi;
    }
    r_hi *= 2.0;
    if (r_hi > 1e8)
      throw NumericError(
          "envelope_radius: integrand does not decay; measure not normalizable");
  }
  throw NumericError("envelope_radius: failed to bracket the tail");
}

double lambda_max_pos(const BoltzmannSpec& spec) {
  return std::max(largest_eigenvalue(spec.coupling), 0.0);
}

double linear_norm_of(const BoltzmannSpec& spec) {
  return spec.linear.empty() ? 0.0 : std::sqrt(norm2(spec.linear));
}

}  // namespace

double radial_envelope(const BoltzmannSpec& spec, double r, bool with_jacobian) {
  return envelope_with(spec, lambda_max_pos(spec), linear_norm_of(spec), r,
                       with_jacobian);
}

double envelope_radius(const BoltzmannSpec& spec, double tail_log,
                       bool with_jacobian) {
  return envelope_radius_with(spec, lambda_max_pos(spec), linear_norm_of(spec),
                              tail_log, with_jacobian);
}

// ---------------------------------------------------------------------------
// quadrature backend

namespace {

struct RotatedSpec {
  BoltzmannSpec spec;   // working spec (possibly diagonalized)
  Matrix basis;         // z = V w when rotated; identity otherwise
  bool rotated = false;
  bool parity = false;  // integrand even in each coordinate separately
};

RotatedSpec prepare(const BoltzmannSpec& in) {
  RotatedSpec out;
  out.spec = in;
  if (!in.has_linear() && in.single_full_group() && in.n > 1) {
    auto eig = jacobi_eigensymmetric(in.coupling);
    Matrix diag(in.n);
    for (std::size_t i = 0; i < in.n; ++i) diag(i, i) = eig.values[i];
    out.spec.coupling = std::move(diag);
    out.spec.linear.clear();
    out.basis = eig.vectors;
    out.rotated = true;
    out.parity = true;
  } else if (!in.has_linear() && in.n == 1) {
    out.parity = true;  // 1D even integrand, no rotation needed
  }
  return out;
}

}  // namespace

MeasureMoments measure_quadrature(const BoltzmannSpec& spec_in,
                                  bool want_moments,
                                  const QuadratureSettings& settings) {
  spec_in.validate();
  if (spec_in.n > settings.max_n)
    throw ArgumentError("measure_quadrature: system too large for quadrature");

  RotatedSpec rs = prepare(spec_in);
  const BoltzmannSpec& spec = rs.spec;
  const std::size_t n = spec.n;

  const double lm = lambda_max_pos(spec);
  const double ln = linear_norm_of(spec);
  const double box_radius =
      envelope_radius_with(spec, lm, ln, settings.tail_log, false);
  // upper bound of the point-wise log integrand, used as exponent shift
  double shift = -1e300;
  for (int i = 1; i <= 512; ++i)
    shift = std::max(shift,
                     envelope_with(spec, lm, ln, box_radius * i / 512.0, false));

  std::vector<double> lo(n), hi(n, box_radius);
  for (std::size_t d = 0; d < n; ++d) lo[d] = rs.parity ? 0.0 : -box_radius;

  // integrand layout: [Z] + optional first moments + upper-triangle seconds
  std::size_t n_vals = 1;
  std::size_t first_at = 0, second_at = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (want_moments) {
    if (rs.parity) {
      second_at = 1;
      for (std::size_t i = 0; i < n; ++i) pairs.emplace_back(i, i);
      n_vals = 1 + pairs.size();
    } else {
      first_at = 1;
      second_at = 1 + n;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) pairs.emplace_back(i, j);
      n_vals = 1 + n + pairs.size();
    }
  }

  auto f = [&](std::span<const double> z, std::span<double> out) {
    const double w = std::exp(spec.exponent(z) - 0.5 * norm2(z) - shift);
    out[0] = w;
    if (want_moments) {
      if (!rs.parity)
        for (std::size_t i = 0; i < n; ++i) out[first_at + i] = w * z[i];
      for (std::size_t p = 0; p < pairs.size(); ++p)
        out[second_at + p] = w * z[pairs[p].first] * z[pairs[p].second];
    }
  };

  TensorQuadratureOptions topts;
  topts.rel_tol = settings.rel_tol;
  topts.order = settings.order;
  topts.initial_panels = settings.initial_panels;
  topts.max_doublings = settings.max_doublings;

  std::size_t evals = 0;
  std::vector<double> raw = integrate_box(n, lo, hi, n_vals, f, topts, &evals);

  const double orthants = rs.parity ? std::pow(2.0, static_cast<double>(n)) : 1.0;
  const double z0 = raw[0] * orthants;
  if (!(z0 > 0.0) || !std::isfinite(z0))
    throw NumericError("measure_quadrature: non-finite or non-positive integral");

  MeasureMoments mm;
  mm.log_z = shift + std::log(z0) - 0.5 * static_cast<double>(n) * kLog2Pi;
  mm.evaluations = evals;
  mm.z_shifted_mean = z0;
  mm.shift = shift - 0.5 * static_cast<double>(n) * kLog2Pi;
  if (want_moments) {
    mm.has_moments = true;
    std::vector<double> first(n, 0.0);
    Matrix second(n);
    if (!rs.parity)
      for (std::size_t i = 0; i < n; ++i) first[i] = raw[first_at + i] / raw[0];
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const double v = raw[second_at + p] / raw[0];
      second(pairs[p].first, pairs[p].second) = v;
      second(pairs[p].second, pairs[p].first) = v;
    }
    if (rs.rotated) {
      // rotate moments back: omega(z z^T) = V omega(w w^T) V^T
      std::vector<double> diag(n);
      for (std::size_t i = 0; i < n; ++i) diag[i] = second(i, i);
      second = sandwich_diag(rs.basis, diag);
      // first moments vanish by parity in the rotated frame
    }
    mm.first = std::move(first);
    mm.second = std::move(second);
  }
  return mm;
}

std::vector<double> overlap_moments_quadrature(
    const BoltzmannSpec& spec, std::size_t max_power,
    const QuadratureSettings& settings) {
  spec.validate();
  if (spec.n > settings.max_n)
    throw ArgumentError("overlap_moments_quadrature: system too large");
  if (max_power < 1 || max_power > 6)
    throw ArgumentError("overlap_moments_quadrature: max_power must be 1..6");
  const std::size_t n = spec.n;

  // all monomial multisets of degree 1..max_power over n coordinates
  std::vector<std::vector<std::size_t>> monomials;
  std::map<std::vector<std::size_t>, std::size_t> index;
  std::vector<std::size_t> stack;
  auto add_level = [&](auto&& self, std::size_t first, std::size_t depth,
                       std::size_t target) -> void {
    if (depth == target) {
      if (index.emplace(stack, monomials.size()).second) monomials.push_back(stack);
      return;
    }
    for (std::size_t i = first; i < n; ++i) {
      stack.push_back(i);
      self(self, i, depth + 1, target);
      stack.pop_back();
    }
  };
  for (std::size_t k = 1; k <= max_power; ++k) add_level(add_level, 0, 0, k);

  const double lm = lambda_max_pos(spec);
  const double ln = linear_norm_of(spec);
  const double box_radius =
      envelope_radius_with(spec, lm, ln, settings.tail_log, false);
  double shift = -1e300;
  for (int i = 1; i <= 512; ++i)
    shift = std::max(shift,
                     envelope_with(spec, lm, ln, box_radius * i / 512.0, false));
  std::vector<double> lo(n, -box_radius), hi(n, box_radius);

  const std::size_t n_vals = 1 + monomials.size();
  auto f = [&](std::span<const double> z, std::span<double> out) {
    const double w = std::exp(spec.exponent(z) - 0.5 * norm2(z) - shift);
    out[0] = w;
    for (std::size_t m = 0; m < monomials.size(); ++m) {
      double v = w;
      for (std::size_t i : monomials[m]) v *= z[i];
      out[1 + m] = v;
    }
  };

  TensorQuadratureOptions topts;
  topts.rel_tol = settings.rel_tol;
  topts.order = settings.order;
  topts.initial_panels = settings.initial_panels;
  topts.max_doublings = settings.max_doublings;
  std::vector<double> raw = integrate_box(n, lo, hi, n_vals, f, topts, nullptr);

  // Omega(q12^k) = N^{-k} sum over ordered tuples of omega(monomial)^2
  std::vector<double> result(max_power, 0.0);
  for (std::size_t k = 1; k <= max_power; ++k) {
    std::vector<std::size_t> tuple(k, 0);
    double acc = 0.0;
    while (true) {
      auto key = tuple;
      std::sort(key.begin(), key.end());
      const double w = raw[1 + index.at(key)] / raw[0];
      acc += w * w;
      std::size_t d = 0;
      for (; d < k; ++d) {
        if (++tuple[d] < n) break;
        tuple[d] = 0;
      }
      if (d == k) break;
    }
    result[k - 1] = acc / std::pow(static_cast<double>(n), static_cast<double>(k));
  }
  return result;
}

// ---------------------------------------------------------------------------
// radial-spherical Monte Carlo backend

namespace {

struct RadialGrid {
  std::vector<double> r, w;       // Gauss-Legendre points/weights on [0, rmax]
  std::vector<double> base_log;   // log chi density + isotropic terms - shift
  double shift = 0.0;
};

RadialGrid make_radial_grid(const BoltzmannSpec& spec,
                            const RadialMcSettings& settings) {
  if (!spec.single_full_group())
    throw ArgumentError(
        "radial-spherical sampling needs a single full-range quartic group");
  const auto& g = spec.groups[0];
  const double lm = lambda_max_pos(spec);
  const double ln = linear_norm_of(spec);
  const double r_max =
      envelope_radius_with(spec, lm, ln, settings.tail_log, true);

  RadialGrid grid;
  composite_gl_points(0.0, r_max, 1, settings.radial_points, grid.r, grid.w);

  double shift = -1e300;
  for (int i = 1; i <= 1024; ++i)
    shift = std::max(shift, envelope_with(spec, lm, ln, r_max * i / 1024.0, true));
  grid.shift = shift;

  grid.base_log.resize(grid.r.size());
  for (std::size_t i = 0; i < grid.r.size(); ++i) {
    const double r = grid.r[i];
    const double r2 = r * r;
    grid.base_log[i] =
        log_chi_density(spec.n, r) + g.c2 * r2 + g.c4 * r2 * r2 - shift;
  }
  return grid;
}

std::vector<double> unit_direction(CounterRng& rng, std::size_t n) {
  std::vector<double> u(n);
  double s = 0.0;
  do {
    for (auto& x : u) x = rng.next_normal();
    s = std::sqrt(norm2(u));
  } while (s < 1e-12);
  for (auto& x : u) x /= s;
  return u;
}

}  // namespace

MeasureMoments measure_radial_mc(const BoltzmannSpec& spec,
                                 const CounterRng& directions,
                                 const RadialMcSettings& settings,
                                 bool want_moments) {
  spec.validate();
  const std::size_t n = spec.n;
  const std::size_t m_dirs = settings.n_directions;
  if (m_dirs < 1) throw ArgumentError("measure_radial_mc: need directions");
  RadialGrid grid = make_radial_grid(spec, settings);
  const std::size_t n_r = grid.r.size();

  CounterRng rng = directions;
  RunningStats z_stats;
  std::vector<double> vsum(n, 0.0);
  Matrix msum(n);
  double zsum = 0.0;

  for (std::size_t m = 0; m < m_dirs; ++m) {
    const auto u = unit_direction(rng, n);
    const double a = spec.coupling.quadratic_form(u);
    const double b = spec.linear.empty() ? 0.0 : dot(spec.linear, u);
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n_r; ++i) {
      const double r = grid.r[i];
      const double wgt =
          grid.w[i] * std::exp(grid.base_log[i] + a * r * r + b * r);
      s0 += wgt;
      if (want_moments) {
        s1 += wgt * r;
        s2 += wgt * r * r;
      }
    }
    if (!std::isfinite(s0))
      throw NumericError("measure_radial_mc: non-finite intermediate");
    z_stats.add(s0);
    if (want_moments) {
      zsum += s0;
      for (std::size_t i = 0; i < n; ++i) {
        vsum[i] += s1 * u[i];
        for (std::size_t j = 0; j < n; ++j) msum(i, j) += s2 * u[i] * u[j];
      }
    }
  }

  const double mean = z_stats.mean();
  if (!(mean > 0.0))
    throw NumericError("measure_radial_mc: vanishing partition estimate");
  const double var_of_mean =
      z_stats.variance() / static_cast<double>(z_stats.count());

  MeasureMoments mm;
  mm.shift = grid.shift;
  mm.z_shifted_mean = mean;
  mm.z_shifted_var = z_stats.variance();
  // plug-in log with second-order bias correction
  mm.log_z = grid.shift + std::log(mean) + var_of_mean / (2.0 * mean * mean);
  mm.log_z_std_error = std::sqrt(var_of_mean) / mean;
  mm.evaluations = m_dirs * n_r;
  if (want_moments) {
    mm.has_moments = true;
    mm.first.resize(n);
    for (std::size_t i = 0; i < n; ++i) mm.first[i] = vsum[i] / zsum;
    mm.second = Matrix(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) mm.second(i, j) = msum(i, j) / zsum;
  }
  return mm;
}

RadialReplicaData radial_replica_data(const BoltzmannSpec& spec,
                                      const CounterRng& directions,
                                      const RadialMcSettings& settings,
                                      std::size_t max_power) {
  spec.validate();
  const std::size_t n = spec.n;
  const std::size_t m_dirs = settings.n_directions;
  RadialGrid grid = make_radial_grid(spec, settings);
  const std::size_t n_r = grid.r.size();

  RadialReplicaData data;
  data.n = n;
  data.n_directions = m_dirs;
  data.max_power = max_power;
  data.directions.resize(m_dirs * n);
  data.radial_sums.assign(m_dirs * (max_power + 1), 0.0);

  CounterRng rng = directions;
  for (std::size_t m = 0; m < m_dirs; ++m) {
    const auto u = unit_direction(rng, n);
    std::copy(u.begin(), u.end(), data.directions.begin() + m * n);
    const double a = spec.coupling.quadratic_form(u);
    const double b = spec.linear.empty() ? 0.0 : dot(spec.linear, u);
    double* sums = &data.radial_sums[m * (max_power + 1)];
    for (std::size_t i = 0; i < n_r; ++i) {
      const double r = grid.r[i];
      double wgt = grid.w[i] * std::exp(grid.base_log[i] + a * r * r + b * r);
      for (std::size_t k = 0; k <= max_power; ++k) {
        sums[k] += wgt;
        wgt *= r;
      }
    }
  }
  return data;
}

std::vector<double> overlap_moments_radial(const RadialReplicaData& a,
                                           const RadialReplicaData& b) {
  if (a.n != b.n || a.max_power != b.max_power)
    throw ArgumentError("overlap_moments_radial: replica mismatch");
  if (a.n_directions < 2 || b.n_directions < 2)
    throw ArgumentError("overlap_moments_radial: need at least 2 directions");
  const std::size_t n = a.n;
  const std::size_t kmax = a.max_power;
  const std::size_t stride = kmax + 1;
  const std::size_t ma_dirs = a.n_directions;
  const std::size_t mb_dirs = b.n_directions;

  double za = 0.0, zb = 0.0;
  for (std::size_t m = 0; m < ma_dirs; ++m) za += a.radial_sums[m * stride];
  for (std::size_t m = 0; m < mb_dirs; ++m) zb += b.radial_sums[m * stride];
  if (!(za > 0.0) || !(zb > 0.0))
    throw NumericError("overlap_moments_radial: vanishing normalization");

  // row sums g_a[k][m] = sum_m' S_b^(k)(m') (u_m . u'_m')^k and vice versa;
  // the full pairwise sum is X_k = sum_m S_a^(k)(m) g_a[k][m]
  std::vector<std::vector<double>> ga(kmax), gb(kmax);
  for (std::size_t k = 0; k < kmax; ++k) {
    ga[k].assign(ma_dirs, 0.0);
    gb[k].assign(mb_dirs, 0.0);
  }
  if (kmax <= 2) {
    // contraction shortcut: (u.u') collapses against weighted direction
    // sums, (u.u')^2 against weighted outer-product sums
    std::vector<double> va(n, 0.0), vb(n, 0.0);
    for (std::size_t m = 0; m < ma_dirs; ++m)
      for (std::size_t i = 0; i < n; ++i)
        va[i] += a.radial_sums[m * stride + 1] * a.directions[m * n + i];
    for (std::size_t m = 0; m < mb_dirs; ++m)
      for (std::size_t i = 0; i < n; ++i)
        vb[i] += b.radial_sums[m * stride + 1] * b.directions[m * n + i];
    for (std::size_t m = 0; m < ma_dirs; ++m)
      ga[0][m] = dot(std::span<const double>(&a.directions[m * n], n), vb);
    for (std::size_t m = 0; m < mb_dirs; ++m)
      gb[0][m] = dot(std::span<const double>(&b.directions[m * n], n), va);
    if (kmax == 2) {
      Matrix qa(n), qb(n);
      for (std::size_t m = 0; m < ma_dirs; ++m) {
        const double* u = &a.directions[m * n];
        const double s2 = a.radial_sums[m * stride + 2];
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) qa(i, j) += s2 * u[i] * u[j];
      }
      for (std::size_t m = 0; m < mb_dirs; ++m) {
        const double* u = &b.directions[m * n];
        const double s2 = b.radial_sums[m * stride + 2];
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) qb(i, j) += s2 * u[i] * u[j];
      }
      for (std::size_t m = 0; m < ma_dirs; ++m) {
        const double* u = &a.directions[m * n];
        ga[1][m] = qb.quadratic_form(std::span<const double>(u, n));
      }
      for (std::size_t m = 0; m < mb_dirs; ++m) {
        const double* u = &b.directions[m * n];
        gb[1][m] = qa.quadratic_form(std::span<const double>(u, n));
      }
    }
  } else {
    for (std::size_t p = 0; p < ma_dirs; ++p) {
      const double* ua = &a.directions[p * n];
      const double* sa = &a.radial_sums[p * stride];
      for (std::size_t q = 0; q < mb_dirs; ++q) {
        const double* ub = &b.directions[q * n];
        const double* sb = &b.radial_sums[q * stride];
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c += ua[i] * ub[i];
        double cp = 1.0;
        for (std::size_t k = 1; k <= kmax; ++k) {
          cp *= c;
          ga[k - 1][p] += sb[k] * cp;
          gb[k - 1][q] += sa[k] * cp;
        }
      }
    }
  }

  // The plug-in ratio X/(za zb) carries an O(1/M) small-sample bias from
  // the correlation between X and the normalizations. Bilateral
  // leave-one-out jackknife removes it to O(1/M^2): debias over the A
  // directions, over the B directions, and combine.
  std::vector<double> out(kmax);
  for (std::size_t k = 1; k <= kmax; ++k) {
    double x = 0.0;
    for (std::size_t m = 0; m < ma_dirs; ++m)
      x += a.radial_sums[m * stride + k] * ga[k - 1][m];
    const double scale =
        std::pow(static_cast<double>(n), static_cast<double>(k));
    const double v = x / (za * zb * scale);

    double mean_loo_a = 0.0;
    for (std::size_t m = 0; m < ma_dirs; ++m) {
      const double x_m = x - a.radial_sums[m * stride + k] * ga[k - 1][m];
      const double za_m = za - a.radial_sums[m * stride];
      mean_loo_a += x_m / (za_m * zb * scale);
    }
    mean_loo_a /= static_cast<double>(ma_dirs);
    const double v_ja = static_cast<double>(ma_dirs) * v -
                        static_cast<double>(ma_dirs - 1) * mean_loo_a;

    double mean_loo_b = 0.0;
    for (std::size_t m = 0; m < mb_dirs; ++m) {
      const double x_m = x - b.radial_sums[m * stride + k] * gb[k - 1][m];
      const double zb_m = zb - b.radial_sums[m * stride];
      mean_loo_b += x_m / (za * zb_m * scale);
    }
    mean_loo_b /= static_cast<double>(mb_dirs);
    const double v_jb = static_cast<double>(mb_dirs) * v -
                        static_cast<double>(mb_dirs - 1) * mean_loo_b;

    out[k - 1] = v_ja + v_jb - v;
  }
  return out;
}

// ---------------------------------------------------------------------------
// importance-sampling backend

MeasureMoments measure_importance(const BoltzmannSpec& spec,
                                  const CounterRng& stream,
                                  const ImportanceSettings& settings,
                                  bool want_moments) {
  spec.validate();
  const std::size_t n = spec.n;
  const std::size_t m_samples = settings.n_samples;
  if (m_samples < 2) throw ArgumentError("measure_importance: need samples");

  CounterRng rng = stream;
  std::vector<double> zs(m_samples * n);
  std::vector<double> le(m_samples);
  double shift = -1e300;
  std::vector<double> z(n);
  for (std::size_t s = 0; s < m_samples; ++s) {
    for (std::size_t i = 0; i < n; ++i) z[i] = rng.next_normal();
    std::copy(z.begin(), z.end(), zs.begin() + s * n);
    le[s] = spec.exponent(z);
    shift = std::max(shift, le[s]);
  }

  RunningStats w_stats;
  std::vector<double> vsum(n, 0.0);
  Matrix msum(n);
  double wsum = 0.0;
  for (std::size_t s = 0; s < m_samples; ++s) {
    const double w = std::exp(le[s] - shift);
    w_stats.add(w);
    if (want_moments) {
      wsum += w;
      const double* p = &zs[s * n];
      for (std::size_t i = 0; i < n; ++i) {
        vsum[i] += w * p[i];
        for (std::size_t j = i; j < n; ++j) msum(i, j) += w * p[i] * p[j];
      }
    }
  }

  const double mean = w_stats.mean();
  const double var_of_mean =
      w_stats.variance() / static_cast<double>(w_stats.count());
  MeasureMoments mm;
  mm.shift = shift;
  mm.z_shifted_mean = mean;
  mm.z_shifted_var = w_stats.variance();
  mm.log_z = shift + std::log(mean) + var_of_mean / (2.0 * mean * mean);
  mm.log_z_std_error = std::sqrt(var_of_mean) / mean;
  mm.evaluations = m_samples;
  if (want_moments) {
    mm.has_moments = true;
    mm.first.resize(n);
    mm.second = Matrix(n);
    for (std::size_t i = 0; i < n; ++i) {
      mm.first[i] = vsum[i] / wsum;
      for (std::size_t j = i; j < n; ++j) {
        const double v = msum(i, j) / wsum;
        mm.second(i, j) = v;
        mm.second(j, i) = v;
      }
    }
  }
  return mm;
}

}  // namespace gsg
