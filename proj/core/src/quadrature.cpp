#include "gsg/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "gsg/errors.hpp"

namespace gsg {

namespace {

GaussLegendreRule compute_gl(std::size_t n) {
  // Newton iteration on Legendre polynomials, nodes symmetric about 0.
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 -
                           (static_cast<double>(k) - 1.0) * p0) /
                          static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(std::size_t order) {
  static std::mutex mu;
  static std::map<std::size_t, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gl(order)).first;
  return it->second;
}

void composite_gl_points(double a, double b, std::size_t panels,
                         std::size_t order, std::vector<double>& points,
                         std::vector<double>& weights) {
  const auto& rule = gauss_legendre(order);
  points.clear();
  weights.clear();
  points.reserve(panels * order);
  weights.reserve(panels * order);
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double mid = lo + 0.5 * width;
    for (std::size_t k = 0; k < order; ++k) {
      points.push_back(mid + 0.5 * width * rule.nodes[k]);
      weights.push_back(0.5 * width * rule.weights[k]);
    }
  }
}

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double rel_tol, std::size_t order,
                    std::size_t initial_panels, std::size_t max_doublings) {
  std::vector<double> pts, wts;
  double prev = 0.0;
  bool have_prev = false;
  std::size_t panels = initial_panels;
  for (std::size_t level = 0; level <= max_doublings; ++level) {
    composite_gl_points(a, b, panels, order, pts, wts);
    double acc = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) acc += wts[i] * f(pts[i]);
    if (have_prev &&
        std::abs(acc - prev) <= rel_tol * (std::abs(acc) + 1e-300))
      return acc;
    prev = acc;
    have_prev = true;
    panels *= 2;
  }
  throw NumericError("integrate_1d: no convergence after max panel doublings");
}

std::vector<double> integrate_box(
    std::size_t dim, std::span<const double> lo, std::span<const double> hi,
    std::size_t n_values,
    const std::function<void(std::span<const double>, std::span<double>)>& f,
    const TensorQuadratureOptions& opts, std::size_t* evaluations_out) {
  if (dim < 1 || dim > 3)
    throw ArgumentError("integrate_box: dim must be 1..3");
  std::size_t evals = 0;
  std::vector<double> prev, cur(n_values);
  std::vector<double> vals(n_values);
  bool have_prev = false;
  std::size_t panels = opts.initial_panels;

  for (std::size_t level = 0; level <= opts.max_doublings; ++level) {
    std::vector<std::vector<double>> pts(dim), wts(dim);
    for (std::size_t d = 0; d < dim; ++d)
      composite_gl_points(lo[d], hi[d], panels, opts.order, pts[d], wts[d]);

    const std::size_t m = pts[0].size();
    if (evals + static_cast<std::size_t>(std::pow(static_cast<double>(m), static_cast<double>(dim))) >
        opts.max_evaluations)
      throw NumericError("integrate_box: evaluation budget exhausted before convergence");

    std::fill(cur.begin(), cur.end(), 0.0);
    double z[3] = {0, 0, 0};
    if (dim == 1) {
      for (std::size_t i = 0; i < m; ++i) {
        z[0] = pts[0][i];
        f(std::span<const double>(z, 1), vals);
        ++evals;
        for (std::size_t v = 0; v < n_values; ++v) cur[v] += wts[0][i] * vals[v];
      }
    } else if (dim == 2) {
      for (std::size_t i = 0; i < m; ++i) {
        z[0] = pts[0][i];
        for (std::size_t j = 0; j < m; ++j) {
          z[1] = pts[1][j];
          f(std::span<const double>(z, 2), vals);
          ++evals;
          const double w = wts[0][i] * wts[1][j];
          for (std::size_t v = 0; v < n_values; ++v) cur[v] += w * vals[v];
        }
      }
    } else {
      for (std::size_t i = 0; i < m; ++i) {
        z[0] = pts[0][i];
        for (std::size_t j = 0; j < m; ++j) {
          z[1] = pts[1][j];
          const double wij = wts[0][i] * wts[1][j];
          for (std::size_t k = 0; k < m; ++k) {
            z[2] = pts[2][k];
            f(std::span<const double>(z, 3), vals);
            ++evals;
            const double w = wij * wts[2][k];
            for (std::size_t v = 0; v < n_values; ++v) cur[v] += w * vals[v];
          }
        }
      }
    }

    if (have_prev) {
      // component 0 sets the overall scale (the partition-function slot)
      const double scale0 = std::abs(cur[0]) + 1e-300;
      bool ok = true;
      for (std::size_t v = 0; v < n_values && ok; ++v) {
        const double tol = opts.rel_tol * (std::abs(cur[v]) + scale0);
        if (std::abs(cur[v] - prev[v]) > tol) ok = false;
      }
      if (ok) {
        if (evaluations_out) *evaluations_out = evals;
        return cur;
      }
    }
    prev = cur;
    have_prev = true;
    panels *= 2;
  }
  throw NumericError("integrate_box: no convergence after max panel doublings");
}

double trapezoid_uniform(std::span<const double> values, double a, double b) {
  const std::size_t n = values.size();
  if (n < 2) throw ArgumentError("trapezoid_uniform: need at least 2 values");
  const double h = (b - a) / static_cast<double>(n - 1);
  double acc = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < n; ++i) acc += values[i];
  return acc * h;
}

}  // namespace gsg
