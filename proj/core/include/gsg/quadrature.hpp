#ifndef GSG_QUADRATURE_HPP
#define GSG_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gsg {

// Gauss-Legendre nodes/weights on [-1, 1]; cached per order.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(std::size_t order);

// Composite rule on [a, b] with `panels` equal panels of the given order.
void composite_gl_points(double a, double b, std::size_t panels,
                         std::size_t order, std::vector<double>& points,
                         std::vector<double>& weights);

// Adaptive 1D integration by panel doubling until successive composite
// Gauss-Legendre values agree to rel_tol. Throws NumericError when the
// refinement cap is reached without convergence.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double rel_tol = 1e-12, std::size_t order = 15,
                    std::size_t initial_panels = 2,
                    std::size_t max_doublings = 14);

struct TensorQuadratureOptions {
  double rel_tol = 1e-11;
  std::size_t order = 15;
  std::size_t initial_panels = 2;
  std::size_t max_doublings = 7;
  std::size_t max_evaluations = 400'000'000;
};

// Integrates a vector-valued integrand over the box [lo_i, hi_i]^dim by
// panel-doubled composite Gauss-Legendre in every dimension (dim <= 3).
// f(z, out) writes n_values integrand values at the point z.
// Convergence is judged on every component relative to the scale of
// component 0 (the partition-function slot, strictly positive here).
std::vector<double> integrate_box(
    std::size_t dim, std::span<const double> lo, std::span<const double> hi,
    std::size_t n_values,
    const std::function<void(std::span<const double>, std::span<double>)>& f,
    const TensorQuadratureOptions& opts = {},
    std::size_t* evaluations_out = nullptr);

// Plain trapezoid rule on n uniformly spaced points (used by test oracles
// and the sum-rule t-integral).
double trapezoid_uniform(std::span<const double> values, double a, double b);

}  // namespace gsg

#endif
