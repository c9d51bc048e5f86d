#ifndef GSG_TYPES_HPP
#define GSG_TYPES_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "gsg/errors.hpp"
#include "gsg/linalg.hpp"

namespace gsg {

// (beta, lambda, h, N) plus the Z vs Z' switch of the diagonal-removed
// model. beta = 0 is accepted by the sampling estimators (free-field
// reference runs); the closed forms impose beta > 0 themselves.
struct ModelParams {
  double beta = 1.0;        // inverse temperature
  double lambda = 0.0;      // variance-shift parameter
  double h = 0.0;           // external field
  std::size_t n_sites = 1;  // N >= 1
  bool diagonal_removed = false;

  void validate() const {
    if (!(beta >= 0.0)) throw ArgumentError("ModelParams: beta must be >= 0");
    if (n_sites < 1) throw ArgumentError("ModelParams: n_sites must be >= 1");
  }
};

// N x N matrix of i.i.d. standard normal couplings, reproducible from seed.
struct DisorderSample {
  std::size_t n = 0;
  Matrix couplings;
  std::uint64_t seed = 0;
};

struct SpinConfig {
  std::vector<double> z;

  std::size_t size() const { return z.size(); }
  void validate() const {
    for (double x : z)
      if (!std::isfinite(x))
        throw ArgumentError("SpinConfig: entries must be finite");
  }
};

enum class LogPartitionMethod { quadrature, monte_carlo };

struct LogPartitionResult {
  double log_z = 0.0;
  LogPartitionMethod method = LogPartitionMethod::quadrature;
  double std_error = 0.0;  // zero iff method == quadrature
};

enum class McScheme { quadrature_if_small, radial_mc };

// Sampling configuration shared by all quenched-average estimators.
struct McConfig {
  std::size_t n_disorder = 100;
  std::size_t n_directions = 2048;  // spherical MC directions per sample
  std::size_t radial_points = 512;  // Gauss-Legendre points on [0, r_max]
  std::uint64_t seed = 1;
  McScheme scheme = McScheme::quadrature_if_small;
  std::size_t quadrature_max_n = 3;
  unsigned threads = 0;  // 0 = hardware concurrency; never affects results

  void validate() const {
    if (n_disorder < 1 || n_directions < 1 || radial_points < 1)
      throw ArgumentError("McConfig: all counts must be >= 1");
  }
};

// (mean, standard error, sample count); the error is the between-sample
// standard error, so per-sample MC noise is folded in automatically.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

// Streaming mean/variance accumulator (Welford).
class RunningStats {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  }
  double std_error() const {
    return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }
  McEstimate estimate() const { return {mean(), std_error(), n_}; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace gsg

#endif
