#ifndef GSG_MODEL_HPP
#define GSG_MODEL_HPP

#include <cstdint>

#include "gsg/measure.hpp"
#include "gsg/types.hpp"

namespace gsg {

// Draws the n x n coupling matrix from its own counter-based stream; the
// stored seed alone reproduces the matrix bit-for-bit.
DisorderSample make_disorder(std::size_t n, std::uint64_t seed);

// H = -(2N)^{-1/2} sum_{ij} J_ij z_i z_j - h sum_i z_i, or the
// diagonal-removed variant -N^{-1/2} sum_{i<j} (J_ij+J_ji)/sqrt(2) z_i z_j
// - h sum_i z_i.
double hamiltonian(const SpinConfig& z, const DisorderSample& j,
                   const ModelParams& p);

// -beta H - beta^2/(4N) (sum z^2)^2 + lambda/2 sum z^2; tends to -inf as
// |z| grows, so exp() of it is integrable against the Gaussian base.
double regularized_exponent(const SpinConfig& z, const DisorderSample& j,
                            const ModelParams& p);

// (1/N) sum_i z1_i z2_i; not bounded by 1 for Gaussian spins.
double overlap(const SpinConfig& z1, const SpinConfig& z2);

// Symmetric matrix S with z.Sz equal to the coupling part of -H (no beta,
// no field): S = sym(J)/sqrt(2N), or the zero-diagonal variant for Z'.
Matrix coupling_form(const DisorderSample& j, const ModelParams& p);

// Boltzmann weight of Eq-style regularized partition function as a
// BoltzmannSpec instance (beta folded into the coupling and field).
BoltzmannSpec model_measure(const DisorderSample& j, const ModelParams& p);

struct QuadratureConfig {
  std::size_t max_n = 3;
  double rel_tol = 1e-11;
  std::size_t order = 15;
};

// Deterministic log Z for N <= max_n: spectral rotation plus adaptive
// tensor quadrature in eigen-coordinates at h = 0, plain truncated
// tensor-grid quadrature when h != 0.
LogPartitionResult log_partition_quadrature(const DisorderSample& j,
                                            const ModelParams& p,
                                            const QuadratureConfig& cfg = {});

// Stratified radial-spherical Monte Carlo estimate of log Z with a
// delta-method standard error (directions shared across the radial grid).
LogPartitionResult log_partition_mc(const DisorderSample& j,
                                    const ModelParams& p, const McConfig& cfg,
                                    std::uint64_t direction_stream = 0);

}  // namespace gsg

#endif
