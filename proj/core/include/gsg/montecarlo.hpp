#ifndef GSG_MONTECARLO_HPP
#define GSG_MONTECARLO_HPP

#include <cstdint>
#include <vector>

#include "gsg/model.hpp"
#include "gsg/types.hpp"

namespace gsg {

// Deterministic disorder sample from (seed, index); distinct indices give
// statistically independent matrices.
DisorderSample sample_disorder(std::size_t n, std::uint64_t seed,
                               std::uint64_t index);

// Per-sample log Z by quadrature (N <= quadrature_max_n under the
// quadrature_if_small scheme) or by the radial-spherical estimator.
LogPartitionResult sample_log_partition(const DisorderSample& j,
                                        const ModelParams& p,
                                        const McConfig& cfg,
                                        std::uint64_t direction_stream);

// A_N = (1/N) E log Z over cfg.n_disorder independent disorder samples.
// Samples that fail numerically are skipped and counted; more than 1%
// skips aborts the run.
McEstimate quenched_pressure(const ModelParams& p, const McConfig& cfg);

// Disorder average of Z itself; brackets the exact (1-lambda)^{-N/2}.
McEstimate annealed_mean_partition_mc(const ModelParams& p, const McConfig& cfg);

// E(Z'^2)/E^2(Z') with a delta-method error; the second moment uses two
// independent direction streams per sample so Z_a Z_b is unbiased for Z^2.
McEstimate second_moment_ratio_mc(const ModelParams& p, const McConfig& cfg);

// <q_12^k> for k = 1..max_power; two replicas share each disorder sample
// and use independent direction streams.
std::vector<McEstimate> replica_overlap_moments(const ModelParams& p,
                                                const McConfig& cfg,
                                                std::size_t max_power);

// N <(q_12 - q_bar*)^2> with q_bar* the RS optimum at (beta, lambda).
McEstimate xi_second_moment_mc(const ModelParams& p, const McConfig& cfg);

// gap = N A_N - N1 A_N1 - N2 A_N2 with three independent disorder
// streams; superadditivity demands gap >= 0 up to noise.
McEstimate superadditivity_check(std::size_t n1, std::size_t n2,
                                 const ModelParams& p, const McConfig& cfg);

}  // namespace gsg

#endif
