// Monte Carlo oracle: Poisson interferer fields with Rayleigh fading for
// outage, and the capped-retransmission episode process for attempt counts,
// success, throughput and energy efficiency.
#pragma once

#include <cstdint>
#include <optional>

#include "arqlink/model.hpp"
#include "arqlink/rng.hpp"

namespace arqlink::mc {

struct McConfig {
  std::uint64_t n_samples;  ///< independent episodes, >= 1
  double sim_radius;        ///< field truncation radius, m, > r0
  std::uint64_t seed;       ///< replay seed
  int n_threads;            ///< worker count; results identical for any value

  McConfig(std::uint64_t n_samples, double sim_radius, std::uint64_t seed,
           int n_threads = 1);
};

struct McEstimate {
  double mean;
  double std_error;
  std::uint64_t n_effective;
};

/// Per-episode retransmission outcomes aggregated over one run.
struct RetransmissionStats {
  McEstimate success_prob;
  McEstimate attempts_mean_all;
  /// Mean attempts over successful episodes only; empty when no episode
  /// succeeded.
  std::optional<McEstimate> attempts_mean_given_success;
  McEstimate drop_prob;
};

/// Truncation radius keeping the far-field share of the outage exponent
/// below 0.1%, floored at 100 * r0.
double default_sim_radius(double beta, const NetworkParams& net);

/// One SIR draw: fresh Poisson field on the disk of the given radius,
/// unit-mean exponential fading on every path. Zero interferers yield +inf.
double sample_sir(const NetworkParams& net, CounterRng& rng,
                  double sim_radius);

/// Empirical P[SIR <= beta].
McEstimate estimate_outage(double beta, const NetworkParams& net,
                           const McConfig& cfg);

/// Capped-retransmission episodes: up to m+1 attempts, each with a fresh
/// field and fresh fading; the packet drops after m+1 failures.
RetransmissionStats simulate_retransmissions(double beta,
                                             const NetworkParams& net, int m,
                                             const McConfig& cfg);

/// Ratio-of-means throughput estimate, standard error from 20 batch means.
McEstimate estimate_throughput(const LinkPoint& point, const McConfig& cfg);

/// estimate_throughput scaled by the deterministic power cost.
McEstimate estimate_ee(const LinkPoint& point, const PowerModel& pm,
                       const McConfig& cfg);

}  // namespace arqlink::mc
