// Closed-form link model for an interference-limited link with capped
// retransmissions: outage under a Poisson field of interferers, attempt
// counts, throughput and energy efficiency, plus the analytic second
// derivatives used by the optimizers.
#pragma once

#include <stdexcept>

namespace arqlink {

/// Physical/geometric scenario of the reference link.
struct NetworkParams {
  double lambda;       ///< interferer density, nodes per m^2, > 0
  double alpha;        ///< path-loss exponent, > 2
  double r0;           ///< reference link distance, m, > 0
  double power_ratio;  ///< own over interferer transmit power, > 0

  NetworkParams(double lambda, double alpha, double r0,
                double power_ratio = 1.0);
};

/// Retransmission protocol: a packet gets m+1 attempts, and the drop
/// probability must stay below epsilon.
struct ProtocolParams {
  int m;           ///< retransmission cap, >= 0
  double epsilon;  ///< drop-probability requirement, in (0, 1)

  ProtocolParams(int m, double epsilon);
};

/// Circuit power model. The amplifier draw is beta/delta, keeping beta as a
/// dimensionless transmit-power proxy; p_tx/p_rx are in watts.
struct PowerModel {
  double delta;  ///< amplifier drain efficiency, in (0, 1]
  double p_tx;   ///< transmission circuit power, W
  double p_rx;   ///< reception circuit power, W

  PowerModel(double delta, double p_tx, double p_rx);

  double circuit_power() const { return p_tx + p_rx; }
};

/// Reference power numbers (delta = 0.35, 97.9 mW Tx, 112.2 mW Rx).
PowerModel reference_power_model();

/// One operating point of the link: SIR threshold plus scenario/protocol.
struct LinkPoint {
  double beta;  ///< SIR decoding threshold, linear scale, > 0
  NetworkParams net;
  ProtocolParams proto;

  LinkPoint(double beta, NetworkParams net, ProtocolParams proto);
};

/// Geometry constant k = pi r0^2 Gamma(1-2/alpha) Gamma(1+2/alpha).
double geometry_constant_k(const NetworkParams& net);

/// Per-attempt outage probability 1 - exp(-k lambda (beta/ratio)^{2/alpha}).
double outage_probability(double beta, const NetworkParams& net);

/// Probability the packet is decoded within m+1 attempts, 1 - P_out^{m+1}.
double success_probability(const LinkPoint& point);

/// Mean attempt count conditioned on eventual success, parameterized by the
/// drop requirement epsilon with the constraint active (P_out = eps^{1/(m+1)}).
/// Value in [1, m+1].
double attempts_mean_exact(const ProtocolParams& proto);

/// Unconditional mean attempt count at the constraint boundary,
/// (1-eps)/(1-eps^{1/(m+1)}) = sum_{n=0}^{m} P_out^n. Upper-bounds
/// attempts_mean_exact.
double attempts_mean_approx(const ProtocolParams& proto);

/// Relative gap |approx - exact| / exact between the two attempt means.
double approximation_error(const ProtocolParams& proto);

/// Mean attempt count conditioned on success as a function of the raw
/// per-attempt outage probability. Identical to attempts_mean_exact under
/// eps = p_out^{m+1}.
double attempts_mean_extreme(double p_out, int m);

/// Link throughput log2(1+beta) * P_suc / E[attempts | success], bits/s/Hz.
double throughput(const LinkPoint& point);

/// Throughput at the constraint boundary as a function of (beta, eps, m)
/// only; equals throughput() whenever P_out(beta) = eps^{1/(m+1)}.
double throughput_epsilon_form(double beta, const ProtocolParams& proto);

/// Single-attempt throughput log2(1+beta) * (1 - P_out). Covers both the
/// m = 0 and the m -> infinity regimes, which coincide.
double throughput_extreme(double beta, const NetworkParams& net);

/// Per-attempt power cost beta/delta + p_tx + p_rx used as the energy
/// efficiency denominator.
double total_power(double beta, const PowerModel& pm);

/// Energy efficiency throughput(point) / total_power(beta), bits/s/Hz/W.
double energy_efficiency(const LinkPoint& point, const PowerModel& pm);

/// Energy efficiency at the constraint boundary: throughput_epsilon_form
/// over the power cost pinned at the boundary threshold beta*(eps, m).
double ee_epsilon_form(double beta, const ProtocolParams& proto,
                       const NetworkParams& net, const PowerModel& pm);

/// Analytic d^2/dbeta^2 of throughput_epsilon_form. Strictly negative.
double d2_throughput_dbeta2(double beta, const ProtocolParams& proto);

/// Analytic d^2/dbeta^2 of ee_epsilon_form. Strictly negative.
double d2_ee_dbeta2(double beta, const ProtocolParams& proto,
                    const NetworkParams& net, const PowerModel& pm);

namespace detail {

/// 1 - eps^{1/(m+1)}, evaluated via expm1 so large m stays accurate.
double one_minus_eps_root(double epsilon, int m);

/// x^n by binary exponentiation; exact for n = 1.
double pow_uint(double x, unsigned n);

/// SIR threshold that makes the drop constraint active, shared between the
/// epsilon-form energy expressions and the optimizer's closed form.
double constraint_boundary_beta(const ProtocolParams& proto,
                                const NetworkParams& net);

}  // namespace detail

}  // namespace arqlink
