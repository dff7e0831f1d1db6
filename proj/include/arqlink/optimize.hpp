// Constrained optimization of link throughput and energy efficiency over
// the SIR threshold and the retransmission cap.
#pragma once

#include <functional>

#include "arqlink/model.hpp"

namespace arqlink {

/// Derivative-free maximizer for a unimodal objective on [lo, hi]:
/// geometric bracketing scan followed by golden-section refinement in
/// log space. rel_tol is the relative tolerance on the returned argument.
double maximize_unimodal_log(const std::function<double(double)>& f,
                             double lo, double hi, double rel_tol);

/// Solution of one constrained optimization run.
struct Optimum {
  double beta_star;           ///< optimal SIR threshold
  int m_star;                 ///< optimal retransmission cap
  double objective;           ///< T* in bits/s/Hz or EE* in bits/s/Hz/W
  double constraint_residual; ///< epsilon - P_out^{1+m} at the optimum
};

/// Closed-form threshold that makes the drop constraint active:
/// beta* = ratio * (-log(1 - eps^{1/(m+1)}) / (k lambda))^{alpha/2}.
double beta_star(const ProtocolParams& proto, const NetworkParams& net);

/// Retransmission cap maximizing the boundary throughput, found by a direct
/// sweep over m in [0, m_max]. Ties break toward smaller m.
int m_star(double epsilon, const NetworkParams& net, int m_max = 50);

/// Throughput problem: maximize T subject to P_out^{1+m} <= epsilon. The
/// constraint is active at the optimum.
Optimum optimize_throughput(double epsilon, const NetworkParams& net,
                            int m_max = 50);

/// Energy-efficiency problem at a fixed cap m: concave 1-D search for beta
/// on the feasible interval (0, beta*(epsilon, m)].
Optimum optimize_ee_fixed_m(double epsilon, int m, const NetworkParams& net,
                            const PowerModel& pm);

/// Energy-efficiency problem: the fixed-m search swept over m in [0, m_max].
Optimum optimize_ee(double epsilon, const NetworkParams& net,
                    const PowerModel& pm, int m_max = 50);

/// d/dm of the boundary throughput at continuous m (natural-log scale).
/// Sign diagnostic for m_star: positive below the optimum, negative above.
double mast_derivative_diagnostic(double epsilon, int m,
                                  const NetworkParams& net);

/// Unconstrained single-attempt optimum max_beta log2(1+beta)(1 - P_out),
/// shared by the m = 0 and m -> infinity extreme cases.
struct ExtremeOptimum {
  double beta;
  double value;
};
ExtremeOptimum maximize_extreme_throughput(const NetworkParams& net);

}  // namespace arqlink
