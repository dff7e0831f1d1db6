#include "arqlink/optimize.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace arqlink {

double maximize_unimodal_log(const std::function<double(double)>& f,
                             double beta_lo, double beta_hi, double rel_tol) {
  constexpr int kScanPoints = 128;
  const double xlo = std::log(beta_lo);
  const double xhi = std::log(beta_hi);
  int best = 0;
  double best_val = -1.0;
  std::vector<double> xs(kScanPoints);
  for (int i = 0; i < kScanPoints; ++i) {
    xs[i] = xlo + (xhi - xlo) * i / (kScanPoints - 1);
    const double v = f(std::exp(xs[i]));
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = xs[best > 0 ? best - 1 : 0];
  double b = xs[best + 1 < kScanPoints ? best + 1 : kScanPoints - 1];
  const double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(std::exp(c));
  double fd = f(std::exp(d));
  while (b - a > rel_tol) {  // log-space width == relative width in beta
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(std::exp(d));
    }
  }
  double x = 0.5 * (a + b);
  double bx = std::exp(x);
  // the mode can sit at the feasibility boundary itself
  if (f(beta_hi) >= f(bx)) return beta_hi;
  return bx;
}

namespace {

double drop_probability(double beta, const NetworkParams& net, int m) {
  const double p = outage_probability(beta, net);
  return detail::pow_uint(p, static_cast<unsigned>(m) + 1u);
}

}  // namespace

double beta_star(const ProtocolParams& proto, const NetworkParams& net) {
  return detail::constraint_boundary_beta(proto, net);
}

int m_star(double epsilon, const NetworkParams& net, int m_max) {
  if (m_max < 1) throw std::invalid_argument("m_star: m_max must be >= 1");
  int best_m = 0;
  double best_t = -1.0;
  for (int m = 0; m <= m_max; ++m) {
    const ProtocolParams proto(m, epsilon);
    const double t = throughput_epsilon_form(beta_star(proto, net), proto);
    if (t > best_t) {
      best_t = t;
      best_m = m;
    }
  }
  return best_m;
}

Optimum optimize_throughput(double epsilon, const NetworkParams& net,
                            int m_max) {
  const int m = m_star(epsilon, net, m_max);
  const ProtocolParams proto(m, epsilon);
  const double beta = beta_star(proto, net);
  const LinkPoint point(beta, net, proto);
  return Optimum{beta, m, throughput(point),
                 epsilon - drop_probability(beta, net, m)};
}

Optimum optimize_ee_fixed_m(double epsilon, int m, const NetworkParams& net,
                            const PowerModel& pm) {
  const ProtocolParams proto(m, epsilon);
  const double beta_max = beta_star(proto, net);
  const auto ee = [&](double beta) {
    return energy_efficiency(LinkPoint(beta, net, proto), pm);
  };
  const double beta = maximize_unimodal_log(ee, beta_max * 1e-9, beta_max, 1e-8);
  return Optimum{beta, m, ee(beta), epsilon - drop_probability(beta, net, m)};
}

Optimum optimize_ee(double epsilon, const NetworkParams& net,
                    const PowerModel& pm, int m_max) {
  if (m_max < 1) throw std::invalid_argument("optimize_ee: m_max must be >= 1");
  Optimum best{0.0, 0, -1.0, 0.0};
  for (int m = 0; m <= m_max; ++m) {
    const Optimum cand = optimize_ee_fixed_m(epsilon, m, net, pm);
    if (cand.objective > best.objective) best = cand;
  }
  return best;
}

double mast_derivative_diagnostic(double epsilon, int m,
                                  const NetworkParams& net) {
  const ProtocolParams proto(m, epsilon);
  const double eps = epsilon;
  const double u = detail::one_minus_eps_root(eps, m);
  const double q = 1.0 - u;  // eps^{1/(m+1)}
  const double gain = (1.0 - eps) - eps * u * (m + 1);
  const double bs = beta_star(proto, net);
  const double log_b1 = std::log1p(bs);
  const double log_eps = std::log(eps);
  const double log_u = std::log(u);
  const double m1sq = static_cast<double>(m + 1) * (m + 1);

  const double term1 = net.alpha * q * bs * (1.0 - eps) * (1.0 - eps) *
                       log_eps / (2.0 * m1sq * (bs + 1.0) * gain * log_u);
  const double term2 =
      q * (1.0 - eps) * (1.0 - eps) * log_eps * log_b1 / (m1sq * gain);
  const double term3 = log_b1 / (gain * gain) * (1.0 - eps) * u * (1.0 - eps) *
                       (eps * q * log_eps / (m + 1) + eps * u);
  return term1 + term2 + term3;
}

ExtremeOptimum maximize_extreme_throughput(const NetworkParams& net) {
  const auto f = [&](double beta) { return throughput_extreme(beta, net); };
  const double beta = maximize_unimodal_log(f, 1e-9, 1e12, 1e-10);
  return ExtremeOptimum{beta, f(beta)};
}

}  // namespace arqlink
