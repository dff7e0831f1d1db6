#include "arqlink/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace arqlink {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void require_domain(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

NetworkParams::NetworkParams(double lambda_, double alpha_, double r0_,
                             double power_ratio_)
    : lambda(lambda_), alpha(alpha_), r0(r0_), power_ratio(power_ratio_) {
  require(positive_finite(lambda), "NetworkParams: lambda must be > 0");
  require(std::isfinite(alpha) && alpha > 2.0,
          "NetworkParams: alpha must be > 2");
  require(positive_finite(r0), "NetworkParams: r0 must be > 0");
  require(positive_finite(power_ratio),
          "NetworkParams: power_ratio must be > 0");
}

ProtocolParams::ProtocolParams(int m_, double epsilon_)
    : m(m_), epsilon(epsilon_) {
  require(m >= 0, "ProtocolParams: m must be >= 0");
  require(std::isfinite(epsilon) && epsilon > 0.0 && epsilon < 1.0,
          "ProtocolParams: epsilon must be in (0, 1)");
}

PowerModel::PowerModel(double delta_, double p_tx_, double p_rx_)
    : delta(delta_), p_tx(p_tx_), p_rx(p_rx_) {
  require(std::isfinite(delta) && delta > 0.0 && delta <= 1.0,
          "PowerModel: delta must be in (0, 1]");
  require(positive_finite(p_tx), "PowerModel: p_tx must be > 0");
  require(positive_finite(p_rx), "PowerModel: p_rx must be > 0");
}

PowerModel reference_power_model() { return PowerModel(0.35, 0.0979, 0.1122); }

LinkPoint::LinkPoint(double beta_, NetworkParams net_, ProtocolParams proto_)
    : beta(beta_), net(net_), proto(proto_) {
  require(positive_finite(beta), "LinkPoint: beta must be > 0");
}

namespace detail {

double one_minus_eps_root(double epsilon, int m) {
  // 1 - eps^{1/(m+1)} = -expm1(log(eps)/(m+1))
  return -std::expm1(std::log(epsilon) / (m + 1));
}

double pow_uint(double x, unsigned n) {
  double acc = 1.0;
  while (n != 0) {
    if (n & 1u) acc *= x;
    x *= x;
    n >>= 1;
  }
  return acc;
}

double constraint_boundary_beta(const ProtocolParams& proto,
                                const NetworkParams& net) {
  const double u = one_minus_eps_root(proto.epsilon, proto.m);
  const double x = -std::log(u) / (geometry_constant_k(net) * net.lambda);
  return net.power_ratio * std::pow(x, net.alpha / 2.0);
}

}  // namespace detail

double geometry_constant_k(const NetworkParams& net) {
  const double t = 2.0 / net.alpha;
  return std::numbers::pi * net.r0 * net.r0 * std::tgamma(1.0 - t) *
         std::tgamma(1.0 + t);
}

double outage_probability(double beta, const NetworkParams& net) {
  require_domain(positive_finite(beta), "outage_probability: beta must be > 0");
  const double x = geometry_constant_k(net) * net.lambda *
                   std::pow(beta / net.power_ratio, 2.0 / net.alpha);
  return -std::expm1(-x);
}

double success_probability(const LinkPoint& point) {
  const double p = outage_probability(point.beta, point.net);
  return 1.0 - detail::pow_uint(p, static_cast<unsigned>(point.proto.m) + 1u);
}

double attempts_mean_exact(const ProtocolParams& proto) {
  if (proto.m == 0) return 1.0;
  const double eps = proto.epsilon;
  const double u = detail::one_minus_eps_root(eps, proto.m);
  const double num = (1.0 - eps) - eps * u * (proto.m + 1);
  return num / ((1.0 - eps) * u);
}

double attempts_mean_approx(const ProtocolParams& proto) {
  if (proto.m == 0) return 1.0;
  return (1.0 - proto.epsilon) /
         detail::one_minus_eps_root(proto.epsilon, proto.m);
}

double approximation_error(const ProtocolParams& proto) {
  if (proto.m == 0) return 0.0;
  const double exact = attempts_mean_exact(proto);
  return std::abs(attempts_mean_approx(proto) - exact) / exact;
}

double attempts_mean_extreme(double p_out, int m) {
  require_domain(std::isfinite(p_out) && p_out > 0.0 && p_out < 1.0,
                 "attempts_mean_extreme: p_out must be in (0, 1)");
  require_domain(m >= 0, "attempts_mean_extreme: m must be >= 0");
  if (m == 0) return 1.0;
  const double pm1 = detail::pow_uint(p_out, static_cast<unsigned>(m) + 1u);
  const double num = pm1 * (m + 1) * (p_out - 1.0) - pm1 + 1.0;
  const double den = (p_out - 1.0) * (pm1 - 1.0);
  return num / den;
}

double throughput(const LinkPoint& point) {
  const double p = outage_probability(point.beta, point.net);
  const double succ =
      1.0 - detail::pow_uint(p, static_cast<unsigned>(point.proto.m) + 1u);
  return std::log2(1.0 + point.beta) * succ /
         attempts_mean_extreme(p, point.proto.m);
}

double throughput_epsilon_form(double beta, const ProtocolParams& proto) {
  require_domain(positive_finite(beta),
                 "throughput_epsilon_form: beta must be > 0");
  const double eps = proto.epsilon;
  const double u = detail::one_minus_eps_root(eps, proto.m);
  const double gain = (1.0 - eps) - eps * u * (proto.m + 1);
  return std::log2(1.0 + beta) * (1.0 - eps) * (1.0 - eps) * u / gain;
}

double throughput_extreme(double beta, const NetworkParams& net) {
  return std::log2(1.0 + beta) * (1.0 - outage_probability(beta, net));
}

double total_power(double beta, const PowerModel& pm) {
  require_domain(positive_finite(beta), "total_power: beta must be > 0");
  return beta / pm.delta + pm.circuit_power();
}

double energy_efficiency(const LinkPoint& point, const PowerModel& pm) {
  return throughput(point) / total_power(point.beta, pm);
}

double ee_epsilon_form(double beta, const ProtocolParams& proto,
                       const NetworkParams& net, const PowerModel& pm) {
  const double boundary = detail::constraint_boundary_beta(proto, net);
  return throughput_epsilon_form(beta, proto) / total_power(boundary, pm);
}

double d2_throughput_dbeta2(double beta, const ProtocolParams& proto) {
  require_domain(positive_finite(beta),
                 "d2_throughput_dbeta2: beta must be > 0");
  const double eps = proto.epsilon;
  const double u = detail::one_minus_eps_root(eps, proto.m);
  const double gain = (1.0 - eps) - eps * u * (proto.m + 1);
  const double b1 = 1.0 + beta;
  return -(1.0 - eps) * (1.0 - eps) * u /
         (std::numbers::ln2 * b1 * b1 * gain);
}

double d2_ee_dbeta2(double beta, const ProtocolParams& proto,
                    const NetworkParams& net, const PowerModel& pm) {
  const double boundary = detail::constraint_boundary_beta(proto, net);
  return d2_throughput_dbeta2(beta, proto) / total_power(boundary, pm);
}

}  // namespace arqlink
