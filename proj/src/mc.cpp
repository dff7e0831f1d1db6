#include "arqlink/mc.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

namespace arqlink::mc {

namespace {

constexpr std::uint64_t kBlockSize = 8192;
constexpr int kBatches = 20;

// Episodes are processed in fixed blocks and the per-block accumulators are
// merged in block order, so any worker count produces identical results.
template <typename Acc, typename Body>
std::vector<Acc> run_blocked(std::uint64_t n, int threads, const Body& body) {
  const std::uint64_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<Acc> acc(n_blocks);
  auto work = [&](std::uint64_t b) {
    const std::uint64_t lo = b * kBlockSize;
    const std::uint64_t hi = std::min(n, lo + kBlockSize);
    for (std::uint64_t i = lo; i < hi; ++i) body(i, acc[b]);
  };
  if (threads <= 1 || n_blocks <= 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b) work(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    const int pool_size =
        static_cast<int>(std::min<std::uint64_t>(threads, n_blocks));
    std::vector<std::thread> pool;
    pool.reserve(pool_size);
    for (int t = 0; t < pool_size; ++t) {
      pool.emplace_back([&] {
        for (std::uint64_t b; (b = next.fetch_add(1)) < n_blocks;) work(b);
      });
    }
    for (auto& th : pool) th.join();
  }
  return acc;
}

int batch_of(std::uint64_t episode, std::uint64_t n) {
  return static_cast<int>(static_cast<unsigned __int128>(episode) * kBatches /
                          n);
}

McEstimate bernoulli_estimate(std::uint64_t hits, std::uint64_t n) {
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  const double se = n > 1 ? std::sqrt(p * (1.0 - p) / (n - 1)) : 0.0;
  return McEstimate{p, se, n};
}

McEstimate mean_estimate(std::uint64_t sum, std::uint64_t sum_sq,
                         std::uint64_t n) {
  const double mean = static_cast<double>(sum) / static_cast<double>(n);
  double se = 0.0;
  if (n > 1) {
    const double var =
        (static_cast<double>(sum_sq) - mean * static_cast<double>(sum)) /
        static_cast<double>(n - 1);
    se = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
  }
  return McEstimate{mean, se, n};
}

struct EpisodeOutcome {
  int attempts;
  bool success;
};

EpisodeOutcome run_episode(double beta, const NetworkParams& net, int m,
                           CounterRng& rng, double radius) {
  for (int attempt = 1; attempt <= m + 1; ++attempt) {
    if (sample_sir(net, rng, radius) > beta) return {attempt, true};
  }
  return {m + 1, false};
}

struct RetransAcc {
  std::uint64_t successes = 0;
  std::uint64_t att_sum = 0;
  std::uint64_t att_sum_sq = 0;
  std::uint64_t att_succ_sum = 0;
  std::uint64_t att_succ_sum_sq = 0;
};

struct BatchAcc {
  std::array<std::uint64_t, kBatches> successes{};
  std::array<std::uint64_t, kBatches> attempts{};
};

}  // namespace

McConfig::McConfig(std::uint64_t n_samples_, double sim_radius_,
                   std::uint64_t seed_, int n_threads_)
    : n_samples(n_samples_),
      sim_radius(sim_radius_),
      seed(seed_),
      n_threads(n_threads_) {
  if (n_samples < 1)
    throw std::invalid_argument("McConfig: n_samples must be >= 1");
  if (!std::isfinite(sim_radius) || sim_radius <= 0.0)
    throw std::invalid_argument("McConfig: sim_radius must be > 0");
  if (n_threads < 1)
    throw std::invalid_argument("McConfig: n_threads must be >= 1");
}

double default_sim_radius(double beta, const NetworkParams& net) {
  // far-field tail of the outage exponent: 2 pi lambda s R^{2-alpha}/(alpha-2)
  // with s the effective threshold scale; keep it below 0.1% of the total.
  constexpr double kTol = 1e-3;
  const double s = beta / net.power_ratio * std::pow(net.r0, net.alpha);
  const double t = 2.0 / net.alpha;
  const double gg = std::tgamma(1.0 - t) * std::tgamma(1.0 + t);
  const double r_tail = std::pow(
      2.0 * std::pow(s, 1.0 - t) / (kTol * (net.alpha - 2.0) * gg),
      1.0 / (net.alpha - 2.0));
  return std::max(100.0 * net.r0, r_tail);
}

double sample_sir(const NetworkParams& net, CounterRng& rng,
                  double sim_radius) {
  const double g0 = rng.exponential();
  const double mean_count =
      net.lambda * std::numbers::pi * sim_radius * sim_radius;
  const std::uint64_t count = rng.poisson(mean_count);
  const double r2_max = sim_radius * sim_radius;
  double interference = 0.0;
  if (net.alpha == 4.0) {
    for (std::uint64_t i = 0; i < count; ++i) {
      const double r2 = rng.uniform() * r2_max;  // disk point: r^2 ~ U R^2
      interference += rng.exponential() / (r2 * r2);
    }
  } else {
    const double exponent = -net.alpha / 2.0;
    for (std::uint64_t i = 0; i < count; ++i) {
      const double r2 = rng.uniform() * r2_max;
      interference += rng.exponential() * std::pow(r2, exponent);
    }
  }
  if (interference == 0.0) return std::numeric_limits<double>::infinity();
  return net.power_ratio * g0 * std::pow(net.r0, -net.alpha) / interference;
}

McEstimate estimate_outage(double beta, const NetworkParams& net,
                           const McConfig& cfg) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::domain_error("estimate_outage: beta must be > 0");
  struct Acc {
    std::uint64_t outages = 0;
  };
  const auto blocks = run_blocked<Acc>(
      cfg.n_samples, cfg.n_threads, [&](std::uint64_t i, Acc& acc) {
        CounterRng rng(cfg.seed, i);
        if (sample_sir(net, rng, cfg.sim_radius) <= beta) ++acc.outages;
      });
  std::uint64_t outages = 0;
  for (const auto& b : blocks) outages += b.outages;
  return bernoulli_estimate(outages, cfg.n_samples);
}

RetransmissionStats simulate_retransmissions(double beta,
                                             const NetworkParams& net, int m,
                                             const McConfig& cfg) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::domain_error("simulate_retransmissions: beta must be > 0");
  if (m < 0)
    throw std::domain_error("simulate_retransmissions: m must be >= 0");
  const auto blocks = run_blocked<RetransAcc>(
      cfg.n_samples, cfg.n_threads, [&](std::uint64_t i, RetransAcc& acc) {
        CounterRng rng(cfg.seed, i);
        const EpisodeOutcome out = run_episode(beta, net, m, rng,
                                               cfg.sim_radius);
        const std::uint64_t a = static_cast<std::uint64_t>(out.attempts);
        acc.att_sum += a;
        acc.att_sum_sq += a * a;
        if (out.success) {
          ++acc.successes;
          acc.att_succ_sum += a;
          acc.att_succ_sum_sq += a * a;
        }
      });
  RetransAcc total;
  for (const auto& b : blocks) {
    total.successes += b.successes;
    total.att_sum += b.att_sum;
    total.att_sum_sq += b.att_sum_sq;
    total.att_succ_sum += b.att_succ_sum;
    total.att_succ_sum_sq += b.att_succ_sum_sq;
  }
  RetransmissionStats stats{
      bernoulli_estimate(total.successes, cfg.n_samples),
      mean_estimate(total.att_sum, total.att_sum_sq, cfg.n_samples),
      std::nullopt,
      bernoulli_estimate(cfg.n_samples - total.successes, cfg.n_samples)};
  if (total.successes > 0) {
    stats.attempts_mean_given_success =
        mean_estimate(total.att_succ_sum, total.att_succ_sum_sq,
                      total.successes);
  }
  return stats;
}

McEstimate estimate_throughput(const LinkPoint& point, const McConfig& cfg) {
  const double spectral = std::log2(1.0 + point.beta);
  const std::uint64_t n = cfg.n_samples;
  const auto blocks = run_blocked<BatchAcc>(
      n, cfg.n_threads, [&](std::uint64_t i, BatchAcc& acc) {
        CounterRng rng(cfg.seed, i);
        const EpisodeOutcome out =
            run_episode(point.beta, point.net, point.proto.m, rng,
                        cfg.sim_radius);
        const int b = batch_of(i, n);
        acc.attempts[b] += static_cast<std::uint64_t>(out.attempts);
        if (out.success) ++acc.successes[b];
      });
  BatchAcc total;
  for (const auto& blk : blocks) {
    for (int b = 0; b < kBatches; ++b) {
      total.successes[b] += blk.successes[b];
      total.attempts[b] += blk.attempts[b];
    }
  }
  std::uint64_t all_succ = 0;
  std::uint64_t all_att = 0;
  std::vector<double> batch_means;
  batch_means.reserve(kBatches);
  for (int b = 0; b < kBatches; ++b) {
    all_succ += total.successes[b];
    all_att += total.attempts[b];
    if (total.attempts[b] > 0) {
      batch_means.push_back(spectral * static_cast<double>(total.successes[b]) /
                            static_cast<double>(total.attempts[b]));
    }
  }
  const double mean = spectral * static_cast<double>(all_succ) /
                      static_cast<double>(all_att);
  double se = 0.0;
  if (batch_means.size() > 1) {
    double bm = 0.0;
    for (double v : batch_means) bm += v;
    bm /= static_cast<double>(batch_means.size());
    double ss = 0.0;
    for (double v : batch_means) ss += (v - bm) * (v - bm);
    const auto nb = static_cast<double>(batch_means.size());
    se = std::sqrt(ss / (nb * (nb - 1.0)));
  }
  return McEstimate{mean, se, n};
}

McEstimate estimate_ee(const LinkPoint& point, const PowerModel& pm,
                       const McConfig& cfg) {
  const double power = total_power(point.beta, pm);
  McEstimate est = estimate_throughput(point, cfg);
  est.mean /= power;
  est.std_error /= power;
  return est;
}

}  // namespace arqlink::mc
