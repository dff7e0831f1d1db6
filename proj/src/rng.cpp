#include "arqlink/rng.hpp"

#include <stdexcept>

namespace arqlink {

namespace {

// Hormann's PTRS transformed-rejection sampler; exact for mean >= 10.
std::uint64_t poisson_ptrs(CounterRng& rng, double mean) {
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const double k = kf;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        k * log_mean - mean - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(kf);
    }
  }
}

}  // namespace

std::uint64_t CounterRng::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw std::domain_error("poisson: mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  if (mean < 30.0) {
    // count unit-rate arrivals in [0, mean]
    std::uint64_t n = 0;
    double t = exponential();
    while (t <= mean) {
      ++n;
      t += exponential();
    }
    return n;
  }
  return poisson_ptrs(*this, mean);
}

}  // namespace arqlink
