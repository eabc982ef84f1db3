#include "qtomo/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qtomo {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : base_(mix64(seed + kGolden * (stream + 1))) {}

std::uint64_t CounterRng::next_u64() {
  counter_ += 1;
  return mix64(base_ + kGolden * counter_);
}

double CounterRng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_uniform(double a, double b) {
  return a + (b - a) * next_double();
}

double CounterRng::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u = 1.0 - next_double();  // (0, 1]
  const double r = std::sqrt(-2.0 * std::log(u));
  const double phi = 2.0 * std::numbers::pi * next_double();
  spare_ = r * std::sin(phi);
  have_spare_ = true;
  return r * std::cos(phi);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed + kGolden) + kGolden * (stream + 1));
}

namespace {

long long poisson_small(CounterRng& rng, double mean) {
  const double limit = std::exp(-mean);
  double p = 1.0;
  long long k = -1;
  do {
    ++k;
    p *= rng.next_double();
  } while (p > limit);
  return k;
}

// Hoermann's transformed-rejection sampler (PTRS), valid for mean >= 10.
long long poisson_ptrs(CounterRng& rng, double mean) {
  const double smu = std::sqrt(mean);
  const double log_mean = std::log(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);

  for (;;) {
    const double u = rng.next_double() - 0.5;
    const double v = rng.next_double();
    const double us = 0.5 - std::abs(u);
    if (us <= 0.0) continue;
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        kf * log_mean - mean - std::lgamma(kf + 1.0)) {
      return static_cast<long long>(kf);
    }
  }
}

} // namespace

long long poisson_sample(CounterRng& rng, double mean) {
  if (!(mean > 0.0)) {
    if (std::isnan(mean)) throw std::invalid_argument("poisson_sample: NaN mean");
    return 0;
  }
  if (!std::isfinite(mean))
    throw std::invalid_argument("poisson_sample: infinite mean");
  if (mean < 30.0) return poisson_small(rng, mean);
  return poisson_ptrs(rng, mean);
}

} // namespace qtomo
