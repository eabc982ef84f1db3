#pragma once

#include <cstdint>

namespace qtomo {

// Counter-based generator: draw k of a given (seed, stream) pair is a pure
// function of (seed, stream, k), so separate streams can be consumed in any
// order while staying bit-for-bit reproducible.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  double next_double();                      // uniform on [0, 1)
  double next_uniform(double a, double b);   // uniform on [a, b)
  double next_normal();                      // standard normal

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stable 64-bit mix of (seed, stream) for deriving child seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Poisson draw: sequential inversion below mean 30, transformed rejection
// above.  Non-positive means yield 0.
long long poisson_sample(CounterRng& rng, double mean);

} // namespace qtomo
