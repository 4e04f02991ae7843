#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace zigpcast {

// 64-bit avalanche mixer used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seeded random source owned by one thread of control at a time.
//
// Streams for Monte Carlo runs are addressed by (master seed, index): the
// sequence drawn by run i never depends on which worker executes it or on
// how many runs were scheduled before it.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  static RandomStream for_stream(std::uint64_t master_seed, std::uint64_t index) {
    return RandomStream(splitmix64(master_seed) ^ splitmix64(~index));
  }

  static constexpr result_type min() { return std::numeric_limits<result_type>::min(); }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits; identical on every platform.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace zigpcast
