#pragma once

#include <cstdint>

namespace wdmpair {

/// splitmix64; used to expand seeds into generator state.
struct SplitMix64 {
  std::uint64_t state = 0;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

/// xoshiro256++; fixed across platforms so runs reproduce bit-identically
/// everywhere, unlike the standard-library distributions.
class Xoshiro256pp {
 public:
  static Xoshiro256pp seeded(std::uint64_t seed) {
    SplitMix64 sm{seed};
    Xoshiro256pp rng;
    for (auto& word : rng.s_) word = sm.next();
    return rng;
  }

  std::uint64_t next() {
    std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Poisson sample by CDF inversion; exact and fast for the small means
  /// used here (mu well below ~30).
  int poisson(double mu, double exp_neg_mu) {
    if (mu <= 0.0) return 0;
    double u = uniform01();
    int n = 0;
    double term = exp_neg_mu;
    double cdf = term;
    while (u > cdf) {
      ++n;
      term *= mu / n;
      cdf += term;
      if (n > 1000) break;  // cdf has saturated numerically
    }
    return n;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4] = {1, 2, 3, 4};
};

/// Seed for one batch of gates, derived so serial and parallel schedules see
/// identical streams.
inline std::uint64_t derive_batch_seed(std::uint64_t seed, std::uint64_t batch_index) {
  SplitMix64 sm{seed ^ (0xD1B54A32D192ED03ULL * (batch_index + 1))};
  return sm.next();
}

}  // namespace wdmpair
