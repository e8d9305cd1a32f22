#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace spomdp {

// mt19937_64 and seed_seq are fully specified by the standard, so streams
// built here are reproducible across compilers. The distribution helpers
// below avoid std::*_distribution for the same reason.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream keyed by (seed, counters...).
  static Rng derived(std::uint64_t seed, std::initializer_list<std::uint64_t> counters) {
    std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed),
                                     static_cast<std::uint32_t>(seed >> 32)};
    for (std::uint64_t c : counters) {
      words.push_back(static_cast<std::uint32_t>(c));
      words.push_back(static_cast<std::uint32_t>(c >> 32));
    }
    std::seed_seq keyed(words.begin(), words.end());
    return Rng(std::mt19937_64(keyed));
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard exponential via inversion.
  double exponential() { return -std::log1p(-uniform()); }

  /// Standard normal via Box-Muller (one value per call).
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  /// Index drawn from unnormalized nonnegative weights by inverse CDF.
  /// Zero-weight entries are never returned.
  template <typename Weights>
  int categorical(const Weights& w, int n) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += w[i];
    const double target = uniform() * total;
    double cumulative = 0.0;
    int last_positive = -1;
    for (int i = 0; i < n; ++i) {
      if (!(w[i] > 0.0)) continue;
      last_positive = i;
      cumulative += w[i];
      if (target < cumulative) return i;
    }
    return last_positive < 0 ? 0 : last_positive;
  }

  std::uint64_t next() { return engine_(); }

 private:
  explicit Rng(std::mt19937_64 engine) : engine_(engine) {}
  std::mt19937_64 engine_;
};

}  // namespace spomdp
