#pragma once

#include <cstdint>
#include <random>

namespace cusmuda {

/// Deterministic, portable random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Streams are keyed by (seed, a, b) through a SplitMix64 mix so
/// that e.g. every (iteration, scenario) pair draws from its own stream and
/// results do not depend on the order in which streams are consumed.
/// Only raw 64-bit outputs are used; the std:: distributions are avoided
/// because their algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  /// Independent stream for the pair (a, b) derived from `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return Rng(mix(mix(seed) ^ mix(a + 0x632be59bd9b4e019ULL) ^
                   mix(b + 0x9e6c63d0676a9a99ULL)));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in the open interval (0, 1).
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). Uses rejection to stay unbiased.
  std::uint64_t below(std::uint64_t n);

  /// Standard normal variate by inversion of the Gaussian CDF.
  double normal();

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

/// Inverse of the standard normal CDF.
///
/// Wichura's AS 241 (PPND16) rational approximation; relative accuracy is
/// about 1e-16 over (0, 1). Returns -inf / +inf at 0 / 1.
double normal_quantile(double p);

}  // namespace cusmuda
