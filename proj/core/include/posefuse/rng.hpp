#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace posefuse {

// Deterministic random source. std::mt19937_64 output is fully specified by
// the standard; the distribution transforms below are hand-rolled because the
// <random> distributions are implementation-defined and would break
// byte-identical reruns across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform in [0, n).
  int next_int(int n) { return static_cast<int>(engine_() % static_cast<uint64_t>(n)); }

  // Box-Muller, one variate per call.
  double gaussian(double sigma) {
    const double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
    const double u2 = next_double();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  std::mt19937_64 engine_;
};

// SplitMix64 step, used to derive independent per-trial seeds from one base
// seed without correlated streams.
inline uint64_t derive_seed(uint64_t base, uint64_t stream) {
  uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace posefuse
