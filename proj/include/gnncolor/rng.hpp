#pragma once

#include <cstdint>
#include <random>

namespace gnncolor {

// Deterministic uniform generator. Every random draw of a run (weight init,
// dropout masks, tabu jitter) flows through one instance, so a seed pins the
// whole trajectory. Doubles are derived from raw engine output instead of
// std::uniform_real_distribution to stay independent of library internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // [0, 1) with 53-bit resolution
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // integer in [lo, hi], both inclusive
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gnncolor
