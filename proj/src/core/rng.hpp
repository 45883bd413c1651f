// Deterministic random sampling. All probe generation flows through
// this class so that reports are reproducible across platforms: the
// mt19937_64 stream is fixed by the standard, and the uniform/normal
// transforms below avoid the implementation-defined std distributions.
#pragma once

#include <cstdint>
#include <random>

#include "core/linalg.hpp"

namespace subriem {

// Seed used by the built-in model invariant suites and probe drivers
// unless the caller overrides it.
inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the second member of each pair is
  // cached so consecutive calls consume a fixed number of draws.
  double normal();

  Vec normalVec(int n);

  // Uniformly distributed unit vector in R^n.
  Vec unitVec(int n);

 private:
  std::mt19937_64 gen_;
  bool hasSpare_ = false;
  double spare_ = 0.0;
};

}  // namespace subriem
