#pragma once

#include <cstdint>
#include <random>

namespace hxrl {

// Seeded random stream. Draws are mapped to integers and reals without the
// implementation-defined std distributions, so a seed reproduces the same
// run on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform01();
  // Uniform in [0, n); n > 0. Rejection sampling, no modulo bias.
  int uniform_index(int n);
  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

// Independent sub-stream seed (splitmix64 finalizer over base and stream id).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace hxrl
