#include "hxrl/rng.hpp"

#include <limits>

#include "hxrl/errors.hpp"

namespace hxrl {

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

int Rng::uniform_index(int n) {
  if (n <= 0) throw ContractViolation("uniform_index needs n > 0");
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<int>(x % range);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace hxrl
