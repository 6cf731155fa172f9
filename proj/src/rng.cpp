#include "rhgs/rng.hpp"

#include <limits>

namespace rhgs {

std::size_t uniform_below(Rng& rng, std::size_t bound) {
  const std::uint64_t b = bound;
  // Rejection sampling on the largest multiple of b below 2^64.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % b;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return static_cast<std::size_t>(x % b);
}

long long uniform_int(Rng& rng, long long lo, long long hi) {
  const auto span = static_cast<std::size_t>(hi - lo) + 1;
  return lo + static_cast<long long>(uniform_below(rng, span));
}

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace rhgs
