#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace rhgs {

// Every stochastic component draws from one of these. The helpers below are
// implemented locally (not via <random> distributions) so draw sequences do
// not depend on the standard library vendor.
using Rng = std::mt19937_64;

// Uniform integer in [0, bound). bound must be positive.
std::size_t uniform_below(Rng& rng, std::size_t bound);

// Uniform integer in [lo, hi].
long long uniform_int(Rng& rng, long long lo, long long hi);

// Uniform double in [0, 1).
double uniform01(Rng& rng);

template <typename T>
void shuffle(std::span<T> values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::size_t j = uniform_below(rng, i);
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace rhgs
