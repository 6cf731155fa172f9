#pragma once

#include <cstddef>
#include <cstdint>

#include "rhgs/relatedness.hpp"
#include "rhgs/rng.hpp"
#include "rhgs/splittour.hpp"

namespace rhgs {

// Ordered crossover. Draws cuts a <= b uniformly (two draws of
// uniform_below(n), then ordered), copies F = p1[a..b] in place and fills the
// remaining positions b+1, b+2, ... circularly with p2 read from index b+1,
// skipping F. Throws ContractError if p1 and p2 are not permutations of the
// same customers.
GiantTour ox_crossover(const GiantTour& p1, const GiantTour& p2, Rng& rng);

// Relatedness-guided OX. After copying F, let i = p1[b]; j is drawn uniformly
// from Phi(i) \ F (in list order) and p2 is read from j's position onward; if
// every neighbor of i lies in F the read position is drawn uniformly from p2.
// Distance lists give DOX, heatmap lists give NOX.
GiantTour relatedness_ox(const GiantTour& p1, const GiantTour& p2, const NeighborLists& nl, Rng& rng);

// Deterministic core shared by both operators: F = p1[a..b] in place, other
// positions filled from position b+1 circularly with p2 read circularly from
// index start, skipping F.
GiantTour ox_fill(const GiantTour& p1, const GiantTour& p2, std::size_t a, std::size_t b, std::size_t start);

// Position of each customer in a tour; index 0 unused.
std::vector<std::size_t> tour_positions(const GiantTour& tour);

}  // namespace rhgs
