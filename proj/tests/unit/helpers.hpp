#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "rhgs/instance.hpp"
#include "rhgs/rng.hpp"
#include "rhgs/splittour.hpp"

namespace testing {

// Small random instance on a 100x100 grid with demands in [1, max_demand].
inline rhgs::Instance random_instance(int n, int capacity, int max_demand, rhgs::Rng& rng,
                                      rhgs::Rounding rounding = rhgs::Rounding::Nearest) {
  std::vector<rhgs::Point> pts;
  std::vector<int> dem{0};
  for (int v = 0; v <= n; ++v)
    pts.push_back({static_cast<double>(rhgs::uniform_int(rng, 0, 100)), static_cast<double>(rhgs::uniform_int(rng, 0, 100))});
  for (int v = 1; v <= n; ++v) dem.push_back(static_cast<int>(rhgs::uniform_int(rng, 1, std::min(max_demand, capacity))));
  return rhgs::Instance("rand", pts, dem, capacity, rounding);
}

inline rhgs::GiantTour random_tour(int n, rhgs::Rng& rng) {
  rhgs::GiantTour t;
  t.order.resize(static_cast<std::size_t>(n));
  std::iota(t.order.begin(), t.order.end(), 1);
  rhgs::shuffle(std::span<int>(t.order), rng);
  return t;
}

// Random partition of a random permutation into k nonempty routes.
inline rhgs::Solution random_solution(const rhgs::Instance& inst, int routes, rhgs::Rng& rng) {
  auto tour = random_tour(inst.customer_count(), rng);
  const int n = inst.customer_count();
  routes = std::clamp(routes, 1, n);
  std::vector<int> cuts(static_cast<std::size_t>(n - 1));
  std::iota(cuts.begin(), cuts.end(), 1);
  rhgs::shuffle(std::span<int>(cuts), rng);
  cuts.resize(static_cast<std::size_t>(routes - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(n);
  std::vector<std::vector<int>> out;
  int from = 0;
  for (int c : cuts) {
    out.emplace_back(tour.order.begin() + from, tour.order.begin() + c);
    from = c;
  }
  return rhgs::make_solution(inst, out);
}

}  // namespace testing
