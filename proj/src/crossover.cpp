#include "rhgs/crossover.hpp"

#include "rhgs/errors.hpp"

namespace rhgs {

namespace {

void check_parents(const GiantTour& p1, const GiantTour& p2) {
  const int n = static_cast<int>(p1.order.size());
  if (n == 0 || p2.order.size() != p1.order.size() || !is_valid_tour(p1, n) || !is_valid_tour(p2, n))
    throw ContractError("crossover parents must be permutations of the same customers");
}

std::pair<std::size_t, std::size_t> draw_cuts(std::size_t n, Rng& rng) {
  std::size_t a = uniform_below(rng, n);
  std::size_t b = uniform_below(rng, n);
  if (a > b) std::swap(a, b);
  return {a, b};
}

}  // namespace

std::vector<std::size_t> tour_positions(const GiantTour& tour) {
  std::vector<std::size_t> pos(tour.order.size() + 1, 0);
  for (std::size_t k = 0; k < tour.order.size(); ++k) pos[static_cast<std::size_t>(tour.order[k])] = k;
  return pos;
}

GiantTour ox_fill(const GiantTour& p1, const GiantTour& p2, std::size_t a, std::size_t b, std::size_t start) {
  const std::size_t n = p1.order.size();
  if (a > b || b >= n || start >= n) throw ContractError("crossover cut positions out of range");
  GiantTour child;
  child.order.assign(n, 0);
  std::vector<char> in_fragment(n + 1, 0);
  for (std::size_t k = a; k <= b; ++k) {
    child.order[k] = p1.order[k];
    in_fragment[static_cast<std::size_t>(p1.order[k])] = 1;
  }
  std::size_t write = (b + 1) % n;
  for (std::size_t k = 0; k < n; ++k) {
    int c = p2.order[(start + k) % n];
    if (in_fragment[static_cast<std::size_t>(c)]) continue;
    child.order[write] = c;
    write = (write + 1) % n;
  }
  return child;
}

GiantTour ox_crossover(const GiantTour& p1, const GiantTour& p2, Rng& rng) {
  check_parents(p1, p2);
  const std::size_t n = p1.order.size();
  auto [a, b] = draw_cuts(n, rng);
  return ox_fill(p1, p2, a, b, (b + 1) % n);
}

GiantTour relatedness_ox(const GiantTour& p1, const GiantTour& p2, const NeighborLists& nl, Rng& rng) {
  check_parents(p1, p2);
  const std::size_t n = p1.order.size();
  if (nl.lists.size() != n + 1) throw ContractError("neighbor lists do not match the parents");
  auto [a, b] = draw_cuts(n, rng);

  std::vector<char> in_fragment(n + 1, 0);
  for (std::size_t k = a; k <= b; ++k) in_fragment[static_cast<std::size_t>(p1.order[k])] = 1;
  std::vector<int> candidates;
  for (int j : nl[p1.order[b]])
    if (!in_fragment[static_cast<std::size_t>(j)]) candidates.push_back(j);

  std::size_t start;
  if (candidates.empty()) {
    start = uniform_below(rng, n);
  } else {
    int j = candidates[uniform_below(rng, candidates.size())];
    start = tour_positions(p2)[static_cast<std::size_t>(j)];
  }
  return ox_fill(p1, p2, a, b, start);
}

}  // namespace rhgs
