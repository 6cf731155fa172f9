#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rhgs/instance.hpp"
#include "rhgs/rng.hpp"

namespace rhgs {

// A permutation of customers 1..n; the depot never appears.
struct GiantTour {
  std::vector<int> order;
  friend bool operator==(const GiantTour&, const GiantTour&) = default;
};

bool is_valid_tour(const GiantTour& tour, int n);

// Routes plus the two quantities the penalized objective is built from.
// Excess is the summed capacity overload max(0, load - Q) over routes.
struct Solution {
  std::vector<std::vector<int>> routes;
  double distance = 0;
  long long excess = 0;

  double penalized_cost(double w) const { return distance + w * static_cast<double>(excess); }
  bool feasible() const { return excess == 0; }
  std::size_t customer_count() const;

  friend bool operator==(const Solution&, const Solution&) = default;
};

double route_distance(const Instance& inst, const std::vector<int>& route);
long long route_load(const Instance& inst, const std::vector<int>& route);

// Builds a Solution from routes, computing distance and excess. Throws
// StructuralError unless the routes partition the customers.
Solution make_solution(const Instance& inst, std::vector<std::vector<int>> routes);

// Recomputes distance + w * excess from scratch.
double evaluate(const Instance& inst, const Solution& sol, double w);

struct SplitConfig {
  // Candidate routes with load above overload_factor * Q are excluded.
  double overload_factor = 1.5;
};

struct SplitWork {
  std::uint64_t arcs = 0;
};

// Optimal segmentation of the tour into consecutive routes under the
// penalized objective (shortest path on the segmentation DAG). Ties go to
// fewer routes, then to lexicographically earliest cut positions.
Solution split(const Instance& inst, const GiantTour& tour, double w, const SplitConfig& config = {},
               SplitWork* work = nullptr);

// Concatenates routes in a uniformly shuffled route order.
GiantTour to_giant_tour(const Solution& sol, Rng& rng);

// CVRPLIB solution text: `Route #k: ...` lines and a final `Cost <z>` line.
std::string format_cost(double cost);
std::string emit_solution(const Solution& sol);
struct ParsedSolution {
  std::vector<std::vector<int>> routes;
  std::optional<double> cost;
};
ParsedSolution parse_solution(std::string_view text);
ParsedSolution load_solution(const std::string& path);

}  // namespace rhgs
