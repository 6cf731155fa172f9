#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "rhgs/splittour.hpp"

namespace rhgs {

struct Individual {
  GiantTour tour;
  Solution solution;
  std::uint64_t id = 0;
  double biased_fitness = 0;
  // (broken-pairs distance, id) to every other member of the same pool,
  // ascending.
  std::vector<std::pair<double, std::uint64_t>> proximity;

  double penalized_cost(double w) const { return solution.penalized_cost(w); }
  bool feasible() const { return solution.feasible(); }
};

// Fraction of the n - 1 undirected giant-tour adjacencies of a that do not
// appear in b. Symmetric; 0 iff the tours are equal or reversed.
double broken_pairs_distance(const GiantTour& a, const GiantTour& b);

struct FitnessParams {
  int n_elite = 3;
  int n_closest = 5;
};

// One subpopulation (feasible or infeasible).
class Pool {
 public:
  explicit Pool(FitnessParams params = {}) : params_(params) {}

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<Individual>& members() const { return members_; }
  const Individual& operator[](std::size_t k) const { return members_[k]; }

  bool contains_tour(const GiantTour& tour) const;
  // Appends the individual and updates proximity lists.
  void add(Individual ind);
  void remove(std::size_t index);
  void clear() { members_.clear(); }

  // Mean distance to the min(n_closest, size - 1) closest other members.
  double diversity(std::size_t index) const;

  // Sets biased_fitness = rank_cost / (m - 1) + max(0, 1 - n_elite / m) *
  // rank_diversity / (m - 1), where rank_cost orders by ascending penalized
  // cost and rank_diversity by descending diversity (ties by pool position).
  // A single member gets 0.
  void update_fitness(double w);

  // Shrinks the pool to mu members. Each step removes a member whose tour
  // equals an earlier member's if any; otherwise the member with the largest
  // biased fitness (recomputed every step, ties to the later position),
  // never the feasible member of lowest cost.
  void survivor_selection(std::size_t mu, double w);

 private:
  FitnessParams params_;
  std::vector<Individual> members_;
};

struct PenaltyState {
  double w = 1;
  double target_feasible = 0.2;
  double w_min = 0.01;
  double w_max = 100000;
  std::vector<bool> window;  // feasibility of recent offspring after local search
};

// Feasible fraction f over the window: f < xi - 0.05 multiplies w by 1.2,
// f > xi + 0.05 multiplies it by 0.85; then clamps to [w_min, w_max] and
// clears the window.
PenaltyState adapt_penalty(PenaltyState state);

}  // namespace rhgs
