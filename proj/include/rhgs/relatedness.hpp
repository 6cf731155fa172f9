#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rhgs/instance.hpp"

namespace rhgs {

struct Solution;

// Sparse symmetric edge probabilities over customers 1..n. Each unordered
// pair is stored once; absent pairs read as 0. Depot edges are not part of a
// heatmap.
class Heatmap {
 public:
  explicit Heatmap(int n = 0) : n_(n) {}

  int customer_count() const { return n_; }
  double get(int i, int j) const;
  // Stores p for {i, j}. p must lie in [0, 1]; a zero removes the entry.
  void set(int i, int j, double p);
  // Keeps max(current, p).
  void merge_max(int i, int j, double p);

  std::size_t size() const { return entries_.size(); }
  // Entries keyed by (i, j) with i < j, in ascending key order.
  const std::map<std::pair<int, int>, double>& entries() const { return entries_; }

  // Row view: for every customer, the (j, p) pairs with p > 0.
  std::vector<std::vector<std::pair<int, double>>> rows() const;

  friend bool operator==(const Heatmap&, const Heatmap&) = default;

 private:
  std::pair<int, int> key(int i, int j) const;

  int n_;
  std::map<std::pair<int, int>, double> entries_;
};

// Text format: `HEATMAP <n>` then `<i> <j> <p>` lines with 1 <= i < j <= n.
Heatmap parse_heatmap(std::string_view text);
std::string emit_heatmap(const Heatmap& hm);
Heatmap load_heatmap(const std::string& path);
void save_heatmap(const Heatmap& hm, const std::string& path);

// Granular neighbor sets. lists[i] is empty for the depot (i = 0).
struct NeighborLists {
  int gamma = 0;
  std::vector<std::vector<int>> lists;

  const std::vector<int>& operator[](int i) const { return lists[static_cast<std::size_t>(i)]; }
  bool contains(int i, int j) const;
};

// 1/d(i, j); +infinity for co-located vertices. Throws DomainError when i == j.
double phi_distance(const Instance& inst, int i, int j);

// Customers j != i sorted by (d(i, j), j).
std::vector<int> customers_by_distance(const Instance& inst, int i);

NeighborLists build_neighbor_lists_distance(const Instance& inst, int gamma);

// floor(gamma/2) customers by descending heatmap value (positive entries
// only), then the nearest customers not yet chosen.
NeighborLists build_neighbor_lists_hybrid(const Instance& inst, const Heatmap& hm, int gamma);

// A subproblem handed to a heatmap provider: depot plus subproblem_size
// customers. Local vertex k corresponds to global vertex vertices[k];
// vertices[0] is the depot and vertices[1] the customer that formed it.
struct Subproblem {
  Instance instance;
  std::vector<int> vertices;
};

using HeatmapProvider = std::function<Heatmap(const Subproblem&)>;

class AggregationError : public std::runtime_error {
 public:
  AggregationError(int customer, const std::string& what)
      : std::runtime_error("heatmap provider failed on subproblem of customer " +
                           std::to_string(customer) + ": " + what),
        customer_(customer) {}
  int customer() const { return customer_; }

 private:
  int customer_;
};

Subproblem make_subproblem(const Instance& inst, int customer, int subproblem_size);

// Builds an n-customer heatmap from fixed-size subproblem heatmaps: customer i
// contributes the values of edges incident to it in its own subproblem,
// overlapping values are max-merged, all other pairs stay 0.
Heatmap aggregate_subproblem_heatmaps(const Instance& inst, const HeatmapProvider& provider,
                                      int subproblem_size);

// Edge frequencies over the given solutions, each stored entry perturbed by
// uniform noise in [-noise, noise] and clamped to [0, 1].
Heatmap synthesize_oracle_heatmap(const Instance& inst, std::span<const Solution> solutions,
                                  double noise, std::uint64_t seed = 0);

}  // namespace rhgs
