#include "rhgs/relatedness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rhgs/errors.hpp"
#include "rhgs/rng.hpp"
#include "rhgs/splittour.hpp"

namespace rhgs {

std::pair<int, int> Heatmap::key(int i, int j) const {
  if (i == j) throw DomainError("heatmap has no self-loops");
  if (i < 1 || j < 1 || i > n_ || j > n_)
    throw DomainError("heatmap index out of range (" + std::to_string(i) + "," + std::to_string(j) + ")");
  return i < j ? std::pair{i, j} : std::pair{j, i};
}

double Heatmap::get(int i, int j) const {
  auto it = entries_.find(key(i, j));
  return it == entries_.end() ? 0.0 : it->second;
}

void Heatmap::set(int i, int j, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("heatmap probability outside [0,1]");
  auto k = key(i, j);
  if (p == 0.0) entries_.erase(k);
  else entries_[k] = p;
}

void Heatmap::merge_max(int i, int j, double p) {
  if (p > get(i, j)) set(i, j, p);
}

std::vector<std::vector<std::pair<int, double>>> Heatmap::rows() const {
  std::vector<std::vector<std::pair<int, double>>> out(static_cast<std::size_t>(n_) + 1);
  for (const auto& [k, p] : entries_) {
    out[static_cast<std::size_t>(k.first)].emplace_back(k.second, p);
    out[static_cast<std::size_t>(k.second)].emplace_back(k.first, p);
  }
  return out;
}

bool NeighborLists::contains(int i, int j) const {
  const auto& l = lists[static_cast<std::size_t>(i)];
  return std::find(l.begin(), l.end(), j) != l.end();
}

double phi_distance(const Instance& inst, int i, int j) {
  if (i == j) throw DomainError("relatedness of a vertex with itself is undefined");
  double d = inst.distance(i, j);
  return d > 0 ? 1.0 / d : std::numeric_limits<double>::infinity();
}

std::vector<int> customers_by_distance(const Instance& inst, int i) {
  std::vector<int> others;
  others.reserve(static_cast<std::size_t>(inst.customer_count()));
  for (int j = 1; j <= inst.customer_count(); ++j)
    if (j != i) others.push_back(j);
  std::sort(others.begin(), others.end(), [&](int a, int b) {
    double da = inst.distance(i, a);
    double db = inst.distance(i, b);
    return da < db || (da == db && a < b);
  });
  return others;
}

NeighborLists build_neighbor_lists_distance(const Instance& inst, int gamma) {
  if (gamma < 1) throw DomainError("gamma must be at least 1");
  const int n = inst.customer_count();
  NeighborLists nl;
  nl.gamma = gamma;
  nl.lists.resize(static_cast<std::size_t>(n) + 1);
  const auto size = static_cast<std::size_t>(std::min(gamma, n - 1));
  for (int i = 1; i <= n; ++i) {
    auto order = customers_by_distance(inst, i);
    order.resize(size);
    nl.lists[static_cast<std::size_t>(i)] = std::move(order);
  }
  return nl;
}

NeighborLists build_neighbor_lists_hybrid(const Instance& inst, const Heatmap& hm, int gamma) {
  if (gamma < 1) throw DomainError("gamma must be at least 1");
  const int n = inst.customer_count();
  if (hm.customer_count() != n)
    throw ContractError("heatmap covers " + std::to_string(hm.customer_count()) +
                        " customers, instance has " + std::to_string(n));
  const auto size = static_cast<std::size_t>(std::min(gamma, n - 1));
  const auto heat_share = static_cast<std::size_t>(gamma / 2);
  auto rows = hm.rows();

  NeighborLists nl;
  nl.gamma = gamma;
  nl.lists.resize(static_cast<std::size_t>(n) + 1);
  std::vector<char> chosen(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) {
      return a.second > b.second || (a.second == b.second && a.first < b.first);
    });
    std::vector<int> list;
    list.reserve(size);
    for (const auto& [j, p] : row) {
      if (list.size() >= std::min(heat_share, size)) break;
      if (p <= 0) break;
      list.push_back(j);
      chosen[static_cast<std::size_t>(j)] = 1;
    }
    for (int j : customers_by_distance(inst, i)) {
      if (list.size() >= size) break;
      if (!chosen[static_cast<std::size_t>(j)]) list.push_back(j);
    }
    for (int j : list) chosen[static_cast<std::size_t>(j)] = 0;
    nl.lists[static_cast<std::size_t>(i)] = std::move(list);
  }
  return nl;
}

Subproblem make_subproblem(const Instance& inst, int customer, int subproblem_size) {
  auto near = customers_by_distance(inst, customer);
  std::vector<int> vertices{0, customer};
  vertices.insert(vertices.end(), near.begin(), near.begin() + (subproblem_size - 1));
  std::vector<Point> pts;
  std::vector<int> dem;
  for (int v : vertices) {
    pts.push_back(inst.coords()[static_cast<std::size_t>(v)]);
    dem.push_back(inst.demand(v));
  }
  Instance sub(inst.name() + "-sub" + std::to_string(customer), std::move(pts), std::move(dem),
               inst.capacity(), inst.rounding());
  return Subproblem{std::move(sub), std::move(vertices)};
}

Heatmap aggregate_subproblem_heatmaps(const Instance& inst, const HeatmapProvider& provider,
                                      int subproblem_size) {
  const int n = inst.customer_count();
  if (subproblem_size < 1 || subproblem_size > n)
    throw DomainError("subproblem size must lie in [1, n]");

  auto call = [&](const Subproblem& sub, int customer) {
    Heatmap local;
    try {
      local = provider(sub);
    } catch (const std::exception& e) {
      throw AggregationError(customer, e.what());
    }
    if (local.customer_count() != subproblem_size)
      throw AggregationError(customer, "provider returned a heatmap of size " +
                                           std::to_string(local.customer_count()));
    return local;
  };

  if (subproblem_size == n) {
    std::vector<int> identity(static_cast<std::size_t>(n) + 1);
    for (int v = 0; v <= n; ++v) identity[static_cast<std::size_t>(v)] = v;
    return call(Subproblem{inst, std::move(identity)}, 1);
  }

  Heatmap global(n);
  for (int i = 1; i <= n; ++i) {
    Subproblem sub = make_subproblem(inst, i, subproblem_size);
    Heatmap local = call(sub, i);
    for (int k = 2; k <= subproblem_size; ++k) {
      double p = local.get(1, k);
      if (p > 0) global.merge_max(i, sub.vertices[static_cast<std::size_t>(k)], p);
    }
  }
  return global;
}

Heatmap synthesize_oracle_heatmap(const Instance& inst, std::span<const Solution> solutions,
                                  double noise, std::uint64_t seed) {
  if (solutions.empty()) throw ContractError("oracle heatmap needs at least one solution");
  if (!(noise >= 0)) throw DomainError("noise must be nonnegative");
  const int n = inst.customer_count();
  std::map<std::pair<int, int>, int> counts;
  for (const auto& sol : solutions) {
    Solution checked = make_solution(inst, sol.routes);
    if (!checked.feasible()) throw ContractError("oracle heatmap needs feasible solutions");
    for (const auto& r : sol.routes)
      for (std::size_t k = 1; k < r.size(); ++k) {
        int a = std::min(r[k - 1], r[k]);
        int b = std::max(r[k - 1], r[k]);
        ++counts[{a, b}];
      }
  }
  Rng rng(seed);
  Heatmap hm(n);
  const double total = static_cast<double>(solutions.size());
  for (const auto& [k, c] : counts) {
    double p = static_cast<double>(c) / total;
    if (noise > 0) p += (2.0 * uniform01(rng) - 1.0) * noise;
    hm.set(k.first, k.second, std::clamp(p, 0.0, 1.0));
  }
  return hm;
}

}  // namespace rhgs
