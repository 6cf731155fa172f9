#include "rhgs/population.hpp"

#include <algorithm>
#include <numeric>

#include "rhgs/errors.hpp"

namespace rhgs {

double broken_pairs_distance(const GiantTour& a, const GiantTour& b) {
  const std::size_t n = a.order.size();
  if (b.order.size() != n) throw ContractError("tours of different length");
  if (n < 2) return 0;
  std::vector<int> succ(n + 1, 0), pred(n + 1, 0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    succ[static_cast<std::size_t>(b.order[k])] = b.order[k + 1];
    pred[static_cast<std::size_t>(b.order[k + 1])] = b.order[k];
  }
  std::size_t broken = 0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto x = static_cast<std::size_t>(a.order[k]);
    const int y = a.order[k + 1];
    if (succ[x] != y && pred[x] != y) ++broken;
  }
  return static_cast<double>(broken) / static_cast<double>(n - 1);
}

bool Pool::contains_tour(const GiantTour& tour) const {
  return std::any_of(members_.begin(), members_.end(), [&](const Individual& m) { return m.tour == tour; });
}

void Pool::add(Individual ind) {
  ind.proximity.clear();
  for (auto& m : members_) {
    const double d = broken_pairs_distance(ind.tour, m.tour);
    auto entry = std::make_pair(d, ind.id);
    m.proximity.insert(std::upper_bound(m.proximity.begin(), m.proximity.end(), entry), entry);
    ind.proximity.emplace_back(d, m.id);
  }
  std::sort(ind.proximity.begin(), ind.proximity.end());
  members_.push_back(std::move(ind));
}

void Pool::remove(std::size_t index) {
  const std::uint64_t id = members_[index].id;
  members_.erase(members_.begin() + static_cast<std::ptrdiff_t>(index));
  for (auto& m : members_)
    std::erase_if(m.proximity, [id](const auto& e) { return e.second == id; });
}

double Pool::diversity(std::size_t index) const {
  const auto& prox = members_[index].proximity;
  const std::size_t k = std::min(static_cast<std::size_t>(std::max(params_.n_closest, 1)), prox.size());
  if (k == 0) return 0;
  double sum = 0;
  for (std::size_t t = 0; t < k; ++t) sum += prox[t].first;
  return sum / static_cast<double>(k);
}

void Pool::update_fitness(double w) {
  const std::size_t m = members_.size();
  if (m == 0) return;
  if (m == 1) {
    members_[0].biased_fitness = 0;
    return;
  }
  std::vector<double> cost(m), div(m);
  for (std::size_t k = 0; k < m; ++k) {
    cost[k] = members_[k].penalized_cost(w);
    div[k] = diversity(k);
  }
  std::vector<std::size_t> by_cost(m), by_div(m);
  std::iota(by_cost.begin(), by_cost.end(), std::size_t{0});
  std::iota(by_div.begin(), by_div.end(), std::size_t{0});
  std::stable_sort(by_cost.begin(), by_cost.end(), [&](std::size_t x, std::size_t y) { return cost[x] < cost[y]; });
  std::stable_sort(by_div.begin(), by_div.end(), [&](std::size_t x, std::size_t y) { return div[x] > div[y]; });
  std::vector<double> rank_cost(m), rank_div(m);
  for (std::size_t r = 0; r < m; ++r) {
    rank_cost[by_cost[r]] = static_cast<double>(r) / static_cast<double>(m - 1);
    rank_div[by_div[r]] = static_cast<double>(r) / static_cast<double>(m - 1);
  }
  const double elite_weight = std::max(0.0, 1.0 - static_cast<double>(params_.n_elite) / static_cast<double>(m));
  for (std::size_t k = 0; k < m; ++k) members_[k].biased_fitness = rank_cost[k] + elite_weight * rank_div[k];
}

void Pool::survivor_selection(std::size_t mu, double w) {
  while (members_.size() > mu) {
    std::size_t victim = members_.size();
    for (std::size_t k = 1; k < members_.size() && victim == members_.size(); ++k)
      for (std::size_t e = 0; e < k; ++e)
        if (members_[k].tour == members_[e].tour) {
          victim = k;
          break;
        }

    if (victim == members_.size()) {
      std::size_t protected_index = members_.size();
      for (std::size_t k = 0; k < members_.size(); ++k) {
        if (!members_[k].feasible()) continue;
        if (protected_index == members_.size() ||
            members_[k].solution.distance < members_[protected_index].solution.distance)
          protected_index = k;
      }
      update_fitness(w);
      for (std::size_t k = 0; k < members_.size(); ++k) {
        if (k == protected_index) continue;
        if (victim == members_.size() || members_[k].biased_fitness >= members_[victim].biased_fitness) victim = k;
      }
    }
    remove(victim);
  }
}

PenaltyState adapt_penalty(PenaltyState state) {
  if (!state.window.empty()) {
    const auto feasible = static_cast<double>(std::count(state.window.begin(), state.window.end(), true));
    const double f = feasible / static_cast<double>(state.window.size());
    if (f < state.target_feasible - 0.05)
      state.w *= 1.2;
    else if (f > state.target_feasible + 0.05)
      state.w *= 0.85;
  }
  state.w = std::clamp(state.w, state.w_min, state.w_max);
  state.window.clear();
  return state;
}

}  // namespace rhgs
