#include "rhgs/localsearch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rhgs/errors.hpp"

namespace rhgs {

std::string_view to_string(MoveFamily family) {
  switch (family) {
    case MoveFamily::Relocate: return "relocate";
    case MoveFamily::Swap: return "swap";
    case MoveFamily::TwoOpt: return "2opt";
    case MoveFamily::TwoOptStar: return "2opt*";
    case MoveFamily::RelocatePair: return "relocate-pair";
    case MoveFamily::SwapPair: return "swap-pair";
  }
  return "?";
}

std::uint64_t MoveCounters::total_evaluated() const {
  return std::accumulate(evaluated.begin(), evaluated.end(), std::uint64_t{0});
}

std::uint64_t MoveCounters::total_applied() const {
  return std::accumulate(applied.begin(), applied.end(), std::uint64_t{0});
}

namespace {

struct Context {
  int sweep = 0;
  int u = 0;
  int v = 0;
  LsStats* stats = nullptr;
  bool front = false;
};

thread_local Context g_ctx;

}  // namespace

LocalSearch::LocalSearch(const Instance& inst, const NeighborLists& nl, LsConfig config)
    : inst_(inst),
      nl_(nl),
      config_(config),
      route_of_(static_cast<std::size_t>(inst.customer_count()) + 1, -1),
      pos_of_(static_cast<std::size_t>(inst.customer_count()) + 1, -1) {
  if (nl_.lists.size() != static_cast<std::size_t>(inst.customer_count()) + 1)
    throw ContractError("neighbor lists do not match the instance");
}

long long LocalSearch::excess_of(long long load) const {
  return std::max(0LL, load - inst_.capacity());
}

int LocalSearch::pred(int c) const {
  const auto& r = routes_[static_cast<std::size_t>(route_of_[static_cast<std::size_t>(c)])];
  int p = pos_of_[static_cast<std::size_t>(c)];
  return p == 0 ? 0 : r.nodes[static_cast<std::size_t>(p - 1)];
}

int LocalSearch::succ(int c) const {
  const auto& r = routes_[static_cast<std::size_t>(route_of_[static_cast<std::size_t>(c)])];
  auto p = static_cast<std::size_t>(pos_of_[static_cast<std::size_t>(c)]);
  return p + 1 == r.nodes.size() ? 0 : r.nodes[p + 1];
}

void LocalSearch::refresh(int r) {
  auto& route = routes_[static_cast<std::size_t>(r)];
  route.prefix_load.resize(route.nodes.size());
  long long load = 0;
  for (std::size_t k = 0; k < route.nodes.size(); ++k) {
    int c = route.nodes[k];
    route_of_[static_cast<std::size_t>(c)] = r;
    pos_of_[static_cast<std::size_t>(c)] = static_cast<int>(k);
    load += inst_.demand(c);
    route.prefix_load[k] = load;
  }
  route.load = load;
  route.distance = route_distance(inst_, route.nodes);
}

void LocalSearch::load(const Solution& start) {
  const int n = inst_.customer_count();
  routes_.clear();
  std::fill(route_of_.begin(), route_of_.end(), -1);
  std::size_t seen = 0;
  for (const auto& r : start.routes) {
    if (r.empty()) continue;
    for (int c : r) {
      if (c < 1 || c > n) throw StructuralError("route references unknown customer " + std::to_string(c));
      if (route_of_[static_cast<std::size_t>(c)] != -1)
        throw StructuralError("customer " + std::to_string(c) + " visited twice");
      route_of_[static_cast<std::size_t>(c)] = 0;
      ++seen;
    }
    routes_.push_back(Route{r, {}, 0, 0, 0});
  }
  if (seen != static_cast<std::size_t>(n)) throw StructuralError("solution does not visit every customer");
  total_distance_ = 0;
  total_excess_ = 0;
  move_stamp_ = 0;
  for (std::size_t r = 0; r < routes_.size(); ++r) {
    refresh(static_cast<int>(r));
    total_distance_ += routes_[r].distance;
    total_excess_ += excess_of(routes_[r].load);
  }
}

Solution LocalSearch::export_solution() const {
  Solution sol;
  for (const auto& r : routes_) {
    sol.routes.push_back(r.nodes);
    sol.distance += r.distance;
    sol.excess += excess_of(r.load);
  }
  return sol;
}

void LocalSearch::verify() const {
  double distance = 0;
  long long excess = 0;
  for (const auto& r : routes_) {
    if (r.load != route_load(inst_, r.nodes)) throw std::logic_error("cached route load drifted");
    distance += route_distance(inst_, r.nodes);
    excess += excess_of(r.load);
  }
  const bool exact = inst_.rounding() == Rounding::Nearest;
  const double tol = exact ? 0.0 : 1e-9 * std::max(1.0, std::fabs(distance));
  if (std::fabs(distance - total_distance_) > tol || excess != total_excess_)
    throw std::logic_error("incremental cost drifted from recomputed cost");
}

void LocalSearch::apply(const Candidate& c) {
  ++move_stamp_;
  auto& ru = routes_[static_cast<std::size_t>(c.route_u)];
  ru.nodes = c.new_u;
  ru.modified = move_stamp_;
  refresh(c.route_u);
  if (c.route_v != c.route_u) {
    auto& rv = routes_[static_cast<std::size_t>(c.route_v)];
    rv.nodes = c.new_v;
    rv.modified = move_stamp_;
    refresh(c.route_v);
  }
  total_distance_ += c.delta_distance;
  total_excess_ += c.delta_excess;

  for (int r = static_cast<int>(routes_.size()) - 1; r >= 0; --r) {
    if (!routes_[static_cast<std::size_t>(r)].nodes.empty()) continue;
    if (r != static_cast<int>(routes_.size()) - 1) {
      routes_[static_cast<std::size_t>(r)] = std::move(routes_.back());
      routes_.pop_back();
      refresh(r);
    } else {
      routes_.pop_back();
    }
  }

  const auto f = static_cast<std::size_t>(c.family);
  counters_->applied[f]++;
  if (config_.record_audit && g_ctx.stats)
    g_ctx.stats->audit.push_back(AuditEntry{g_ctx.sweep, c.family, g_ctx.u, g_ctx.front ? 0 : g_ctx.v, g_ctx.v,
                                            delta_of(c.delta_distance, c.delta_excess)});
  if (config_.verify_each_move) verify();
}

bool LocalSearch::try_relocate(int u, int v, bool front) {
  g_ctx.front = front;
  counters_->evaluated[static_cast<std::size_t>(MoveFamily::Relocate)]++;
  const int ru = route_of_[static_cast<std::size_t>(u)];
  const int rv = route_of_[static_cast<std::size_t>(v)];
  const int p = pred(u);
  const int s = succ(u);
  const int a = front ? 0 : v;
  const int b = front ? v : succ(v);
  if (!front && a == p) return false;
  const double dd = inst_.distance(p, s) - inst_.distance(p, u) - inst_.distance(u, s) +
                    inst_.distance(a, u) + inst_.distance(u, b) - inst_.distance(a, b);
  long long de = 0;
  const auto& RU = routes_[static_cast<std::size_t>(ru)];
  const auto& RV = routes_[static_cast<std::size_t>(rv)];
  if (ru != rv) {
    const long long q = inst_.demand(u);
    de = excess_of(RU.load - q) + excess_of(RV.load + q) - excess_of(RU.load) - excess_of(RV.load);
  }
  if (delta_of(dd, de) >= -kImprovementEpsilon) return false;

  Candidate c{MoveFamily::Relocate, dd, de, ru, rv, {}, {}};
  if (ru == rv) {
    c.new_u.reserve(RU.nodes.size());
    if (front) c.new_u.push_back(u);
    for (int x : RU.nodes) {
      if (x == u) continue;
      c.new_u.push_back(x);
      if (!front && x == v) c.new_u.push_back(u);
    }
  } else {
    c.new_u.reserve(RU.nodes.size());
    for (int x : RU.nodes)
      if (x != u) c.new_u.push_back(x);
    c.new_v.reserve(RV.nodes.size() + 1);
    if (front) c.new_v.push_back(u);
    for (int x : RV.nodes) {
      c.new_v.push_back(x);
      if (!front && x == v) c.new_v.push_back(u);
    }
  }
  apply(c);
  return true;
}

bool LocalSearch::try_swap(int u, int v) {
  g_ctx.front = false;
  counters_->evaluated[static_cast<std::size_t>(MoveFamily::Swap)]++;
  const int ru = route_of_[static_cast<std::size_t>(u)];
  const int rv = route_of_[static_cast<std::size_t>(v)];
  const int pu = pred(u), su = succ(u), pv = pred(v), sv = succ(v);
  double dd;
  long long de = 0;
  if (ru == rv && su == v) {
    dd = inst_.distance(pu, v) + inst_.distance(u, sv) - inst_.distance(pu, u) - inst_.distance(v, sv);
  } else if (ru == rv && sv == u) {
    dd = inst_.distance(pv, u) + inst_.distance(v, su) - inst_.distance(pv, v) - inst_.distance(u, su);
  } else {
    dd = inst_.distance(pu, v) + inst_.distance(v, su) - inst_.distance(pu, u) - inst_.distance(u, su) +
         inst_.distance(pv, u) + inst_.distance(u, sv) - inst_.distance(pv, v) - inst_.distance(v, sv);
  }
  const auto& RU = routes_[static_cast<std::size_t>(ru)];
  const auto& RV = routes_[static_cast<std::size_t>(rv)];
  if (ru != rv) {
    const long long diff = inst_.demand(v) - inst_.demand(u);
    de = excess_of(RU.load + diff) + excess_of(RV.load - diff) - excess_of(RU.load) - excess_of(RV.load);
  }
  if (delta_of(dd, de) >= -kImprovementEpsilon) return false;

  Candidate c{MoveFamily::Swap, dd, de, ru, rv, RU.nodes, {}};
  if (ru == rv) {
    std::swap(c.new_u[static_cast<std::size_t>(pos_of_[static_cast<std::size_t>(u)])],
              c.new_u[static_cast<std::size_t>(pos_of_[static_cast<std::size_t>(v)])]);
  } else {
    c.new_v = RV.nodes;
    c.new_u[static_cast<std::size_t>(pos_of_[static_cast<std::size_t>(u)])] = v;
    c.new_v[static_cast<std::size_t>(pos_of_[static_cast<std::size_t>(v)])] = u;
  }
  apply(c);
  return true;
}

bool LocalSearch::try_two_opt(int u, int v) {
  g_ctx.front = false;
  counters_->evaluated[static_cast<std::size_t>(MoveFamily::TwoOpt)]++;
  const int r = route_of_[static_cast<std::size_t>(u)];
  const int pos_u = pos_of_[static_cast<std::size_t>(u)];
  const int pos_v = pos_of_[static_cast<std::size_t>(v)];
  double dd;
  int first, last;  // inclusive positions to reverse
  if (pos_u < pos_v) {
    const int x = succ(u);
    if (x == v) return false;
    const int y = succ(v);
    dd = inst_.distance(u, v) + inst_.distance(x, y) - inst_.distance(u, x) - inst_.distance(v, y);
    first = pos_u + 1;
    last = pos_v;
  } else {
    const int pu = pred(u);
    if (pu == v) return false;
    const int pv = pred(v);
    dd = inst_.distance(pv, pu) + inst_.distance(v, u) - inst_.distance(pv, v) - inst_.distance(pu, u);
    first = pos_v;
    last = pos_u - 1;
  }
  if (dd >= -kImprovementEpsilon) return false;
  Candidate c{MoveFamily::TwoOpt, dd, 0, r, r, routes_[static_cast<std::size_t>(r)].nodes, {}};
  std::reverse(c.new_u.begin() + first, c.new_u.begin() + last + 1);
  apply(c);
  return true;
}

bool LocalSearch::try_two_opt_star(int u, int v, bool front) {
  g_ctx.front = front;
  counters_->evaluated[static_cast<std::size_t>(MoveFamily::TwoOptStar)]++;
  const int ru = route_of_[static_cast<std::size_t>(u)];
  const int rv = route_of_[static_cast<std::size_t>(v)];
  const auto& RU = routes_[static_cast<std::size_t>(ru)];
  const auto& RV = routes_[static_cast<std::size_t>(rv)];
  const auto pu = static_cast<std::size_t>(pos_of_[static_cast<std::size_t>(u)]);
  const int x = succ(u);
  const long long prefix_u = RU.prefix_load[pu];
  double dd;
  long long load_u, load_v;
  if (!front) {
    const int y = succ(v);
    if (x == 0 && y == 0) return false;
    const auto pv = static_cast<std::size_t>(pos_of_[static_cast<std::size_t>(v)]);
    const long long prefix_v = RV.prefix_load[pv];
    dd = inst_.distance(u, y) + inst_.distance(v, x) - inst_.distance(u, x) - inst_.distance(v, y);
    load_u = prefix_u + (RV.load - prefix_v);
    load_v = prefix_v + (RU.load - prefix_u);
  } else {
    dd = inst_.distance(u, v) + inst_.distance(0, x) - inst_.distance(u, x) - inst_.distance(0, v);
    load_u = prefix_u + RV.load;
    load_v = RU.load - prefix_u;
  }
  const long long de = excess_of(load_u) + excess_of(load_v) - excess_of(RU.load) - excess_of(RV.load);
  if (delta_of(dd, de) >= -kImprovementEpsilon) return false;

  Candidate c{MoveFamily::TwoOptStar, dd, de, ru, rv, {}, {}};
  const auto split_u = RU.nodes.begin() + static_cast<std::ptrdiff_t>(pu) + 1;
  if (!front) {
    const auto split_v = RV.nodes.begin() + pos_of_[static_cast<std::size_t>(v)] + 1;
    c.new_u.assign(RU.nodes.begin(), split_u);
    c.new_u.insert(c.new_u.end(), split_v, RV.nodes.end());
    c.new_v.assign(RV.nodes.begin(), split_v);
    c.new_v.insert(c.new_v.end(), split_u, RU.nodes.end());
  } else {
    c.new_u.assign(RU.nodes.begin(), split_u);
    c.new_u.insert(c.new_u.end(), RV.nodes.begin(), RV.nodes.end());
    c.new_v.assign(split_u, RU.nodes.end());
  }
  apply(c);
  return true;
}

bool LocalSearch::try_generic(MoveFamily family, int ru, int rv, std::vector<int> new_u,
                              std::vector<int> new_v) {
  counters_->evaluated[static_cast<std::size_t>(family)]++;
  const auto& RU = routes_[static_cast<std::size_t>(ru)];
  double dd = route_distance(inst_, new_u) - RU.distance;
  long long de = excess_of(route_load(inst_, new_u)) - excess_of(RU.load);
  if (rv != ru) {
    const auto& RV = routes_[static_cast<std::size_t>(rv)];
    dd += route_distance(inst_, new_v) - RV.distance;
    de += excess_of(route_load(inst_, new_v)) - excess_of(RV.load);
  }
  if (delta_of(dd, de) >= -kImprovementEpsilon) return false;
  apply(Candidate{family, dd, de, ru, rv, std::move(new_u), std::move(new_v)});
  return true;
}

// Moves the pair (u, succ u), optionally reversed, after v (or to the front of
// v's route).
bool LocalSearch::try_relocate_pair(int u, int v, bool front, bool reversed) {
  g_ctx.front = front;
  const int x = succ(u);
  if (x == 0 || x == v) return false;
  const int ru = route_of_[static_cast<std::size_t>(u)];
  const int rv = route_of_[static_cast<std::size_t>(v)];
  const std::vector<int> pair = reversed ? std::vector<int>{x, u} : std::vector<int>{u, x};
  std::vector<int> new_u, new_v;
  const auto& RU = routes_[static_cast<std::size_t>(ru)];
  const auto& RV = routes_[static_cast<std::size_t>(rv)];
  if (ru == rv) {
    if (front) new_u = pair;
    for (int y : RU.nodes) {
      if (y == u || y == x) continue;
      new_u.push_back(y);
      if (!front && y == v) new_u.insert(new_u.end(), pair.begin(), pair.end());
    }
  } else {
    for (int y : RU.nodes)
      if (y != u && y != x) new_u.push_back(y);
    if (front) new_v = pair;
    for (int y : RV.nodes) {
      new_v.push_back(y);
      if (!front && y == v) new_v.insert(new_v.end(), pair.begin(), pair.end());
    }
  }
  return try_generic(MoveFamily::RelocatePair, ru, rv, std::move(new_u), std::move(new_v));
}

// Exchanges (u, succ u) with v, or with (v, succ v) when pair_v is set.
bool LocalSearch::try_swap_pair(int u, int v, bool pair_v) {
  g_ctx.front = false;
  const int x = succ(u);
  if (x == 0 || x == v) return false;
  const int y = pair_v ? succ(v) : -1;
  if (pair_v && (y == 0 || y == u)) return false;
  const int ru = route_of_[static_cast<std::size_t>(u)];
  const int rv = route_of_[static_cast<std::size_t>(v)];
  const std::vector<int> block_u{u, x};
  const std::vector<int> block_v = pair_v ? std::vector<int>{v, y} : std::vector<int>{v};
  auto rewrite = [&](const std::vector<int>& nodes) {
    std::vector<int> out;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      int z = nodes[k];
      if (z == u) {
        out.insert(out.end(), block_v.begin(), block_v.end());
        ++k;
      } else if (z == v) {
        out.insert(out.end(), block_u.begin(), block_u.end());
        if (pair_v) ++k;
      } else {
        out.push_back(z);
      }
    }
    return out;
  };
  std::vector<int> new_u = rewrite(routes_[static_cast<std::size_t>(ru)].nodes);
  std::vector<int> new_v;
  if (rv != ru) new_v = rewrite(routes_[static_cast<std::size_t>(rv)].nodes);
  return try_generic(MoveFamily::SwapPair, ru, rv, std::move(new_u), std::move(new_v));
}

bool LocalSearch::try_pair(int u, int v, int sweep, LsStats* stats) {
  g_ctx = Context{sweep, u, v, stats};
  const bool v_first = pos_of_[static_cast<std::size_t>(v)] == 0;
  if (try_relocate(u, v, false)) return true;
  if (v_first && try_relocate(u, v, true)) return true;
  if (try_swap(u, v)) return true;
  if (route_of_[static_cast<std::size_t>(u)] == route_of_[static_cast<std::size_t>(v)]) {
    if (try_two_opt(u, v)) return true;
  } else {
    if (try_two_opt_star(u, v, false)) return true;
    if (v_first && try_two_opt_star(u, v, true)) return true;
  }
  if (config_.extended_moves) {
    if (try_relocate_pair(u, v, false, false)) return true;
    if (try_relocate_pair(u, v, false, true)) return true;
    if (v_first && try_relocate_pair(u, v, true, false)) return true;
    if (v_first && try_relocate_pair(u, v, true, true)) return true;
    if (try_swap_pair(u, v, false)) return true;
    if (try_swap_pair(u, v, true)) return true;
  }
  return false;
}

Solution LocalSearch::run(const Solution& start, double w, Rng& rng, LsStats* stats) {
  if (w < 0) throw DomainError("penalty weight must be nonnegative");
  w_ = w;
  load(start);
  MoveCounters scratch;
  counters_ = stats ? &stats->counters : &scratch;

  const int n = inst_.customer_count();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  // Stamp at which each customer's neighborhood was last scanned. A pair is
  // rescanned only if one of its two routes changed since then.
  std::vector<std::int64_t> tested(static_cast<std::size_t>(n) + 1, -1);

  int sweep = 0;
  for (;; ++sweep) {
    shuffle(std::span<int>(order), rng);
    bool improved = false;
    for (int u : order) {
      const std::int64_t since = tested[static_cast<std::size_t>(u)];
      tested[static_cast<std::size_t>(u)] = static_cast<std::int64_t>(move_stamp_);
      for (int v : nl_[u]) {
        const auto& RU = routes_[static_cast<std::size_t>(route_of_[static_cast<std::size_t>(u)])];
        const auto& RV = routes_[static_cast<std::size_t>(route_of_[static_cast<std::size_t>(v)])];
        if (static_cast<std::int64_t>(RU.modified) <= since && static_cast<std::int64_t>(RV.modified) <= since)
          continue;
        if (try_pair(u, v, sweep, stats)) improved = true;
      }
    }
    if (!improved) break;
  }
  if (stats) stats->sweeps = sweep + 1;
  counters_ = nullptr;
  g_ctx = Context{};
  return export_solution();
}

Solution local_search(const Instance& inst, const Solution& start, const NeighborLists& nl, double w,
                      Rng& rng, LsStats* stats, LsConfig config) {
  LocalSearch ls(inst, nl, config);
  return ls.run(start, w, rng, stats);
}

Solution repair(const Instance& inst, const Solution& sol, const NeighborLists& nl, double w, Rng& rng,
                LsStats* stats, LsConfig config, double repair_multiplier) {
  if (evaluate(inst, sol, 0.0) == evaluate(inst, sol, 1.0))
    throw ContractError("repair called on a feasible solution");
  LocalSearch ls(inst, nl, config);
  return ls.run(sol, w * repair_multiplier, rng, stats);
}

std::string format_audit_csv(const std::vector<AuditEntry>& audit) {
  std::ostringstream out;
  out << "sweep,family,i,j,delta\n";
  for (const auto& e : audit)
    out << e.sweep << ',' << to_string(e.family) << ',' << e.i << ',' << e.j << ',' << e.delta << '\n';
  return out.str();
}

}  // namespace rhgs
