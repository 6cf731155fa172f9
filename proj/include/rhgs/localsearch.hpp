#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rhgs/instance.hpp"
#include "rhgs/relatedness.hpp"
#include "rhgs/rng.hpp"
#include "rhgs/splittour.hpp"

namespace rhgs {

// A move is applied only when it lowers the penalized cost by more than this.
inline constexpr double kImprovementEpsilon = 1e-9;

enum class MoveFamily : int {
  Relocate = 0,
  Swap = 1,
  TwoOpt = 2,
  TwoOptStar = 3,
  RelocatePair = 4,  // extension: (i, succ i) moved after j
  SwapPair = 5,      // extension: (i, succ i) exchanged with j or (j, succ j)
};
inline constexpr int kMoveFamilyCount = 6;

std::string_view to_string(MoveFamily family);

struct MoveCounters {
  std::array<std::uint64_t, kMoveFamilyCount> evaluated{};
  std::array<std::uint64_t, kMoveFamilyCount> applied{};
  std::uint64_t total_evaluated() const;
  std::uint64_t total_applied() const;
};

struct AuditEntry {
  int sweep = 0;
  MoveFamily family = MoveFamily::Relocate;
  int i = 0;
  int j = 0;  // 0 when the target is the depot slot in front of a route's first customer
  int related = 0;  // the member of Phi(i) that made the move admissible
  double delta = 0;
};

struct LsConfig {
  // Relocate-pair and swap-pair variants; off by default.
  bool extended_moves = false;
  // Recompute the objective from scratch after every applied move and throw
  // std::logic_error on any drift from the incrementally tracked value.
  bool verify_each_move = false;
  bool record_audit = false;
};

struct LsStats {
  MoveCounters counters;
  int sweeps = 0;
  std::vector<AuditEntry> audit;
};

// Granular first-improvement local search over Relocate, Swap, 2-Opt and
// 2-Opt* (plus the optional extensions). For every customer u (in a freshly
// shuffled order each sweep) and every v in Phi(u) (in list order), the
// families are tried in the order above and the first improving move is
// applied. Search stops after a sweep without any applied move.
//
// Moves that only ever look at u, v and the depot slot in front of v (when v
// opens its route) are admissible; empty routes are removed immediately and
// no move opens a new route.
class LocalSearch {
 public:
  LocalSearch(const Instance& inst, const NeighborLists& nl, LsConfig config = {});

  Solution run(const Solution& start, double w, Rng& rng, LsStats* stats = nullptr);

  // Incrementally tracked values of the last run.
  double tracked_distance() const { return total_distance_; }
  long long tracked_excess() const { return total_excess_; }

 private:
  struct Route {
    std::vector<int> nodes;
    std::vector<long long> prefix_load;  // inclusive
    long long load = 0;
    double distance = 0;
    std::uint64_t modified = 0;
  };

  struct Candidate {
    MoveFamily family;
    double delta_distance;
    long long delta_excess;
    int route_u;
    int route_v;
    std::vector<int> new_u;
    std::vector<int> new_v;
  };

  void load(const Solution& start);
  Solution export_solution() const;
  void refresh(int r);
  int pred(int c) const;
  int succ(int c) const;
  long long excess_of(long long load) const;
  double delta_of(double dd, long long de) const { return dd + w_ * static_cast<double>(de); }

  bool try_pair(int u, int v, int sweep, LsStats* stats);
  bool try_relocate(int u, int v, bool front);
  bool try_swap(int u, int v);
  bool try_two_opt(int u, int v);
  bool try_two_opt_star(int u, int v, bool front);
  bool try_relocate_pair(int u, int v, bool front, bool reversed);
  bool try_swap_pair(int u, int v, bool pair_v);
  bool try_generic(MoveFamily family, int ru, int rv, std::vector<int> new_u, std::vector<int> new_v);
  void apply(const Candidate& c);
  void verify() const;

  const Instance& inst_;
  const NeighborLists& nl_;
  LsConfig config_;
  double w_ = 0;

  std::vector<Route> routes_;
  std::vector<int> route_of_;
  std::vector<int> pos_of_;
  double total_distance_ = 0;
  long long total_excess_ = 0;
  std::uint64_t move_stamp_ = 0;

  MoveCounters* counters_ = nullptr;
};

Solution local_search(const Instance& inst, const Solution& start, const NeighborLists& nl,
                      double w, Rng& rng, LsStats* stats = nullptr, LsConfig config = {});

// Local search at repair_multiplier * w. Throws ContractError when sol is
// already feasible.
Solution repair(const Instance& inst, const Solution& sol, const NeighborLists& nl, double w,
                Rng& rng, LsStats* stats = nullptr, LsConfig config = {},
                double repair_multiplier = 10.0);

// CSV move log: sweep,family,i,j,delta
std::string format_audit_csv(const std::vector<AuditEntry>& audit);

}  // namespace rhgs
