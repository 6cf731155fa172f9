#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rhgs/clock.hpp"
#include "rhgs/instance.hpp"
#include "rhgs/relatedness.hpp"
#include "rhgs/splittour.hpp"

namespace rhgs {

enum class Relatedness { Distance, Heatmap };
enum class CrossoverKind { Ox, Related };

// Solver variant HGS-<ls>-<xo>: the relatedness used by the local search
// neighbor lists (D or N) and the crossover (O = plain OX, D = DOX, N = NOX).
struct Variant {
  Relatedness ls = Relatedness::Distance;
  CrossoverKind xo = CrossoverKind::Ox;
  Relatedness xo_relatedness = Relatedness::Distance;  // meaningful when xo == Related

  bool needs_heatmap() const;
  std::string code() const;  // "d-o", "n-d", ...
  std::string name() const;  // "HGS-D-O", ...
  friend bool operator==(const Variant&, const Variant&) = default;
};

// Accepts d-o, d-d, d-n, n-o, n-d, n-n (any case, '-' or '_'), with or
// without a leading "hgs-".
Variant parse_variant(std::string_view text);
std::vector<Variant> all_variants();

struct SearchParams {
  int mu = 12;
  int lambda = 20;
  int gamma = 15;
  int n_it = 20000;            // offspring without improvement before a restart
  double time_limit = 10;      // seconds on the search clock
  long long max_iterations = 0;  // offspring limit; 0 = none
  double xi = 0.2;             // target feasible fraction
  int adapt_interval = 100;
  double repair_prob = 0.5;
  double repair_mult = 10;
  int n_closest = 5;
  std::optional<double> w_init;  // default mean_edge_cost / mean_demand
  double w_max = 100000;
  std::uint64_t seed = 1;
  ClockKind clock = ClockKind::Work;
  double work_units_per_second = kDefaultWorkUnitsPerSecond;
  double inference_seconds = 0;  // charged to the clock before the search starts
  bool extended_moves = false;

  int n_elite() const { return (mu + 3) / 4; }
  void validate() const;
};

struct TracePoint {
  double seconds = 0;
  double cost = 0;
};

struct BestSolutionReport {
  std::string instance;
  std::string variant;
  std::uint64_t seed = 0;
  int gamma = 0;
  double time_limit = 0;
  std::string clock;
  bool feasible = false;
  Solution best;
  double best_found_seconds = 0;
  double elapsed_seconds = 0;
  double inference_seconds = 0;
  long long iterations = 0;
  int restarts = 0;
  double final_penalty = 0;
  std::vector<TracePoint> trace;
  std::string diagnostic;
};

// mean_edge_cost / mean_demand, the starting capacity penalty.
double initial_penalty(const Instance& inst);

// Hybrid genetic search. The heatmap is required iff the variant needs one.
//
// Random draw order on the single stream seeded with params.seed: per initial
// individual a tour shuffle then the local search draws; per iteration two
// tournaments (two index draws each), the crossover draws, the local search
// draws, then the repair coin (only for infeasible offspring) and the repair's
// local search draws.
BestSolutionReport run_hgs(const Instance& inst, const SearchParams& params, const Variant& variant,
                           const Heatmap* heatmap = nullptr);

// Single-line-per-field JSON; identical inputs give identical bytes.
std::string report_to_json(const BestSolutionReport& report);
BestSolutionReport report_from_json(const std::string& text);

}  // namespace rhgs
