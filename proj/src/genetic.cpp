#include "rhgs/genetic.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "rhgs/crossover.hpp"
#include "rhgs/errors.hpp"
#include "rhgs/localsearch.hpp"
#include "rhgs/population.hpp"

namespace rhgs {

bool Variant::needs_heatmap() const {
  return ls == Relatedness::Heatmap || (xo == CrossoverKind::Related && xo_relatedness == Relatedness::Heatmap);
}

std::string Variant::code() const {
  std::string out = ls == Relatedness::Distance ? "d-" : "n-";
  if (xo == CrossoverKind::Ox)
    out += 'o';
  else
    out += xo_relatedness == Relatedness::Distance ? 'd' : 'n';
  return out;
}

std::string Variant::name() const {
  std::string c = code();
  for (auto& ch : c) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return "HGS-" + c;
}

Variant parse_variant(std::string_view text) {
  std::string s;
  for (char ch : text) s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  std::replace(s.begin(), s.end(), '_', '-');
  if (s.rfind("hgs-", 0) == 0) s = s.substr(4);
  if (s.size() != 3 || s[1] != '-' || (s[0] != 'd' && s[0] != 'n') || (s[2] != 'o' && s[2] != 'd' && s[2] != 'n'))
    throw ParseError("unknown variant '" + std::string(text) + "' (expected d-o|d-d|d-n|n-o|n-d|n-n)");
  Variant v;
  v.ls = s[0] == 'd' ? Relatedness::Distance : Relatedness::Heatmap;
  if (s[2] == 'o') {
    v.xo = CrossoverKind::Ox;
  } else {
    v.xo = CrossoverKind::Related;
    v.xo_relatedness = s[2] == 'd' ? Relatedness::Distance : Relatedness::Heatmap;
  }
  return v;
}

std::vector<Variant> all_variants() {
  std::vector<Variant> out;
  for (auto code : {"d-o", "d-d", "d-n", "n-o", "n-d", "n-n"}) out.push_back(parse_variant(code));
  return out;
}

void SearchParams::validate() const {
  if (mu < 1 || lambda < 1 || gamma < 1 || n_it < 1 || adapt_interval < 1 || n_closest < 1)
    throw DomainError("population and neighborhood parameters must be positive");
  if (!(time_limit > 0)) throw DomainError("time limit must be positive");
  if (!(xi > 0 && xi < 1)) throw DomainError("target feasible fraction must lie in (0, 1)");
  if (!(repair_prob >= 0 && repair_prob <= 1)) throw DomainError("repair probability must lie in [0, 1]");
  if (!(repair_mult > 0) || !(w_max > 0)) throw DomainError("penalty parameters must be positive");
  if (w_init && !(*w_init > 0)) throw DomainError("initial penalty must be positive");
  if (inference_seconds < 0) throw DomainError("inference seconds must be nonnegative");
}

double initial_penalty(const Instance& inst) {
  const double mean_demand = static_cast<double>(inst.total_demand()) / inst.customer_count();
  const double w0 = inst.mean_edge_cost() / mean_demand;
  return w0 > 0 ? w0 : 1.0;
}

namespace {

GiantTour concatenate(const Solution& sol) {
  GiantTour tour;
  for (const auto& r : sol.routes) tour.order.insert(tour.order.end(), r.begin(), r.end());
  return tour;
}

class Search {
 public:
  Search(const Instance& inst, const SearchParams& params, const Variant& variant, const Heatmap* heatmap)
      : inst_(inst),
        params_(params),
        variant_(variant),
        rng_(params.seed),
        clock_(params.clock, params.work_units_per_second),
        feasible_(FitnessParams{params.n_elite(), params.n_closest}),
        infeasible_(FitnessParams{params.n_elite(), params.n_closest}) {
    auto lists_for = [&](Relatedness r) {
      return r == Relatedness::Distance ? build_neighbor_lists_distance(inst, params.gamma)
                                        : build_neighbor_lists_hybrid(inst, *heatmap, params.gamma);
    };
    ls_lists_ = lists_for(variant.ls);
    if (variant.xo == CrossoverKind::Related) xo_lists_ = lists_for(variant.xo_relatedness);
    ls_config_.extended_moves = params.extended_moves;

    const double w0 = initial_penalty(inst);
    penalty_.target_feasible = params.xi;
    penalty_.w_min = 0.01 * w0;
    penalty_.w_max = params.w_max;
    penalty_.w = std::clamp(params.w_init.value_or(w0), penalty_.w_min, penalty_.w_max);

    clock_.charge_seconds(params.inference_seconds);
    report_.instance = inst.name();
    report_.variant = variant.name();
    report_.seed = params.seed;
    report_.gamma = params.gamma;
    report_.time_limit = params.time_limit;
    report_.clock = std::string(to_string(params.clock));
    report_.inference_seconds = params.inference_seconds;
  }

  BestSolutionReport run() {
    initialize();
    while (!out_of_time() && inst_.customer_count() > 1) {
      feasible_.update_fitness(penalty_.w);
      infeasible_.update_fitness(penalty_.w);
      const Individual& p1 = tournament();
      const Individual& p2 = tournament();
      GiantTour child = variant_.xo == CrossoverKind::Ox ? ox_crossover(p1.tour, p2.tour, rng_)
                                                         : relatedness_ox(p1.tour, p2.tour, *xo_lists_, rng_);
      clock_.charge(child.order.size());
      educate_and_insert(child);
      ++report_.iterations;
      if (++since_improvement_ >= params_.n_it) restart();
    }
    report_.elapsed_seconds = clock_.elapsed_seconds();
    report_.final_penalty = penalty_.w;
    if (!report_.feasible) report_.diagnostic = "no feasible solution found within the time limit";
    return report_;
  }

 private:
  bool out_of_time() const {
    if (params_.max_iterations > 0 && report_.iterations >= params_.max_iterations) return true;
    return clock_.elapsed_seconds() >= params_.time_limit;
  }

  void initialize() {
    const int count = 2 * params_.mu;
    GiantTour tour;
    tour.order.resize(static_cast<std::size_t>(inst_.customer_count()));
    for (int k = 0; k < count; ++k) {
      if (k > 0 && out_of_time()) break;
      std::iota(tour.order.begin(), tour.order.end(), 1);
      shuffle(std::span<int>(tour.order), rng_);
      educate_and_insert(tour);
      if (inst_.customer_count() == 1) break;
    }
  }

  void restart() {
    ++report_.restarts;
    since_improvement_ = 0;
    feasible_.clear();
    infeasible_.clear();
    initialize();
  }

  const Individual& tournament() {
    const std::size_t total = feasible_.size() + infeasible_.size();
    auto pick = [&](std::size_t k) -> const Individual& {
      return k < feasible_.size() ? feasible_[k] : infeasible_[k - feasible_.size()];
    };
    const Individual& a = pick(uniform_below(rng_, total));
    const Individual& b = pick(uniform_below(rng_, total));
    return b.biased_fitness < a.biased_fitness ? b : a;
  }

  void educate_and_insert(const GiantTour& tour) {
    SplitWork work;
    Solution sol = split(inst_, tour, penalty_.w, {}, &work);
    clock_.charge(work.arcs);
    sol = educate(sol, penalty_.w);
    insert(sol);
    penalty_.window.push_back(sol.feasible());
    if (static_cast<int>(penalty_.window.size()) >= params_.adapt_interval) penalty_ = adapt_penalty(penalty_);

    if (!sol.feasible() && uniform01(rng_) < params_.repair_prob) {
      Solution fixed = educate(sol, penalty_.w * params_.repair_mult);
      insert(fixed);
    }
  }

  Solution educate(const Solution& sol, double w) {
    LsStats stats;
    Solution out = local_search(inst_, sol, ls_lists_, w, rng_, &stats, ls_config_);
    clock_.charge(stats.counters.total_evaluated());
    return out;
  }

  void insert(const Solution& sol) {
    if (sol.feasible() && (!report_.feasible || sol.distance < report_.best.distance - kImprovementEpsilon)) {
      report_.feasible = true;
      report_.best = sol;
      report_.best_found_seconds = clock_.elapsed_seconds();
      report_.trace.push_back(TracePoint{report_.best_found_seconds, sol.distance});
      since_improvement_ = 0;
    }
    Pool& pool = sol.feasible() ? feasible_ : infeasible_;
    GiantTour tour = concatenate(sol);
    if (pool.contains_tour(tour)) return;
    pool.add(Individual{std::move(tour), sol, next_id_++, 0, {}});
    const auto cap = static_cast<std::size_t>(params_.mu + params_.lambda);
    if (pool.size() > cap) pool.survivor_selection(static_cast<std::size_t>(params_.mu), penalty_.w);
  }

  const Instance& inst_;
  const SearchParams& params_;
  Variant variant_;
  NeighborLists ls_lists_;
  std::optional<NeighborLists> xo_lists_;
  LsConfig ls_config_;
  Rng rng_;
  SearchClock clock_;
  Pool feasible_;
  Pool infeasible_;
  PenaltyState penalty_;
  std::uint64_t next_id_ = 1;
  long long since_improvement_ = 0;
  BestSolutionReport report_;
};

}  // namespace

BestSolutionReport run_hgs(const Instance& inst, const SearchParams& params, const Variant& variant,
                           const Heatmap* heatmap) {
  params.validate();
  if (variant.needs_heatmap() && heatmap == nullptr)
    throw ContractError(variant.name() + " requires a heatmap");
  if (heatmap && heatmap->customer_count() != inst.customer_count())
    throw ContractError("heatmap size does not match the instance");
  Search search(inst, params, variant, heatmap);
  return search.run();
}

}  // namespace rhgs
