#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rhgs/clock.hpp"
#include "rhgs/genetic.hpp"
#include "rhgs/instance.hpp"
#include "rhgs/relatedness.hpp"

namespace rhgs {

// 100 * (z - z_bks) / z_bks. Throws DomainError unless z_bks > 0.
double gap_percent(double z, double z_bks);

class DegenerateSampleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct WilcoxonResult {
  double statistic = 0;  // W+: rank sum of positive differences a - b
  double p_value = 1;    // two-tailed
  int nonzero_pairs = 0;
  bool exact = false;
};

// Paired signed-rank test on a - b. Zero differences are dropped, tied
// magnitudes get midranks. Up to 25 nonzero pairs the p-value comes from the
// exact null distribution; above that from the normal approximation with
// continuity and tie corrections. Throws DegenerateSampleError when every
// difference is zero and DomainError for fewer than 6 nonzero pairs or
// mismatched lengths.
WilcoxonResult wilcoxon_paired(const std::vector<double>& a, const std::vector<double>& b);

struct Budget {
  enum class Rule { Fixed, Linear };
  Rule rule = Rule::Fixed;
  double seconds = 10;  // Fixed: per run; Linear: seconds at n = 100

  double seconds_for(int n) const;
};

struct HeatmapSource {
  enum class Kind { None, Directory, Oracle };
  Kind kind = Kind::None;
  // Directory: <path>/<instance name>.heatmap. Oracle: solutions in
  // <path>/<instance name>*.sol, perturbed by `noise`.
  std::string path;
  double noise = 0.05;
};

// Instance entries are CVRPLIB paths, directories (every *.vrp inside, sorted)
// or generator specs written as "gen:<spec>@<seed>".
struct ExperimentMatrix {
  std::vector<std::string> instances;
  std::vector<Variant> variants;
  std::vector<std::uint64_t> seeds{1};
  Budget budget;
  std::vector<int> gammas{15};
  HeatmapSource heatmap;
  // Programmatic alternative to `heatmap`; takes precedence when set.
  std::function<Heatmap(const Instance&)> heatmap_provider;
  bool optimistic = false;  // do not charge heatmap preparation time
  int workers = 1;
  ClockKind clock = ClockKind::Work;
  double work_units_per_second = kDefaultWorkUnitsPerSecond;
  int n_it = 20000;
  // "bks": gaps against the instance reference cost; "best": against the best
  // cost over all records of the same instance.
  std::string reference = "bks";
  std::string output = "bench-out";

  void validate() const;
};

ExperimentMatrix parse_matrix_config(std::string_view text);
ExperimentMatrix load_matrix_config(const std::string& path);

// Expands directory entries and generator specs into instances.
std::vector<Instance> resolve_instances(const std::vector<std::string>& entries);

struct RunRecord {
  std::string instance;
  int n = 0;
  std::optional<GeneratorSpec> attributes;
  std::string variant;  // code, e.g. "d-o"
  std::uint64_t seed = 0;
  int gamma = 0;
  double budget = 0;
  std::optional<double> cost;
  std::optional<double> reference;
  std::optional<double> gap;
  bool hit = false;
  double time_to_best = 0;
  double elapsed = 0;
  double inference_seconds = 0;
  long long iterations = 0;
  std::vector<TracePoint> trace;
  std::vector<std::vector<int>> routes;
  std::string error;
};

// Every (instance, gamma, variant, seed) cell, in that nesting order. Cells
// run on `workers` threads; a failing cell records its error.
std::vector<RunRecord> run_matrix(const ExperimentMatrix& m);
std::vector<RunRecord> run_matrix(const ExperimentMatrix& m, const std::vector<Instance>& instances);

// Fills reference, gap and hit per record. mode is "bks" or "best".
void assign_references(std::vector<RunRecord>& records, std::string_view mode,
                       const std::vector<Instance>& instances = {});

struct CalibrationRow {
  std::string instance;
  int gamma = 0;
  std::optional<double> best_cost;  // best feasible of the ten starts
  std::optional<double> gap;
  double ls_seconds = 0;  // summed over the ten local searches
  std::uint64_t move_evaluations = 0;
};

struct CalibrationTable {
  std::vector<CalibrationRow> rows;
  // Per gamma (input order): mean gap over rows with a gap, mean time.
  std::vector<int> gammas;
  std::vector<double> mean_gap;
  std::vector<double> mean_seconds;
};

// Ten random giant tours per (instance, gamma), each Split and improved by a
// single local search at the initial penalty (repaired if infeasible). Gaps
// use the instance reference cost, else the best cost over all gammas of that
// instance. Time is measured on the given clock; the work clock makes rows
// reproducible.
CalibrationTable calibration_protocol(const std::vector<Instance>& instances, const std::vector<int>& gammas,
                                      std::uint64_t seed, ClockKind clock = ClockKind::Work,
                                      double work_units_per_second = kDefaultWorkUnitsPerSecond);

std::string calibration_csv(const CalibrationTable& table);
std::string calibration_summary_csv(const CalibrationTable& table);

// CSV builders; all have a header row.
std::string records_csv(const std::vector<RunRecord>& records);
// variant,runs,with_reference,opt,mean_gap,mean_time,errors
std::string summary_csv(const std::vector<RunRecord>& records);
// variant,bucket,fraction,mean_gap,runs with 200 buckets per variant.
std::string convergence_csv(const std::vector<RunRecord>& records, int buckets = 200);
// One row per record with generator attributes, for boxplots.
std::string grouped_gap_csv(const std::vector<RunRecord>& records);
// Pairwise Wilcoxon comparisons over records matched by instance, seed, gamma.
std::string comparison_csv(const std::vector<RunRecord>& records);

// Writes the five CSVs into dir (created if missing). Throws IoError.
void emit_reports(const std::vector<RunRecord>& records, const std::string& dir);

}  // namespace rhgs
