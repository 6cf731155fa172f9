// Acceptance suite: one PASS/FAIL line per criterion.
#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "helpers.hpp"
#include "oracles.hpp"
#include "rhgs/crossover.hpp"
#include "rhgs/genetic.hpp"
#include "rhgs/harness.hpp"
#include "rhgs/localsearch.hpp"

using namespace rhgs;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& label, const Outcome& o, double seconds) {
  std::ostringstream time;
  time.precision(1);
  time << std::fixed << seconds;
  std::cout << label << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail << "; " << time.str() << " s)"
            << std::endl;
  if (!o.pass) ++failures;
}

void run(const std::string& label, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  report(label, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

// Criterion 1: Split against exhaustive segmentation, n <= 8.
Outcome split_optimality() {
  Rng rng(1001);
  const double weights[] = {0.5, 2, 10};
  int mismatches = 0;
  for (int t = 0; t < 500; ++t) {
    const int n = static_cast<int>(uniform_int(rng, 1, 8));
    const int q = static_cast<int>(uniform_int(rng, 5, 25));
    Instance inst = testing::random_instance(n, q, q, rng);
    GiantTour tour = testing::random_tour(n, rng);
    const double w = weights[t % 3];
    if (split(inst, tour, w).penalized_cost(w) != testing::brute_force_split(inst, tour, w)) ++mismatches;
  }
  return {mismatches == 0, "500 trials, " + std::to_string(mismatches) + " mismatches"};
}

// Criterion 2: exhaustive admissible-move scan after local search, n = 100.
Outcome ls_certificate() {
  Rng rng(2002);
  int improvable = 0, drift = 0;
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    Instance inst = testing::random_instance(100, 50, 10, rng);
    auto nl = build_neighbor_lists_distance(inst, 15);
    Solution start = testing::random_solution(inst, static_cast<int>(uniform_int(rng, 1, 30)), rng);
    const double w = t % 2 ? 1.0 : 20.0;
    LocalSearch ls(inst, nl);
    Solution out = ls.run(start, w, rng, nullptr);
    const double certificate = testing::best_admissible_delta(inst, out, nl, w);
    worst = std::min(worst, certificate);
    if (certificate < -1e-9) ++improvable;
    const double incremental = ls.tracked_distance() + w * static_cast<double>(ls.tracked_excess());
    if (incremental != evaluate(inst, out, w) || out.penalized_cost(w) != evaluate(inst, out, w)) ++drift;
  }
  return {improvable == 0 && drift == 0, "50 instances, " + std::to_string(improvable) +
                                             " with an improving move, " + std::to_string(drift) +
                                             " with cost drift, best scan delta " + fmt(worst)};
}

// Criterion 6: permutation validity and the documented reconnection trace.
Outcome crossover_validity() {
  Rng rng(6006);
  int invalid = 0;
  for (int t = 0; t < 100000; ++t) {
    const int n = static_cast<int>(uniform_int(rng, 1, 50));
    auto p1 = testing::random_tour(n, rng), p2 = testing::random_tour(n, rng);
    if (!is_valid_tour(ox_crossover(p1, p2, rng), n)) ++invalid;
  }
  for (int t = 0; t < 100000; ++t) {
    const int n = static_cast<int>(uniform_int(rng, 2, 50));
    Instance inst = testing::random_instance(n, 20, 5, rng);
    auto p1 = testing::random_tour(n, rng), p2 = testing::random_tour(n, rng);
    auto nl = build_neighbor_lists_distance(inst, static_cast<int>(uniform_int(rng, 1, std::min(n - 1, 30))));
    if (!is_valid_tour(relatedness_ox(p1, p2, nl, rng), n)) ++invalid;
  }
  // F = [9, 1, 10, 7] copied from p1[1..4]; i = 7 reconnects to j = 8
  GiantTour p1{{3, 9, 1, 10, 7, 2, 5, 4, 8, 6}};
  GiantTour p2{{2, 8, 5, 3, 9, 6, 1, 4, 7, 10}};
  const std::vector<int> expected{2, 9, 1, 10, 7, 8, 5, 3, 6, 4};
  const bool trace = ox_fill(p1, p2, 1, 4, tour_positions(p2)[8]).order == expected;
  return {invalid == 0 && trace,
          "200000 applications, " + std::to_string(invalid) + " invalid, trace " + (trace ? "matches" : "differs")};
}

std::string read_command(const std::string& cmd) {
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("cannot run " + cmd);
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw std::runtime_error("command failed: " + cmd);
  return out;
}

// Criterion 7: byte-identical solve reports and exact Wilcoxon p-values.
Outcome determinism(const std::string& cli) {
  const fs::path dir = fs::temp_directory_path() / "rhgs_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  int differing = 0, runs = 0;
  for (std::uint64_t k = 0; k < 3; ++k) {
    Instance inst = generate_instance(parse_generator_spec("n=60,customers=mixed,demand=small,r=6"), 70 + k);
    const fs::path file = dir / (inst.name() + ".vrp");
    std::ofstream(file) << emit_cvrplib(inst);
    SearchParams quick;
    quick.time_limit = 1;
    const std::vector<Solution> elite{run_hgs(inst, quick, parse_variant("d-o")).best};
    Heatmap hm = synthesize_oracle_heatmap(inst, elite, 0.05, k);
    const fs::path heat = dir / (inst.name() + ".heatmap");
    save_heatmap(hm, heat.string());
    for (const auto& v : all_variants()) {
      std::string cmd = "\"" + cli + "\" solve --instance \"" + file.string() + "\" --mode " + v.code() +
                        " --time-limit 0.3 --seed " + std::to_string(11 + k);
      if (v.needs_heatmap()) cmd += " --heatmap \"" + heat.string() + "\"";
      cmd += " 2>/dev/null";
      if (read_command(cmd) != read_command(cmd)) ++differing;
      ++runs;
    }
  }
  fs::remove_all(dir);

  Rng rng(7007);
  int samples = 0, mismatched = 0;
  while (samples < 40) {
    std::vector<double> a(15), b(15);
    for (std::size_t k = 0; k < 15; ++k) {
      a[k] = static_cast<double>(uniform_int(rng, 0, 15)) / 10;
      b[k] = static_cast<double>(uniform_int(rng, 0, 15)) / 10;
    }
    std::size_t nonzero = 0;
    for (std::size_t k = 0; k < 15; ++k) nonzero += a[k] != b[k];
    if (nonzero < 6) continue;
    double w = 0;
    const double p = testing::brute_force_wilcoxon_p(a, b, &w);
    auto r = wilcoxon_paired(a, b);
    if (!r.exact || std::fabs(r.p_value - p) > 1e-12 * std::max(1.0, p) || std::fabs(r.statistic - w) > 1e-9)
      ++mismatched;
    ++samples;
  }
  return {differing == 0 && mismatched == 0, std::to_string(runs) + " solve pairs, " + std::to_string(differing) +
                                                 " differing; " + std::to_string(samples) +
                                                 " Wilcoxon samples, " + std::to_string(mismatched) + " mismatched"};
}

std::vector<Instance> ablation_instances() {
  const DepotMode depots[] = {DepotMode::Central, DepotMode::Eccentric, DepotMode::Random};
  const CustomerMode customers[] = {CustomerMode::Random, CustomerMode::Clustered, CustomerMode::Mixed};
  const DemandMode demands[] = {DemandMode::Unitary, DemandMode::SmallRange, DemandMode::LargeRange};
  const double sizes[] = {4, 7, 10, 13};
  std::vector<Instance> out;
  for (int k = 0; k < 100; ++k) {
    GeneratorSpec spec;
    spec.n = 100;
    spec.depot = depots[k % 3];
    spec.customers = customers[(k / 3) % 3];
    spec.demand = demands[(k / 9) % 3];
    spec.route_size = sizes[k % 4];
    out.push_back(generate_instance(spec, 5000 + static_cast<std::uint64_t>(k)));
  }
  return out;
}

std::vector<double> gaps_of(const std::vector<RunRecord>& records, const std::string& variant) {
  std::vector<double> out;
  for (const auto& r : records)
    if (r.variant == variant) out.push_back(r.gap.value_or(std::nan("")));
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? std::nan("") : s / static_cast<double>(v.size());
}

// Criteria 3, 4 and 5 share one experiment: D-O and D-D first, then D-N with
// oracle heatmaps built from their best solutions.
void ablation(const fs::path& out_dir) {
  const auto instances = ablation_instances();
  std::vector<RunRecord> records;
  std::vector<Instance> referenced;
  const auto t0 = std::chrono::steady_clock::now();
  auto since = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

  bool experiment_ok = true;
  std::string experiment_error;
  try {
    ExperimentMatrix m;
    m.variants = {parse_variant("d-o"), parse_variant("d-d")};
    m.seeds = {1};
    m.budget.seconds = 5;
    m.workers = worker_count();
    m.reference = "best";
    records = run_matrix(m, instances);

    std::map<std::string, std::vector<Solution>> elite;
    for (const auto& r : records)
      if (r.error.empty() && !r.routes.empty()) {
        const auto& inst = *std::find_if(instances.begin(), instances.end(),
                                         [&](const Instance& i) { return i.name() == r.instance; });
        elite[r.instance].push_back(make_solution(inst, r.routes));
      }
    ExperimentMatrix dn = m;
    dn.variants = {parse_variant("d-n")};
    dn.optimistic = true;
    dn.heatmap_provider = [&elite](const Instance& inst) {
      return synthesize_oracle_heatmap(inst, elite.at(inst.name()), 0.05, 1);
    };
    auto more = run_matrix(dn, instances);
    records.insert(records.end(), more.begin(), more.end());
    assign_references(records, "best", instances);
    emit_reports(records, (out_dir / "ablation").string());
    for (const auto& r : records)
      if (!r.error.empty()) {
        experiment_ok = false;
        experiment_error = r.instance + " " + r.variant + ": " + r.error;
      }
  } catch (const std::exception& e) {
    experiment_ok = false;
    experiment_error = e.what();
  }
  const double experiment_seconds = since();

  // Criterion 3 uses the best cost of the whole experiment as reference.
  run("criterion 3 (gamma trend in local search)", [&]() -> Outcome {
    if (!experiment_ok) return {false, "reference runs failed: " + experiment_error};
    std::map<std::string, double> best;
    for (const auto& r : records)
      if (r.reference) best[r.instance] = *r.reference;
    std::vector<Instance> with_ref;
    for (const auto& inst : instances) with_ref.push_back(inst.with_bks(best.at(inst.name())));
    auto table = calibration_protocol(with_ref, {5, 15, 30}, 3003);
    std::ofstream(out_dir / "calibration.csv") << calibration_csv(table);
    std::ofstream(out_dir / "calibration_summary.csv") << calibration_summary_csv(table);
    const auto& g = table.mean_gap;
    const auto& s = table.mean_seconds;
    const bool quality = g[1] < g[0] && g[2] <= g[1];
    const bool time = s[0] < s[1] && s[1] < s[2];
    return {quality && time, "mean gap % at 5/15/30: " + fmt(g[0]) + " / " + fmt(g[1]) + " / " + fmt(g[2]) +
                                 ", mean LS seconds: " + fmt(s[0]) + " / " + fmt(s[1]) + " / " + fmt(s[2])};
  });

  const auto dO = gaps_of(records, "d-o"), dD = gaps_of(records, "d-d"), dN = gaps_of(records, "d-n");
  run("criterion 4 (D-D versus D-O at 5 s)", [&]() -> Outcome {
    if (!experiment_ok) return {false, "experiment failed: " + experiment_error};
    const double mo = mean(dO), md = mean(dD);
    auto w = wilcoxon_paired(dD, dO);
    return {md <= mo && w.p_value < 0.05, "mean gap % D-O " + fmt(mo) + ", D-D " + fmt(md) + ", Wilcoxon p " +
                                              fmt(w.p_value) + " over " + std::to_string(w.nonzero_pairs) +
                                              " nonzero pairs, experiment " + fmt(experiment_seconds, 5) + " s"};
  });
  run("criterion 5 (heatmap parity, reporting only)", [&]() -> Outcome {
    if (!experiment_ok) return {false, "experiment failed: " + experiment_error};
    const double mn = mean(dN), md = mean(dD);
    std::string p = "n/a";
    try {
      p = fmt(wilcoxon_paired(dN, dD).p_value);
    } catch (const DegenerateSampleError&) {
      p = "n/a (identical samples)";
    }
    const bool table = fs::exists(out_dir / "ablation" / "comparisons.csv");
    return {table, "mean gap % D-N " + fmt(mn) + ", D-D " + fmt(md) + ", |difference| " + fmt(std::fabs(mn - md)) +
                       ", Wilcoxon p " + p + ", comparison table " + (table ? "written" : "missing")};
  });
}

// Criterion 8: X-n101-k25, 10 seeds x 24 s.
Outcome real_instance(const fs::path& data_dir, const fs::path& out_dir) {
  fs::path file = data_dir / "X-n101-k25.vrp";
  if (const char* env = std::getenv("ACCEPTANCE_X_N101_K25")) file = env;
  if (!fs::exists(file)) return {false, "instance file not available: " + file.string()};
  Instance inst = load_cvrplib(file.string());
  if (!inst.bks()) return {false, "no .bks sidecar next to " + file.string()};
  ExperimentMatrix m;
  m.variants = {parse_variant("d-d")};
  m.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  m.budget.seconds = 24;
  m.workers = worker_count();
  auto records = run_matrix(m, {inst});
  emit_reports(records, (out_dir / "x-n101-k25").string());
  std::vector<double> gaps;
  for (const auto& r : records) {
    if (!r.error.empty()) return {false, "run failed: " + r.error};
    gaps.push_back(*r.gap);
  }
  std::sort(gaps.begin(), gaps.end());
  const double median = (gaps[4] + gaps[5]) / 2;
  return {median <= 0.5, "median gap % " + fmt(median) + " against " + fmt(*inst.bks(), 10)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::string group = "all";
  std::string cli = RHGS_CLI_PATH;
  std::string data = RHGS_DATA_DIR;
  std::string out = "acceptance-out";
  app.add_option("--group", group, "fast, ablation, x-n101-k25 or all")
      ->check(CLI::IsMember({"fast", "ablation", "x-n101-k25", "all"}));
  app.add_option("--cli", cli, "path to the rhgs executable");
  app.add_option("--data", data, "directory holding benchmark instances");
  app.add_option("--output", out, "directory for experiment reports");
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(out);

  if (group == "fast" || group == "all") {
    run("criterion 1 (split optimality)", split_optimality);
    run("criterion 2 (local search certificate)", ls_certificate);
    run("criterion 6 (crossover validity)", crossover_validity);
    run("criterion 7 (determinism)", [&] { return determinism(cli); });
  }
  if (group == "ablation" || group == "all") ablation(out);
  if (group == "x-n101-k25" || group == "all")
    run("criterion 8 (X-n101-k25 sanity)", [&] { return real_instance(data, out); });
  return failures == 0 ? 0 : 1;
}
