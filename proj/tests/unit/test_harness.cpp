#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "oracles.hpp"
#include "rhgs/errors.hpp"
#include "rhgs/harness.hpp"

using namespace rhgs;
using testing::brute_force_wilcoxon_p;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("rhgs_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

RunRecord record(const std::string& instance, const std::string& variant, std::uint64_t seed, double cost,
                 double reference) {
  RunRecord r;
  r.instance = instance;
  r.variant = variant;
  r.seed = seed;
  r.gamma = 15;
  r.budget = 10;
  r.cost = cost;
  r.reference = reference;
  r.gap = gap_percent(cost, reference);
  r.hit = *r.gap <= 1e-9;
  r.time_to_best = 4;
  r.trace = {{1, cost + 10}, {4, cost}};
  return r;
}

}  // namespace

TEST_CASE("gap_percent") {
  CHECK(gap_percent(101, 100) == doctest::Approx(1.0));
  CHECK(gap_percent(100, 100) == 0.0);
  // 27 / 27591 = 0.000978579...; long division by hand: 27 * 100 / 27591
  CHECK(gap_percent(27618, 27591) == doctest::Approx(2700.0 / 27591.0).epsilon(1e-15));
  CHECK(gap_percent(27618, 27591) == doctest::Approx(0.0978579).epsilon(1e-6));
  CHECK(gap_percent(99, 100) < 0);
  CHECK_THROWS_AS(gap_percent(1, 0), DomainError);
}

TEST_CASE("wilcoxon: identical samples are degenerate") {
  std::vector<double> a{1, 2, 3, 4, 5, 6, 7};
  CHECK_THROWS_AS(wilcoxon_paired(a, a), DegenerateSampleError);
  CHECK_THROWS_AS(wilcoxon_paired({1, 2, 3}, {0, 0, 0}), DomainError);
}

TEST_CASE("wilcoxon: eight positive differences") {
  std::vector<double> a{1.1, 2.2, 3.3, 4.4, 5.5, 6.6, 7.7, 8.8}, b(8, 0.0);
  auto r = wilcoxon_paired(a, b);
  CHECK(r.exact);
  CHECK(r.statistic == 36);
  CHECK(r.p_value == 0.0078125);
}

TEST_CASE("wilcoxon: exact p matches enumeration of all 2^15 sign patterns") {
  Rng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> a(15), b(15);
    for (int k = 0; k < 15; ++k) {
      // one decimal place so that ties and zero differences occur
      a[static_cast<std::size_t>(k)] = static_cast<double>(uniform_int(rng, 0, 12)) / 10;
      b[static_cast<std::size_t>(k)] = static_cast<double>(uniform_int(rng, 0, 12)) / 10;
    }
    std::size_t nonzero = 0;
    for (std::size_t k = 0; k < 15; ++k) nonzero += a[k] != b[k];
    if (nonzero < 6) continue;
    double w = 0;
    const double p = brute_force_wilcoxon_p(a, b, &w);
    auto r = wilcoxon_paired(a, b);
    CHECK(r.exact);
    CHECK(r.statistic == doctest::Approx(w));
    CHECK(r.p_value == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("wilcoxon: normal approximation above 25 pairs") {
  std::vector<double> a, b;
  for (int k = 0; k < 40; ++k) {
    a.push_back(k + 1);
    b.push_back(k % 3 == 0 ? k + 1.5 : k);
  }
  auto r = wilcoxon_paired(a, b);
  CHECK(!r.exact);
  CHECK(r.p_value > 0);
  CHECK(r.p_value <= 1);
  // symmetric samples give a two-sided p of 1
  std::vector<double> c, d;
  for (int k = 0; k < 30; ++k) {
    c.push_back(k % 2 ? 1 : -1);
    d.push_back(0);
  }
  CHECK(wilcoxon_paired(c, d).p_value == doctest::Approx(1.0));
}

TEST_CASE("budget rules") {
  Budget fixed{Budget::Rule::Fixed, 5};
  CHECK(fixed.seconds_for(1000) == 5);
  Budget linear{Budget::Rule::Linear, 24};
  CHECK(linear.seconds_for(100) == 24);
  CHECK(linear.seconds_for(1000) == 240);
}

TEST_CASE("matrix config") {
  auto m = parse_matrix_config(R"(
# ablation
instances = ["gen:n=20,demand=small,r=5@1", "gen:n=20,demand=unitary,r=4@2"]
variants = ["d-o", "d-d", "n-n"]
seeds = [1, 2, 3]
gammas = [10, 15]
budget = 24
budget_rule = "linear"
heatmap = "oracle:sols"
heatmap_noise = 0.1
optimistic = true
workers = 2
clock = "work"
reference = "best"
output = "out-dir"
)");
  CHECK(m.instances.size() == 2);
  CHECK(m.variants.size() == 3);
  CHECK(m.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(m.gammas == std::vector<int>{10, 15});
  CHECK(m.budget.rule == Budget::Rule::Linear);
  CHECK(m.budget.seconds == 24);
  CHECK(m.heatmap.kind == HeatmapSource::Kind::Oracle);
  CHECK(m.heatmap.path == "sols");
  CHECK(m.heatmap.noise == 0.1);
  CHECK(m.optimistic);
  CHECK(m.workers == 2);
  CHECK(m.reference == "best");
  CHECK(m.output == "out-dir");
  CHECK_THROWS_AS(parse_matrix_config("instances = [\"a.vrp\"]\nvariants = [\"n-o\"]\n"), DomainError);
  CHECK_THROWS_AS(parse_matrix_config("colour = 3\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix_config("instances = [\"a.vrp\"]\nbudget = 0\n"), DomainError);
}

TEST_CASE("run_matrix: cardinality, reproducibility and optimistic accounting") {
  ExperimentMatrix m;
  m.instances = {"gen:n=25,depot=central,customers=random,demand=small,r=5@3"};
  m.variants = {parse_variant("d-o"), parse_variant("n-n")};
  m.seeds = {1, 2, 3};
  m.budget.seconds = 0.05;
  m.heatmap_provider = [](const Instance& inst) {
    Heatmap hm(inst.customer_count());
    for (int i = 1; i < inst.customer_count(); ++i) hm.set(i, i + 1, 0.5);
    return hm;
  };
  m.reference = "best";

  m.optimistic = true;
  auto records = run_matrix(m);
  REQUIRE(records.size() == 6);
  for (const auto& r : records) {
    CHECK(r.error.empty());
    CHECK(r.cost.has_value());
    CHECK(r.gap.has_value());
    CHECK(*r.gap >= 0);
    CHECK(r.inference_seconds == 0);
  }
  auto again = run_matrix(m);
  CHECK(summary_csv(again) == summary_csv(records));
  for (std::size_t k = 0; k < records.size(); ++k) {
    CHECK(again[k].cost == records[k].cost);
    CHECK(again[k].iterations == records[k].iterations);
    CHECK(again[k].time_to_best == records[k].time_to_best);
  }

  m.optimistic = false;
  m.heatmap_provider = [](const Instance& inst) {
    auto t0 = std::chrono::steady_clock::now();
    while (std::chrono::steady_clock::now() - t0 < std::chrono::milliseconds(2)) {
    }
    return Heatmap(inst.customer_count());
  };
  for (const auto& r : run_matrix(m)) {
    if (r.variant == "n-n")
      CHECK(r.inference_seconds > 0);
    else
      CHECK(r.inference_seconds == 0);
  }
}

TEST_CASE("run_matrix records per-cell failures") {
  ExperimentMatrix m;
  m.instances = {"gen:n=10,demand=small,r=5@1"};
  m.variants = {parse_variant("d-o"), parse_variant("d-n")};
  m.budget.seconds = 0.02;
  m.heatmap_provider = [](const Instance&) -> Heatmap { throw std::runtime_error("no heatmap today"); };
  auto records = run_matrix(m);
  REQUIRE(records.size() == 2);
  CHECK(records[0].error.empty());
  CHECK(records[1].error.find("no heatmap today") != std::string::npos);
}

TEST_CASE("run_matrix with directory heatmaps and several workers") {
  auto dir = scratch_dir("heatmaps");
  Instance inst = generate_instance(parse_generator_spec("n=15,demand=small,r=5"), 4);
  Heatmap hm(15);
  hm.set(1, 2, 0.9);
  save_heatmap(hm, (dir / (inst.name() + ".heatmap")).string());
  ExperimentMatrix m;
  m.instances = {"gen:n=15,demand=small,r=5@4"};
  m.variants = {parse_variant("n-d")};
  m.seeds = {1, 2, 3, 4};
  m.budget.seconds = 0.02;
  m.heatmap.kind = HeatmapSource::Kind::Directory;
  m.heatmap.path = dir.string();
  m.workers = 3;
  auto records = run_matrix(m);
  REQUIRE(records.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(records[k].error.empty());
    CHECK(records[k].seed == k + 1);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("reports") {
  std::vector<RunRecord> records{record("a", "d-o", 1, 100, 100), record("b", "d-o", 1, 200, 200),
                                 record("a", "d-d", 1, 100, 100), record("b", "d-d", 1, 200, 200)};
  SUBCASE("all hits give #Opt = runs and zero gap") {
    std::string s = summary_csv(records);
    CHECK(s.find("d-o,2,2,2,0,4,0\n") != std::string::npos);
  }
  SUBCASE("identical variants give identical rows") {
    std::istringstream in(summary_csv(records));
    std::string header, row1, row2;
    std::getline(in, header);
    std::getline(in, row1);
    std::getline(in, row2);
    CHECK(row1.substr(row1.find(',')) == row2.substr(row2.find(',')));
  }
  SUBCASE("convergence has 200 buckets per variant") {
    std::string c = convergence_csv(records);
    CHECK(count_lines(c) == 1 + 2 * 200);
    CHECK(c.rfind("variant,bucket,fraction,mean_gap,runs\n", 0) == 0);
  }
  SUBCASE("emit_reports writes every file") {
    auto dir = scratch_dir("reports");
    emit_reports(records, (dir / "out").string());
    for (auto name : {"records.csv", "summary.csv", "convergence.csv", "grouped_gaps.csv", "comparisons.csv"})
      CHECK(std::filesystem::exists(dir / "out" / name));
    std::filesystem::remove_all(dir);
  }
  SUBCASE("unwritable directory") {
    auto dir = scratch_dir("blocked");
    std::ofstream(dir / "file") << "x";
    CHECK_THROWS_AS(emit_reports(records, (dir / "file" / "sub").string()), IoError);
    std::filesystem::remove_all(dir);
  }
}

TEST_CASE("records without a reference are excluded from #Opt denominators") {
  auto r = record("a", "d-o", 1, 100, 100);
  RunRecord free = r;
  free.reference.reset();
  free.gap.reset();
  free.hit = false;
  std::string s = summary_csv({r, free});
  CHECK(s.find("d-o,2,1,1,0,") != std::string::npos);
}

TEST_CASE("assign_references against the best run") {
  std::vector<RunRecord> rs{record("a", "d-o", 1, 110, 1), record("a", "d-d", 1, 100, 1)};
  assign_references(rs, "best");
  CHECK(*rs[0].reference == 100);
  CHECK(*rs[0].gap == doctest::Approx(10));
  CHECK(rs[1].hit);
}

TEST_CASE("calibration protocol") {
  std::vector<Instance> insts{generate_instance(parse_generator_spec("n=50,demand=small,r=6"), 1),
                              generate_instance(parse_generator_spec("n=50,customers=clustered,demand=large,r=4"), 2)};
  auto table = calibration_protocol(insts, {5, 49}, 3);
  REQUIRE(table.rows.size() == 4);
  CHECK(table.mean_seconds[1] > table.mean_seconds[0]);
  for (const auto& row : table.rows) {
    CHECK(row.best_cost.has_value());
    CHECK(*row.gap >= 0);
  }
  auto twice = calibration_protocol({insts[0]}, {49, 49}, 3);
  CHECK(twice.rows[0].best_cost == twice.rows[1].best_cost);
  CHECK(twice.rows[0].ls_seconds == twice.rows[1].ls_seconds);
  CHECK(calibration_csv(table).rfind("instance,gamma,", 0) == 0);
  CHECK(count_lines(calibration_summary_csv(table)) == 3);
}
