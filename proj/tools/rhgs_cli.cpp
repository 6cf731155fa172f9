// rhgs: command-line front end for the solver and the benchmark harness.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rhgs/errors.hpp"
#include "rhgs/genetic.hpp"
#include "rhgs/harness.hpp"
#include "rhgs/instance.hpp"
#include "rhgs/relatedness.hpp"
#include "rhgs/splittour.hpp"

namespace fs = std::filesystem;
using namespace rhgs;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << body)) throw IoError("cannot write " + path);
}

void write_or_print(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-")
    std::cout << body;
  else
    write_file(path, body);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw ParseError("bad integer '" + item + "' in list '" + text + "'");
    }
  }
  return out;
}

struct SolveOptions {
  std::string instance;
  std::string mode = "d-o";
  int gamma = 15;
  double time_limit = 10;
  std::uint64_t seed = 1;
  std::string heatmap;
  std::string bks;
  bool no_round = false;
  std::string convergence_out;
  std::string clock = "work";
  double work_rate = kDefaultWorkUnitsPerSecond;
  int n_it = 20000;
  long long max_iterations = 0;
  bool extended_moves = false;
  std::string output;
  std::string solution_out;
};

int run_solve(const SolveOptions& o) {
  Instance inst = load_cvrplib(o.instance);
  if (o.no_round) inst = inst.with_rounding(Rounding::Exact);
  if (!o.bks.empty()) inst = inst.with_bks(parse_bks(read_file(o.bks)));
  const Variant variant = parse_variant(o.mode);
  std::optional<Heatmap> hm;
  if (!o.heatmap.empty()) hm = load_heatmap(o.heatmap);

  SearchParams params;
  params.gamma = o.gamma;
  params.time_limit = o.time_limit;
  params.seed = o.seed;
  params.clock = parse_clock_kind(o.clock);
  params.work_units_per_second = o.work_rate;
  params.n_it = o.n_it;
  params.max_iterations = o.max_iterations;
  params.extended_moves = o.extended_moves;
  BestSolutionReport report = run_hgs(inst, params, variant, hm ? &*hm : nullptr);

  write_or_print(o.output, report_to_json(report));
  if (!o.solution_out.empty() && report.feasible) write_file(o.solution_out, emit_solution(report.best));
  if (!o.convergence_out.empty()) {
    std::ostringstream csv;
    csv.precision(10);
    csv << "seconds,cost,gap\n";
    for (const auto& t : report.trace) {
      csv << t.seconds << ',' << t.cost << ',';
      if (inst.bks()) csv << gap_percent(t.cost, *inst.bks());
      csv << '\n';
    }
    write_file(o.convergence_out, csv.str());
  }
  if (report.feasible && inst.bks())
    std::cerr << "cost " << format_cost(report.best.distance) << " gap "
              << gap_percent(report.best.distance, *inst.bks()) << "%\n";
  return report.feasible ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid genetic search for the CVRP with pluggable relatedness"};
  app.require_subcommand(1);

  SolveOptions so;
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  solve->add_option("--instance", so.instance, "CVRPLIB instance file")->required();
  solve->add_option("--mode", so.mode, "Variant: d-o, d-d, d-n, n-o, n-d or n-n");
  solve->add_option("--gamma", so.gamma, "Neighbor list size");
  solve->add_option("--time-limit", so.time_limit, "Search budget in seconds");
  solve->add_option("--seed", so.seed, "Random seed");
  solve->add_option("--heatmap", so.heatmap, "Heatmap file (required by n-* and *-n modes)");
  solve->add_option("--bks", so.bks, "File holding the reference cost");
  solve->add_flag("--no-round", so.no_round, "Use unrounded Euclidean distances");
  solve->add_option("--convergence-out", so.convergence_out, "CSV of (seconds, cost, gap) at every improvement");
  solve->add_option("--clock", so.clock, "work (reproducible, default) or wall");
  solve->add_option("--work-rate", so.work_rate, "Work units per second for the work clock");
  solve->add_option("--n-it", so.n_it, "Offspring without improvement before a restart");
  solve->add_option("--max-iterations", so.max_iterations, "Offspring limit (0 = none)");
  solve->add_flag("--extended-moves", so.extended_moves, "Enable pair relocate/swap moves");
  solve->add_option("--output", so.output, "Report JSON path (default stdout)");
  solve->add_option("--solution-out", so.solution_out, "CVRPLIB solution file for the best solution");

  std::string config, bench_output;
  int bench_workers = 0;
  auto* bench = app.add_subcommand("bench", "Run an experiment matrix");
  bench->add_option("--config", config, "Matrix config file")->required();
  bench->add_option("--output", bench_output, "Report directory (overrides the config)");
  bench->add_option("--workers", bench_workers, "Worker threads (overrides the config)");

  std::vector<std::string> cal_instances;
  std::string cal_gammas = "5,10,15,20,30,50,100", cal_output, cal_clock = "work";
  std::uint64_t cal_seed = 1;
  auto* calibrate = app.add_subcommand("calibrate", "Gamma calibration with single local searches");
  calibrate->add_option("--instances", cal_instances, "Instance files, directories or gen: specs")->required();
  calibrate->add_option("--gammas", cal_gammas, "Comma-separated gamma values");
  calibrate->add_option("--seed", cal_seed, "Random seed");
  calibrate->add_option("--clock", cal_clock, "work or wall");
  calibrate->add_option("--output", cal_output, "Directory for calibration.csv and calibration_summary.csv");

  std::string gen_spec, gen_output;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen", "Generate an XML-style instance");
  gen->add_option("--spec", gen_spec, "e.g. n=100,depot=central,customers=clustered,demand=small,r=5")->required();
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--output", gen_output, "Output file (default stdout)");

  std::string or_instance, or_solutions, or_output;
  double or_noise = 0.05;
  std::uint64_t or_seed = 1;
  auto* oracle = app.add_subcommand("heatmap-oracle", "Synthesize a heatmap from known solutions");
  oracle->add_option("--instance", or_instance, "CVRPLIB instance file")->required();
  oracle->add_option("--solutions", or_solutions, "Directory of CVRPLIB .sol files or a single file")->required();
  oracle->add_option("--noise", or_noise, "Uniform noise half-width");
  oracle->add_option("--seed", or_seed, "Noise seed");
  oracle->add_option("--output", or_output, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(so);

    if (bench->parsed()) {
      ExperimentMatrix m = load_matrix_config(config);
      if (!bench_output.empty()) m.output = bench_output;
      if (bench_workers > 0) m.workers = bench_workers;
      auto records = run_matrix(m);
      emit_reports(records, m.output);
      std::cout << summary_csv(records);
      return 0;
    }

    if (calibrate->parsed()) {
      auto instances = resolve_instances(cal_instances);
      auto table = calibration_protocol(instances, parse_int_list(cal_gammas), cal_seed, parse_clock_kind(cal_clock));
      if (!cal_output.empty()) {
        fs::create_directories(cal_output);
        write_file((fs::path(cal_output) / "calibration.csv").string(), calibration_csv(table));
        write_file((fs::path(cal_output) / "calibration_summary.csv").string(), calibration_summary_csv(table));
      }
      std::cout << calibration_summary_csv(table);
      return 0;
    }

    if (gen->parsed()) {
      write_or_print(gen_output, emit_cvrplib(generate_instance(parse_generator_spec(gen_spec), gen_seed)));
      return 0;
    }

    if (oracle->parsed()) {
      Instance inst = load_cvrplib(or_instance);
      std::vector<std::string> files;
      if (fs::is_directory(or_solutions)) {
        for (const auto& e : fs::directory_iterator(or_solutions))
          if (e.path().extension() == ".sol") files.push_back(e.path().string());
        std::sort(files.begin(), files.end());
      } else {
        files.push_back(or_solutions);
      }
      if (files.empty()) throw IoError("no .sol files in " + or_solutions);
      std::vector<Solution> sols;
      for (const auto& f : files) sols.push_back(make_solution(inst, load_solution(f).routes));
      write_or_print(or_output, emit_heatmap(synthesize_oracle_heatmap(inst, sols, or_noise, or_seed)));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
