#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <thread>

#include "rhgs/errors.hpp"
#include "rhgs/harness.hpp"

namespace rhgs {

namespace fs = std::filesystem;

double Budget::seconds_for(int n) const {
  return rule == Rule::Fixed ? seconds : seconds * static_cast<double>(n) / 100.0;
}

void ExperimentMatrix::validate() const {
  if (instances.empty()) throw DomainError("experiment has no instances");
  if (variants.empty()) throw DomainError("experiment has no variants");
  if (seeds.empty()) throw DomainError("experiment has no seeds");
  if (gammas.empty()) throw DomainError("experiment has no gamma values");
  if (!(budget.seconds > 0)) throw DomainError("time budget must be positive");
  if (workers < 1) throw DomainError("worker count must be positive");
  if (reference != "bks" && reference != "best") throw DomainError("reference must be bks or best");
  const bool any_heatmap = std::any_of(variants.begin(), variants.end(), [](const Variant& v) { return v.needs_heatmap(); });
  if (any_heatmap && !heatmap_provider && heatmap.kind == HeatmapSource::Kind::None)
    throw DomainError("heatmap variants require a heatmap source");
}

std::vector<Instance> resolve_instances(const std::vector<std::string>& entries) {
  std::vector<Instance> out;
  for (const auto& entry : entries) {
    if (entry.rfind("gen:", 0) == 0) {
      const std::string body = entry.substr(4);
      const auto at = body.rfind('@');
      std::uint64_t seed = 1;
      std::string spec = body;
      if (at != std::string::npos) {
        spec = body.substr(0, at);
        try {
          seed = std::stoull(body.substr(at + 1));
        } catch (const std::exception&) {
          throw ParseError("bad generator seed in '" + entry + "'");
        }
      }
      out.push_back(generate_instance(parse_generator_spec(spec), seed));
    } else if (fs::is_directory(entry)) {
      std::vector<std::string> files;
      for (const auto& e : fs::directory_iterator(entry))
        if (e.is_regular_file() && e.path().extension() == ".vrp") files.push_back(e.path().string());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) out.push_back(load_cvrplib(f));
    } else {
      out.push_back(load_cvrplib(entry));
    }
  }
  return out;
}

namespace {

Heatmap prepare_heatmap(const ExperimentMatrix& m, const Instance& inst, std::uint64_t seed) {
  if (m.heatmap_provider) return m.heatmap_provider(inst);
  if (m.heatmap.kind == HeatmapSource::Kind::Directory)
    return load_heatmap((fs::path(m.heatmap.path) / (inst.name() + ".heatmap")).string());
  if (m.heatmap.kind == HeatmapSource::Kind::Oracle) {
    std::vector<std::string> files;
    if (fs::is_directory(m.heatmap.path))
      for (const auto& e : fs::directory_iterator(m.heatmap.path)) {
        const auto file = e.path().filename().string();
        if (e.path().extension() == ".sol" && file.rfind(inst.name(), 0) == 0) files.push_back(e.path().string());
      }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("no solutions for instance " + inst.name() + " in " + m.heatmap.path);
    std::vector<Solution> sols;
    for (const auto& f : files) sols.push_back(make_solution(inst, load_solution(f).routes));
    return synthesize_oracle_heatmap(inst, sols, m.heatmap.noise, seed);
  }
  throw DomainError("no heatmap source configured");
}

RunRecord run_cell(const ExperimentMatrix& m, const Instance& inst, const Variant& variant, std::uint64_t seed,
                   int gamma) {
  RunRecord rec;
  rec.instance = inst.name();
  rec.n = inst.customer_count();
  rec.attributes = inst.generator();
  rec.variant = variant.code();
  rec.seed = seed;
  rec.gamma = gamma;
  rec.budget = m.budget.seconds_for(inst.customer_count());
  try {
    std::optional<Heatmap> hm;
    double inference = 0;
    if (variant.needs_heatmap()) {
      const auto t0 = std::chrono::steady_clock::now();
      hm = prepare_heatmap(m, inst, seed);
      inference = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (m.optimistic) inference = 0;
    }
    SearchParams params;
    params.gamma = gamma;
    params.seed = seed;
    params.time_limit = rec.budget;
    params.n_it = m.n_it;
    params.clock = m.clock;
    params.work_units_per_second = m.work_units_per_second;
    params.inference_seconds = inference;
    const auto t0 = std::chrono::steady_clock::now();
    BestSolutionReport report = run_hgs(inst, params, variant, hm ? &*hm : nullptr);
    rec.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() + inference;
    rec.inference_seconds = inference;
    rec.iterations = report.iterations;
    rec.time_to_best = report.best_found_seconds;
    rec.trace = report.trace;
    if (report.feasible) {
      rec.cost = report.best.distance;
      rec.routes = report.best.routes;
    } else {
      rec.error = report.diagnostic;
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

}  // namespace

std::vector<RunRecord> run_matrix(const ExperimentMatrix& m) {
  m.validate();
  return run_matrix(m, resolve_instances(m.instances));
}

std::vector<RunRecord> run_matrix(const ExperimentMatrix& m, const std::vector<Instance>& instances) {
  struct Cell {
    std::size_t instance;
    int gamma;
    Variant variant;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < instances.size(); ++i)
    for (int gamma : m.gammas)
      for (const auto& v : m.variants)
        for (auto seed : m.seeds) cells.push_back(Cell{i, gamma, v, seed});

  std::vector<RunRecord> records(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      const auto& c = cells[k];
      records[k] = run_cell(m, instances[c.instance], c.variant, c.seed, c.gamma);
    }
  };
  const auto workers = static_cast<std::size_t>(std::max(1, std::min<int>(m.workers, static_cast<int>(cells.size()))));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  assign_references(records, m.reference, instances);
  return records;
}

void assign_references(std::vector<RunRecord>& records, std::string_view mode, const std::vector<Instance>& instances) {
  std::map<std::string, double> reference;
  if (mode == "best") {
    for (const auto& r : records) {
      if (!r.cost) continue;
      auto it = reference.find(r.instance);
      if (it == reference.end() || *r.cost < it->second) reference[r.instance] = *r.cost;
    }
  } else if (mode == "bks") {
    for (const auto& inst : instances)
      if (inst.bks()) reference[inst.name()] = *inst.bks();
    for (const auto& r : records)
      if (r.reference && !reference.count(r.instance)) reference[r.instance] = *r.reference;
  } else {
    throw DomainError("reference must be bks or best");
  }
  for (auto& r : records) {
    auto it = reference.find(r.instance);
    r.reference.reset();
    r.gap.reset();
    r.hit = false;
    if (it == reference.end() || !(it->second > 0)) continue;
    r.reference = it->second;
    if (!r.cost) continue;
    r.gap = gap_percent(*r.cost, it->second);
    r.hit = *r.gap <= 1e-9;
  }
}

}  // namespace rhgs
