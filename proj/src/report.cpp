#include "rhgs/errors.hpp"
#include "rhgs/genetic.hpp"

#include <json.hpp>

namespace rhgs {

using ordered_json = nlohmann::ordered_json;

std::string report_to_json(const BestSolutionReport& r) {
  ordered_json j;
  j["instance"] = r.instance;
  j["variant"] = r.variant;
  j["seed"] = r.seed;
  j["gamma"] = r.gamma;
  j["time_limit"] = r.time_limit;
  j["clock"] = r.clock;
  j["feasible"] = r.feasible;
  if (r.feasible) {
    j["cost"] = r.best.distance;
    j["routes"] = r.best.routes;
  } else {
    j["cost"] = nullptr;
    j["routes"] = ordered_json::array();
  }
  j["best_found_seconds"] = r.best_found_seconds;
  j["elapsed_seconds"] = r.elapsed_seconds;
  j["inference_seconds"] = r.inference_seconds;
  j["iterations"] = r.iterations;
  j["restarts"] = r.restarts;
  j["final_penalty"] = r.final_penalty;
  ordered_json trace = ordered_json::array();
  for (const auto& t : r.trace) trace.push_back({t.seconds, t.cost});
  j["trace"] = trace;
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j.dump(2) + "\n";
}

BestSolutionReport report_from_json(const std::string& text) {
  BestSolutionReport r;
  try {
    auto j = ordered_json::parse(text);
    r.instance = j.at("instance").get<std::string>();
    r.variant = j.at("variant").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.gamma = j.at("gamma").get<int>();
    r.time_limit = j.at("time_limit").get<double>();
    r.clock = j.at("clock").get<std::string>();
    r.feasible = j.at("feasible").get<bool>();
    if (r.feasible) {
      r.best.routes = j.at("routes").get<std::vector<std::vector<int>>>();
      r.best.distance = j.at("cost").get<double>();
    }
    r.best_found_seconds = j.at("best_found_seconds").get<double>();
    r.elapsed_seconds = j.at("elapsed_seconds").get<double>();
    r.inference_seconds = j.at("inference_seconds").get<double>();
    r.iterations = j.at("iterations").get<long long>();
    r.restarts = j.at("restarts").get<int>();
    r.final_penalty = j.at("final_penalty").get<double>();
    for (const auto& t : j.at("trace")) r.trace.push_back(TracePoint{t.at(0).get<double>(), t.at(1).get<double>()});
    if (j.contains("diagnostic")) r.diagnostic = j["diagnostic"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
  return r;
}

}  // namespace rhgs
