#include <cmath>
#include <sstream>
#include <string>

#include "rhgs/errors.hpp"
#include "rhgs/instance.hpp"
#include "rhgs/rng.hpp"

namespace rhgs {

std::string_view to_string(DepotMode mode) {
  switch (mode) {
    case DepotMode::Central: return "central";
    case DepotMode::Eccentric: return "eccentric";
    case DepotMode::Random: return "random";
  }
  return "?";
}

std::string_view to_string(CustomerMode mode) {
  switch (mode) {
    case CustomerMode::Random: return "random";
    case CustomerMode::Clustered: return "clustered";
    case CustomerMode::Mixed: return "mixed";
  }
  return "?";
}

std::string_view to_string(DemandMode mode) {
  switch (mode) {
    case DemandMode::Unitary: return "unitary";
    case DemandMode::SmallRange: return "small";
    case DemandMode::LargeRange: return "large";
  }
  return "?";
}

GeneratorSpec parse_generator_spec(std::string_view text) {
  GeneratorSpec spec;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("generator spec item '" + item + "' lacks '='");
    std::string key = item.substr(0, eq);
    std::string value = item.substr(eq + 1);
    try {
      if (key == "n") {
        spec.n = std::stoi(value);
      } else if (key == "r") {
        spec.route_size = std::stod(value);
      } else if (key == "depot") {
        if (value == "central") spec.depot = DepotMode::Central;
        else if (value == "eccentric") spec.depot = DepotMode::Eccentric;
        else if (value == "random") spec.depot = DepotMode::Random;
        else throw ParseError("unknown depot mode '" + value + "'");
      } else if (key == "customers") {
        if (value == "random") spec.customers = CustomerMode::Random;
        else if (value == "clustered") spec.customers = CustomerMode::Clustered;
        else if (value == "mixed") spec.customers = CustomerMode::Mixed;
        else throw ParseError("unknown customer mode '" + value + "'");
      } else if (key == "demand") {
        if (value == "unitary") spec.demand = DemandMode::Unitary;
        else if (value == "small") spec.demand = DemandMode::SmallRange;
        else if (value == "large") spec.demand = DemandMode::LargeRange;
        else throw ParseError("unknown demand mode '" + value + "'");
      } else {
        throw ParseError("unknown generator key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw ParseError("bad numeric value in generator spec item '" + item + "'");
    } catch (const std::out_of_range&) {
      throw ParseError("numeric value out of range in generator spec item '" + item + "'");
    }
  }
  return spec;
}

std::string format_generator_spec(const GeneratorSpec& spec) {
  std::ostringstream out;
  out << "n=" << spec.n << ",depot=" << to_string(spec.depot)
      << ",customers=" << to_string(spec.customers) << ",demand=" << to_string(spec.demand)
      << ",r=" << spec.route_size;
  return out.str();
}

namespace {

constexpr int kGrid = 1000;
constexpr double kClusterDecay = 40.0;

Point random_grid_point(Rng& rng) {
  return {static_cast<double>(uniform_int(rng, 0, kGrid)),
          static_cast<double>(uniform_int(rng, 0, kGrid))};
}

// Customers attracted to seed points with exponential decay, accepted by
// rejection against the summed attraction.
Point clustered_point(const std::vector<Point>& seeds, Rng& rng) {
  const double max_weight = static_cast<double>(seeds.size());
  for (;;) {
    Point p = random_grid_point(rng);
    double weight = 0;
    for (const auto& s : seeds) weight += std::exp(-std::hypot(p.x - s.x, p.y - s.y) / kClusterDecay);
    if (uniform01(rng) * max_weight < weight) return p;
  }
}

long long ceil_route_capacity(double route_size, long long demand_sum, int n) {
  return static_cast<long long>(std::ceil(route_size * static_cast<double>(demand_sum) / n - 1e-9));
}

}  // namespace

Instance generate_instance(const GeneratorSpec& spec, std::uint64_t seed) {
  if (spec.n < 1) throw DomainError("generator needs n >= 1");
  if (!(spec.route_size >= 1)) throw DomainError("generator needs route size r >= 1");
  Rng rng(seed);

  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(spec.n) + 1);
  switch (spec.depot) {
    case DepotMode::Central: pts.push_back({kGrid / 2.0, kGrid / 2.0}); break;
    case DepotMode::Eccentric: pts.push_back({0, 0}); break;
    case DepotMode::Random: pts.push_back(random_grid_point(rng)); break;
  }

  int clustered = 0;
  if (spec.customers == CustomerMode::Clustered) clustered = spec.n;
  if (spec.customers == CustomerMode::Mixed) clustered = spec.n / 2;
  std::vector<Point> seeds;
  if (clustered > 0) {
    auto count = static_cast<int>(uniform_int(rng, 3, 8));
    count = std::min(count, clustered);
    for (int s = 0; s < count; ++s) {
      seeds.push_back(random_grid_point(rng));
      pts.push_back(seeds.back());
    }
    for (int c = count; c < clustered; ++c) pts.push_back(clustered_point(seeds, rng));
  }
  while (static_cast<int>(pts.size()) <= spec.n) pts.push_back(random_grid_point(rng));

  std::vector<int> demands(static_cast<std::size_t>(spec.n) + 1, 0);
  for (int i = 1; i <= spec.n; ++i) {
    switch (spec.demand) {
      case DemandMode::Unitary: demands[static_cast<std::size_t>(i)] = 1; break;
      case DemandMode::SmallRange: demands[static_cast<std::size_t>(i)] = static_cast<int>(uniform_int(rng, 1, 10)); break;
      case DemandMode::LargeRange: demands[static_cast<std::size_t>(i)] = static_cast<int>(uniform_int(rng, 1, 100)); break;
    }
  }

  // Q = ceil(r * mean demand), with demands clamped to [1, Q]. Clamping can
  // lower the mean, so iterate to the fixed point (Q is nonincreasing).
  long long sum = 0;
  for (int d : demands) sum += d;
  long long q = ceil_route_capacity(spec.route_size, sum, spec.n);
  for (;;) {
    sum = 0;
    for (std::size_t i = 1; i < demands.size(); ++i) {
      demands[i] = static_cast<int>(std::clamp<long long>(demands[i], 1, q));
      sum += demands[i];
    }
    long long next = ceil_route_capacity(spec.route_size, sum, spec.n);
    if (next == q) break;
    q = next;
  }

  std::ostringstream name;
  name << "XML-style-n" << spec.n << '-' << to_string(spec.depot) << '-'
       << to_string(spec.customers) << '-' << to_string(spec.demand) << "-r" << spec.route_size
       << "-s" << seed;
  Instance inst(name.str(), std::move(pts), std::move(demands), static_cast<int>(q));
  return inst.with_generator(spec);
}

}  // namespace rhgs
