#include "rhgs/splittour.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "rhgs/errors.hpp"

namespace rhgs {

bool is_valid_tour(const GiantTour& tour, int n) {
  if (static_cast<int>(tour.order.size()) != n) return false;
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  for (int c : tour.order) {
    if (c < 1 || c > n || seen[static_cast<std::size_t>(c)]) return false;
    seen[static_cast<std::size_t>(c)] = 1;
  }
  return true;
}

std::size_t Solution::customer_count() const {
  std::size_t total = 0;
  for (const auto& r : routes) total += r.size();
  return total;
}

double route_distance(const Instance& inst, const std::vector<int>& route) {
  if (route.empty()) return 0;
  double d = inst.distance(0, route.front());
  for (std::size_t k = 1; k < route.size(); ++k) d += inst.distance(route[k - 1], route[k]);
  return d + inst.distance(route.back(), 0);
}

long long route_load(const Instance& inst, const std::vector<int>& route) {
  long long load = 0;
  for (int c : route) load += inst.demand(c);
  return load;
}

namespace {

void check_customers(const Instance& inst, const std::vector<std::vector<int>>& routes) {
  for (const auto& r : routes) {
    if (r.empty()) throw StructuralError("solution contains an empty route");
    for (int c : r)
      if (c < 1 || c > inst.customer_count())
        throw StructuralError("route references unknown customer " + std::to_string(c));
  }
}

}  // namespace

Solution make_solution(const Instance& inst, std::vector<std::vector<int>> routes) {
  check_customers(inst, routes);
  std::vector<char> seen(static_cast<std::size_t>(inst.customer_count()) + 1, 0);
  std::size_t count = 0;
  Solution sol;
  for (const auto& r : routes) {
    for (int c : r) {
      if (seen[static_cast<std::size_t>(c)]) throw StructuralError("customer " + std::to_string(c) + " visited twice");
      seen[static_cast<std::size_t>(c)] = 1;
      ++count;
    }
    sol.distance += route_distance(inst, r);
    sol.excess += std::max(0LL, route_load(inst, r) - inst.capacity());
  }
  if (count != static_cast<std::size_t>(inst.customer_count()))
    throw StructuralError("solution does not visit every customer");
  sol.routes = std::move(routes);
  return sol;
}

double evaluate(const Instance& inst, const Solution& sol, double w) {
  check_customers(inst, sol.routes);
  double distance = 0;
  long long excess = 0;
  for (const auto& r : sol.routes) {
    distance += route_distance(inst, r);
    excess += std::max(0LL, route_load(inst, r) - inst.capacity());
  }
  return distance + w * static_cast<double>(excess);
}

Solution split(const Instance& inst, const GiantTour& tour, double w, const SplitConfig& config,
               SplitWork* work) {
  const int n = inst.customer_count();
  if (!is_valid_tour(tour, n)) throw StructuralError("split needs a permutation of all customers");
  if (w < 0) throw DomainError("penalty weight must be nonnegative");
  const auto& t = tour.order;
  const double max_load = config.overload_factor * inst.capacity();
  const double inf = std::numeric_limits<double>::infinity();

  // cum[k] = distance travelled from t[0] to t[k] along the tour.
  std::vector<double> cum(static_cast<std::size_t>(n), 0.0);
  for (int k = 1; k < n; ++k)
    cum[static_cast<std::size_t>(k)] = cum[static_cast<std::size_t>(k - 1)] + inst.distance(t[static_cast<std::size_t>(k - 1)], t[static_cast<std::size_t>(k)]);

  // Suffix shortest path: best[a] serves t[a..n-1]; next[a] is the first cut.
  std::vector<double> best(static_cast<std::size_t>(n) + 1, inf);
  std::vector<int> routes(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> next(static_cast<std::size_t>(n) + 1, -1);
  best[static_cast<std::size_t>(n)] = 0;
  std::uint64_t arcs = 0;
  for (int a = n - 1; a >= 0; --a) {
    const auto ua = static_cast<std::size_t>(a);
    long long load = 0;
    const double from_depot = inst.distance(0, t[ua]);
    for (int b = a + 1; b <= n; ++b) {
      const auto last = static_cast<std::size_t>(b - 1);
      load += inst.demand(t[last]);
      if (static_cast<double>(load) > max_load) break;
      ++arcs;
      const auto ub = static_cast<std::size_t>(b);
      if (best[ub] == inf) continue;
      double cost = from_depot + (cum[last] - cum[ua]) + inst.distance(t[last], 0) +
                    w * static_cast<double>(std::max(0LL, load - inst.capacity()));
      double total = cost + best[ub];
      int count = routes[ub] + 1;
      if (total < best[ua] || (total == best[ua] && count < routes[ua])) {
        best[ua] = total;
        routes[ua] = count;
        next[ua] = b;
      }
    }
  }
  if (work) work->arcs += arcs;
  if (best[0] == inf) throw StructuralError("no segmentation within the overload bound");

  std::vector<std::vector<int>> out;
  for (int a = 0; a < n; a = next[static_cast<std::size_t>(a)])
    out.emplace_back(t.begin() + a, t.begin() + next[static_cast<std::size_t>(a)]);
  Solution sol;
  for (const auto& r : out) {
    sol.distance += route_distance(inst, r);
    sol.excess += std::max(0LL, route_load(inst, r) - inst.capacity());
  }
  sol.routes = std::move(out);
  return sol;
}

GiantTour to_giant_tour(const Solution& sol, Rng& rng) {
  std::vector<std::size_t> order(sol.routes.size());
  for (std::size_t r = 0; r < order.size(); ++r) order[r] = r;
  shuffle(std::span<std::size_t>(order), rng);
  GiantTour tour;
  tour.order.reserve(sol.customer_count());
  for (auto r : order) tour.order.insert(tour.order.end(), sol.routes[r].begin(), sol.routes[r].end());
  return tour;
}

std::string format_cost(double cost) {
  if (std::nearbyint(cost) == cost && std::fabs(cost) < 1e15) {
    std::ostringstream out;
    out << static_cast<long long>(cost);
    return out.str();
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, cost);
  return std::string(buf, res.ptr);
}

std::string emit_solution(const Solution& sol) {
  std::ostringstream out;
  for (std::size_t r = 0; r < sol.routes.size(); ++r) {
    out << "Route #" << r + 1 << ':';
    for (int c : sol.routes[r]) out << ' ' << c;
    out << '\n';
  }
  out << "Cost " << format_cost(sol.distance) << '\n';
  return out.str();
}

ParsedSolution parse_solution(std::string_view text) {
  ParsedSolution parsed;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("Route", 0) == 0) {
      auto colon = line.find(':');
      if (colon == std::string::npos) throw ParseError("route line lacks ':'");
      std::istringstream ls(line.substr(colon + 1));
      std::vector<int> route;
      int c;
      while (ls >> c) route.push_back(c);
      if (!ls.eof()) throw ParseError("malformed route line: " + line);
      if (!route.empty()) parsed.routes.push_back(std::move(route));
    } else if (line.rfind("Cost", 0) == 0) {
      std::istringstream ls(line.substr(4));
      double z;
      if (!(ls >> z)) throw ParseError("malformed cost line: " + line);
      parsed.cost = z;
    }
  }
  if (parsed.routes.empty()) throw ParseError("solution text contains no routes");
  return parsed;
}

ParsedSolution load_solution(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_solution(ss.str());
}

}  // namespace rhgs
