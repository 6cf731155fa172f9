#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rhgs {

struct Point {
  double x = 0;
  double y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

enum class Rounding { Nearest, Exact };

enum class DepotMode { Central, Eccentric, Random };
enum class CustomerMode { Random, Clustered, Mixed };
enum class DemandMode { Unitary, SmallRange, LargeRange };

// Axes of the XML-style generator. Outputs are "XML-style" only: the layout
// and demand rules mimic the published axes, not the exact distribution.
struct GeneratorSpec {
  int n = 100;
  DepotMode depot = DepotMode::Random;
  CustomerMode customers = CustomerMode::Random;
  DemandMode demand = DemandMode::Unitary;
  double route_size = 10;  // target average customers per route

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

std::string_view to_string(DepotMode mode);
std::string_view to_string(CustomerMode mode);
std::string_view to_string(DemandMode mode);

// Parses "n=100,depot=central,customers=clustered,demand=small,r=5".
// Omitted keys keep their defaults.
GeneratorSpec parse_generator_spec(std::string_view text);
std::string format_generator_spec(const GeneratorSpec& spec);

// A symmetric CVRP instance. Vertex 0 is the depot, vertices 1..n are
// customers. Immutable after construction; the full distance matrix is
// computed up front.
class Instance {
 public:
  Instance(std::string name, std::vector<Point> coords, std::vector<int> demands, int capacity,
           Rounding rounding = Rounding::Nearest, std::optional<double> bks = std::nullopt,
           std::string comment = {});

  const std::string& name() const { return name_; }
  const std::string& comment() const { return comment_; }
  int customer_count() const { return n_; }
  int vertex_count() const { return n_ + 1; }
  int capacity() const { return capacity_; }
  Rounding rounding() const { return rounding_; }
  const std::optional<double>& bks() const { return bks_; }
  const std::vector<Point>& coords() const { return coords_; }
  const std::vector<int>& demands() const { return demands_; }
  int demand(int v) const { return demands_[static_cast<std::size_t>(v)]; }
  long long total_demand() const { return total_demand_; }

  double distance(int i, int j) const {
    return dist_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_ + 1) +
                 static_cast<std::size_t>(j)];
  }

  // Mean distance over all unordered vertex pairs.
  double mean_edge_cost() const { return mean_edge_; }

  const std::optional<GeneratorSpec>& generator() const { return generator_; }

  Instance with_bks(std::optional<double> bks) const;
  Instance with_rounding(Rounding rounding) const;
  Instance with_generator(GeneratorSpec spec) const;

  friend bool operator==(const Instance& a, const Instance& b);

 private:
  void compute_distances();

  std::string name_;
  std::string comment_;
  int n_ = 0;
  std::vector<Point> coords_;
  std::vector<int> demands_;
  int capacity_ = 0;
  Rounding rounding_ = Rounding::Nearest;
  std::optional<double> bks_;
  std::optional<GeneratorSpec> generator_;
  long long total_demand_ = 0;
  double mean_edge_ = 0;
  std::vector<double> dist_;
};

// Euclidean distance between two points under the given rounding rule.
double euclidean(const Point& a, const Point& b, Rounding rounding);

// CVRPLIB reader. The depot listed in DEPOT_SECTION (default: node 1) becomes
// vertex 0; other nodes keep their file order. EUC_2D only.
Instance parse_cvrplib(std::string_view text);
std::string emit_cvrplib(const Instance& inst);

Instance load_cvrplib(const std::string& path);
void save_cvrplib(const Instance& inst, const std::string& path);

// Sidecar `.bks` file: a single number.
double parse_bks(std::string_view text);
std::optional<double> load_bks_sidecar(const std::string& instance_path);

Instance generate_instance(const GeneratorSpec& spec, std::uint64_t seed);

}  // namespace rhgs
