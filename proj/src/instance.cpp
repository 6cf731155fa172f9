#include "rhgs/instance.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "rhgs/errors.hpp"

namespace rhgs {

namespace {

constexpr std::string_view kGeneratorTag = "XML-style generator ";

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::optional<GeneratorSpec> generator_from_comment(const std::string& comment) {
  if (comment.rfind(kGeneratorTag, 0) != 0) return std::nullopt;
  auto rest = std::string_view(comment).substr(kGeneratorTag.size());
  auto space = rest.find(' ');
  try {
    return parse_generator_spec(rest.substr(0, space));
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

}  // namespace

double euclidean(const Point& a, const Point& b, Rounding rounding) {
  double d = std::hypot(a.x - b.x, a.y - b.y);
  return rounding == Rounding::Nearest ? std::floor(d + 0.5) : d;
}

Instance::Instance(std::string name, std::vector<Point> coords, std::vector<int> demands,
                   int capacity, Rounding rounding, std::optional<double> bks, std::string comment)
    : name_(std::move(name)),
      comment_(std::move(comment)),
      n_(static_cast<int>(coords.size()) - 1),
      coords_(std::move(coords)),
      demands_(std::move(demands)),
      capacity_(capacity),
      rounding_(rounding),
      bks_(bks) {
  if (n_ < 1) throw ValidationError("instance needs a depot and at least one customer");
  if (demands_.size() != coords_.size())
    throw ValidationError("demand vector size does not match vertex count");
  if (capacity_ <= 0) throw ValidationError("capacity must be positive");
  for (const auto& p : coords_)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw ValidationError("coordinates must be finite");
  if (demands_[0] != 0) throw ValidationError("depot demand must be zero");
  for (int i = 1; i <= n_; ++i) {
    int d = demands_[static_cast<std::size_t>(i)];
    if (d <= 0)
      throw ValidationError("customer " + std::to_string(i) + " has nonpositive demand");
    if (d > capacity_)
      throw ValidationError("customer " + std::to_string(i) + " demand " + std::to_string(d) +
                            " exceeds capacity " + std::to_string(capacity_));
    total_demand_ += d;
  }
  if (bks_ && !(*bks_ > 0)) throw ValidationError("reference cost must be positive");
  generator_ = generator_from_comment(comment_);
  compute_distances();
}

void Instance::compute_distances() {
  const auto v = static_cast<std::size_t>(n_ + 1);
  dist_.assign(v * v, 0.0);
  double sum = 0;
  for (std::size_t i = 0; i < v; ++i) {
    for (std::size_t j = i + 1; j < v; ++j) {
      double d = euclidean(coords_[i], coords_[j], rounding_);
      dist_[i * v + j] = d;
      dist_[j * v + i] = d;
      sum += d;
    }
  }
  mean_edge_ = sum / (static_cast<double>(v * (v - 1)) / 2.0);
}

Instance Instance::with_bks(std::optional<double> bks) const {
  Instance copy = *this;
  if (bks && !(*bks > 0)) throw ValidationError("reference cost must be positive");
  copy.bks_ = bks;
  return copy;
}

Instance Instance::with_rounding(Rounding rounding) const {
  if (rounding == rounding_) return *this;
  Instance copy = *this;
  copy.rounding_ = rounding;
  copy.compute_distances();
  return copy;
}

Instance Instance::with_generator(GeneratorSpec spec) const {
  Instance copy = *this;
  copy.comment_ = std::string(kGeneratorTag) + format_generator_spec(spec);
  copy.generator_ = spec;
  return copy;
}

bool operator==(const Instance& a, const Instance& b) {
  return a.name_ == b.name_ && a.comment_ == b.comment_ && a.coords_ == b.coords_ &&
         a.demands_ == b.demands_ && a.capacity_ == b.capacity_ && a.rounding_ == b.rounding_ &&
         a.bks_ == b.bks_;
}

Instance parse_cvrplib(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::map<std::string, std::string> header;
  std::map<int, Point> coords;
  std::map<int, int> demands;
  std::vector<int> depots;
  bool saw_coords = false;
  bool saw_demands = false;
  bool saw_depot_section = false;

  enum class Section { Header, Coords, Demands, Depot } section = Section::Header;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t == "EOF") break;
    if (t == "NODE_COORD_SECTION") {
      section = Section::Coords;
      saw_coords = true;
      continue;
    }
    if (t == "DEMAND_SECTION") {
      section = Section::Demands;
      saw_demands = true;
      continue;
    }
    if (t == "DEPOT_SECTION") {
      section = Section::Depot;
      saw_depot_section = true;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(t[0]))) {
      auto colon = t.find(':');
      std::string key;
      std::string value;
      if (colon != std::string::npos) {
        key = trim(std::string_view(t).substr(0, colon));
        value = trim(std::string_view(t).substr(colon + 1));
      } else {
        auto sp = t.find_first_of(" \t");
        key = trim(std::string_view(t).substr(0, sp));
        value = sp == std::string::npos ? "" : trim(std::string_view(t).substr(sp));
      }
      if (key.size() > 8 && key.ends_with("_SECTION"))
        throw UnsupportedFormatError("unsupported section " + key);
      header[key] = value;
      section = Section::Header;
      continue;
    }
    std::istringstream ls(t);
    switch (section) {
      case Section::Coords: {
        int id;
        double x, y;
        if (!(ls >> id >> x >> y)) fail("malformed NODE_COORD_SECTION entry");
        if (!coords.emplace(id, Point{x, y}).second) fail("duplicate node " + std::to_string(id));
        break;
      }
      case Section::Demands: {
        int id;
        long long d;
        if (!(ls >> id >> d)) fail("malformed DEMAND_SECTION entry");
        if (d < 0 || d > std::numeric_limits<int>::max()) fail("demand out of range");
        if (!demands.emplace(id, static_cast<int>(d)).second)
          fail("duplicate demand for node " + std::to_string(id));
        break;
      }
      case Section::Depot: {
        int id;
        if (!(ls >> id)) fail("malformed DEPOT_SECTION entry");
        if (id >= 0) depots.push_back(id);
        break;
      }
      case Section::Header:
        fail("unexpected data line outside of a section");
    }
  }

  auto require = [&](const char* key) -> const std::string& {
    auto it = header.find(key);
    if (it == header.end()) throw ParseError(std::string("missing ") + key);
    return it->second;
  };
  const std::string& dim_text = require("DIMENSION");
  const std::string& cap_text = require("CAPACITY");
  if (!saw_coords) throw ParseError("missing NODE_COORD_SECTION");
  if (!saw_demands) throw ParseError("missing DEMAND_SECTION");
  if (auto it = header.find("EDGE_WEIGHT_TYPE"); it != header.end() && it->second != "EUC_2D")
    throw UnsupportedFormatError("unsupported EDGE_WEIGHT_TYPE " + it->second);

  int dimension = 0;
  long long capacity = 0;
  try {
    dimension = std::stoi(dim_text);
    capacity = std::stoll(cap_text);
  } catch (const std::exception&) {
    throw ParseError("DIMENSION and CAPACITY must be integers");
  }
  if (dimension < 2) throw ParseError("DIMENSION must be at least 2");
  if (capacity <= 0 || capacity > std::numeric_limits<int>::max())
    throw ValidationError("CAPACITY must be a positive integer");

  int depot = 1;
  if (saw_depot_section) {
    if (depots.size() != 1) throw UnsupportedFormatError("exactly one depot is supported");
    depot = depots.front();
  }
  for (int id = 1; id <= dimension; ++id) {
    if (!coords.contains(id)) throw ParseError("NODE_COORD_SECTION lacks node " + std::to_string(id));
    if (!demands.contains(id)) throw ParseError("DEMAND_SECTION lacks node " + std::to_string(id));
  }
  if (coords.size() != static_cast<std::size_t>(dimension) ||
      demands.size() != static_cast<std::size_t>(dimension))
    throw ParseError("section entries do not match DIMENSION");
  if (depot < 1 || depot > dimension) throw ParseError("depot id out of range");

  std::vector<Point> pts;
  std::vector<int> dem;
  pts.reserve(static_cast<std::size_t>(dimension));
  dem.reserve(static_cast<std::size_t>(dimension));
  pts.push_back(coords[depot]);
  dem.push_back(0);
  for (int id = 1; id <= dimension; ++id) {
    if (id == depot) continue;
    pts.push_back(coords[id]);
    dem.push_back(demands[id]);
  }
  std::string name = header.contains("NAME") ? header["NAME"] : std::string("unnamed");
  std::string comment = header.contains("COMMENT") ? header["COMMENT"] : std::string();
  return Instance(std::move(name), std::move(pts), std::move(dem), static_cast<int>(capacity),
                  Rounding::Nearest, std::nullopt, std::move(comment));
}

std::string emit_cvrplib(const Instance& inst) {
  std::ostringstream out;
  out << "NAME : " << inst.name() << '\n';
  if (!inst.comment().empty()) out << "COMMENT : " << inst.comment() << '\n';
  out << "TYPE : CVRP\n";
  out << "DIMENSION : " << inst.vertex_count() << '\n';
  out << "EDGE_WEIGHT_TYPE : EUC_2D\n";
  out << "CAPACITY : " << inst.capacity() << '\n';
  out << "NODE_COORD_SECTION\n";
  for (int v = 0; v < inst.vertex_count(); ++v) {
    const auto& p = inst.coords()[static_cast<std::size_t>(v)];
    out << v + 1 << '\t' << format_number(p.x) << '\t' << format_number(p.y) << '\n';
  }
  out << "DEMAND_SECTION\n";
  for (int v = 0; v < inst.vertex_count(); ++v) out << v + 1 << '\t' << inst.demand(v) << '\n';
  out << "DEPOT_SECTION\n\t1\n\t-1\nEOF\n";
  return out.str();
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Instance load_cvrplib(const std::string& path) {
  return parse_cvrplib(read_file(path)).with_bks(load_bks_sidecar(path));
}

void save_cvrplib(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << emit_cvrplib(inst);
  if (!out) throw IoError("failed writing " + path);
}

double parse_bks(std::string_view text) {
  std::string t = trim(text);
  double v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ParseError("bks file must contain a single number");
  if (!(v > 0)) throw ValidationError("reference cost must be positive");
  return v;
}

std::optional<double> load_bks_sidecar(const std::string& instance_path) {
  std::string path = instance_path;
  if (auto dot = path.find_last_of('.'); dot != std::string::npos && path.find('/', dot) == std::string::npos)
    path.erase(dot);
  path += ".bks";
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_bks(ss.str());
}

}  // namespace rhgs
