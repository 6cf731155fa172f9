#include <fstream>
#include <sstream>

#include "rhgs/errors.hpp"
#include "rhgs/harness.hpp"

namespace rhgs {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Drops a trailing '#' comment that is not inside quotes.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    if (line[k] == '"') quoted = !quoted;
    if (line[k] == '#' && !quoted) return line.substr(0, k);
  }
  return line;
}

std::string scalar(const std::string& raw, int line_no) {
  std::string v = trim(raw);
  if (v.size() >= 2 && v.front() == '"') {
    if (v.back() != '"') throw ParseError("line " + std::to_string(line_no) + ": unterminated string");
    return v.substr(1, v.size() - 2);
  }
  return v;
}

std::vector<std::string> list(const std::string& raw, int line_no) {
  std::string v = trim(raw);
  if (v.empty() || v.front() != '[') return {scalar(v, line_no)};
  if (v.back() != ']') throw ParseError("line " + std::to_string(line_no) + ": unterminated list");
  std::vector<std::string> out;
  std::string item;
  bool quoted = false;
  for (std::size_t k = 1; k + 1 < v.size(); ++k) {
    char ch = v[k];
    if (ch == '"') quoted = !quoted;
    if (ch == ',' && !quoted) {
      if (!trim(item).empty()) out.push_back(scalar(item, line_no));
      item.clear();
    } else {
      item += ch;
    }
  }
  if (quoted) throw ParseError("line " + std::to_string(line_no) + ": unterminated string");
  if (!trim(item).empty()) out.push_back(scalar(item, line_no));
  return out;
}

double number(const std::string& s, const std::string& key, int line_no) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError("line " + std::to_string(line_no) + ": " + key + " expects a number, got '" + s + "'");
}

bool boolean(const std::string& s, const std::string& key, int line_no) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ParseError("line " + std::to_string(line_no) + ": " + key + " expects true or false");
}

}  // namespace

ExperimentMatrix parse_matrix_config(std::string_view text) {
  ExperimentMatrix m;
  m.variants.clear();
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty() || line.front() == '[') continue;  // blank or table header
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = line.substr(eq + 1);

    if (key == "instances") {
      m.instances = list(value, line_no);
    } else if (key == "variants") {
      for (const auto& v : list(value, line_no)) m.variants.push_back(parse_variant(v));
    } else if (key == "seeds") {
      m.seeds.clear();
      for (const auto& s : list(value, line_no)) m.seeds.push_back(static_cast<std::uint64_t>(number(s, key, line_no)));
    } else if (key == "gammas") {
      m.gammas.clear();
      for (const auto& s : list(value, line_no)) m.gammas.push_back(static_cast<int>(number(s, key, line_no)));
    } else if (key == "budget") {
      m.budget.seconds = number(scalar(value, line_no), key, line_no);
    } else if (key == "budget_rule") {
      const auto rule = scalar(value, line_no);
      if (rule == "fixed")
        m.budget.rule = Budget::Rule::Fixed;
      else if (rule == "linear")
        m.budget.rule = Budget::Rule::Linear;
      else
        throw ParseError("line " + std::to_string(line_no) + ": budget_rule must be fixed or linear");
    } else if (key == "heatmap") {
      const auto src = scalar(value, line_no);
      if (src == "none") {
        m.heatmap.kind = HeatmapSource::Kind::None;
      } else if (src.rfind("dir:", 0) == 0) {
        m.heatmap.kind = HeatmapSource::Kind::Directory;
        m.heatmap.path = src.substr(4);
      } else if (src.rfind("oracle:", 0) == 0) {
        m.heatmap.kind = HeatmapSource::Kind::Oracle;
        m.heatmap.path = src.substr(7);
      } else {
        throw ParseError("line " + std::to_string(line_no) + ": heatmap must be none, dir:PATH or oracle:PATH");
      }
    } else if (key == "heatmap_noise") {
      m.heatmap.noise = number(scalar(value, line_no), key, line_no);
    } else if (key == "optimistic") {
      m.optimistic = boolean(scalar(value, line_no), key, line_no);
    } else if (key == "workers") {
      m.workers = static_cast<int>(number(scalar(value, line_no), key, line_no));
    } else if (key == "clock") {
      m.clock = parse_clock_kind(scalar(value, line_no));
    } else if (key == "work_rate") {
      m.work_units_per_second = number(scalar(value, line_no), key, line_no);
    } else if (key == "n_it") {
      m.n_it = static_cast<int>(number(scalar(value, line_no), key, line_no));
    } else if (key == "reference") {
      m.reference = scalar(value, line_no);
    } else if (key == "output") {
      m.output = scalar(value, line_no);
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (m.variants.empty()) m.variants.push_back(parse_variant("d-o"));
  m.validate();
  return m;
}

ExperimentMatrix load_matrix_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix_config(buf.str());
}

}  // namespace rhgs
