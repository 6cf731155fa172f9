#include <charconv>
#include <fstream>
#include <sstream>

#include "rhgs/errors.hpp"
#include "rhgs/relatedness.hpp"

namespace rhgs {

Heatmap parse_heatmap(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError("heatmap line " + std::to_string(line_no) + ": " + what);
  };

  int n = -1;
  while (n < 0 && std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag != "HEATMAP" || !(ls >> n) || n < 1) fail("expected 'HEATMAP <n>'");
  }
  if (n < 0) throw ParseError("empty heatmap file");

  Heatmap hm(n);
  std::map<std::pair<int, int>, bool> seen;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    int i, j;
    std::string p_text;
    if (!(ls >> i)) continue;
    if (!(ls >> j >> p_text)) fail("expected '<i> <j> <p>'");
    std::string rest;
    if (ls >> rest) fail("trailing data");
    if (!(1 <= i && i < j && j <= n)) fail("indices must satisfy 1 <= i < j <= n");
    double p = 0;
    auto res = std::from_chars(p_text.data(), p_text.data() + p_text.size(), p);
    if (res.ec != std::errc() || res.ptr != p_text.data() + p_text.size()) fail("bad probability");
    if (!(p >= 0.0 && p <= 1.0)) fail("probability outside [0,1]");
    if (!seen.emplace(std::pair{i, j}, true).second) fail("duplicate pair");
    hm.set(i, j, p);
  }
  return hm;
}

std::string emit_heatmap(const Heatmap& hm) {
  std::ostringstream out;
  out << "HEATMAP " << hm.customer_count() << '\n';
  char buf[64];
  for (const auto& [k, p] : hm.entries()) {
    auto res = std::to_chars(buf, buf + sizeof buf, p);
    out << k.first << ' ' << k.second << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
  }
  return out.str();
}

Heatmap load_heatmap(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_heatmap(ss.str());
}

void save_heatmap(const Heatmap& hm, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << emit_heatmap(hm);
}

}  // namespace rhgs
