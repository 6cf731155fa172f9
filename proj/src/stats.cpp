#include <algorithm>
#include <cmath>
#include <numeric>

#include "rhgs/errors.hpp"
#include "rhgs/harness.hpp"

namespace rhgs {

double gap_percent(double z, double z_bks) {
  if (!(z_bks > 0)) throw DomainError("reference cost must be positive");
  return 100.0 * (z - z_bks) / z_bks;
}

namespace {

constexpr int kExactLimit = 25;

// Midranks (1-based) of values.
std::vector<double> midranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

WilcoxonResult wilcoxon_paired(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DomainError("paired samples differ in length");
  std::vector<double> diff;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] - b[k] != 0) diff.push_back(a[k] - b[k]);
  if (diff.empty()) throw DegenerateSampleError("all paired differences are zero");
  if (diff.size() < 6) throw DomainError("fewer than 6 nonzero paired differences");

  std::vector<double> magnitude(diff.size());
  for (std::size_t k = 0; k < diff.size(); ++k) magnitude[k] = std::fabs(diff[k]);
  const std::vector<double> ranks = midranks(magnitude);

  WilcoxonResult res;
  res.nonzero_pairs = static_cast<int>(diff.size());
  for (std::size_t k = 0; k < diff.size(); ++k)
    if (diff[k] > 0) res.statistic += ranks[k];

  const auto m = static_cast<double>(diff.size());
  if (res.nonzero_pairs <= kExactLimit) {
    // Doubled midranks are integers; count sign assignments per doubled sum.
    std::vector<int> doubled(ranks.size());
    int total = 0;
    for (std::size_t k = 0; k < ranks.size(); ++k) {
      doubled[k] = static_cast<int>(std::lround(2 * ranks[k]));
      total += doubled[k];
    }
    std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
    count[0] = 1;
    int reach = 0;
    for (int r : doubled) {
      for (int s = reach; s >= 0; --s)
        if (count[static_cast<std::size_t>(s)] != 0) count[static_cast<std::size_t>(s + r)] += count[static_cast<std::size_t>(s)];
      reach += r;
    }
    const long observed = std::lround(2 * res.statistic);
    double below = 0, above = 0;
    for (int s = 0; s <= total; ++s) {
      if (s <= observed) below += count[static_cast<std::size_t>(s)];
      if (s >= observed) above += count[static_cast<std::size_t>(s)];
    }
    const double outcomes = std::ldexp(1.0, res.nonzero_pairs);
    res.p_value = std::min(1.0, 2.0 * std::min(below, above) / outcomes);
    res.exact = true;
    return res;
  }

  double tie_term = 0;
  std::vector<double> sorted = magnitude;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const auto t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  const double mean = m * (m + 1) / 4;
  const double var = m * (m + 1) * (2 * m + 1) / 24 - tie_term / 48;
  const double z = std::max(0.0, std::fabs(res.statistic - mean) - 0.5) / std::sqrt(var);
  res.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return res;
}

}  // namespace rhgs
