#include <algorithm>
#include <filesystem>
#include <fstream>
#include <locale>
#include <map>
#include <sstream>
#include <tuple>

#include "rhgs/errors.hpp"
#include "rhgs/harness.hpp"

namespace rhgs {

namespace fs = std::filesystem;

namespace {

std::ostringstream csv_stream() {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(10);
  return out;
}

std::vector<std::string> variant_order(const std::vector<RunRecord>& records) {
  std::vector<std::string> order;
  for (const auto& r : records)
    if (std::find(order.begin(), order.end(), r.variant) == order.end()) order.push_back(r.variant);
  return order;
}

template <typename T>
void optional_field(std::ostringstream& out, const std::optional<T>& v) {
  if (v) out << *v;
}

// Best cost reached at or before t, if any.
std::optional<double> best_at(const std::vector<TracePoint>& trace, double t) {
  std::optional<double> best;
  for (const auto& p : trace) {
    if (p.seconds > t) break;
    best = p.cost;
  }
  return best;
}

}  // namespace

std::string records_csv(const std::vector<RunRecord>& records) {
  auto out = csv_stream();
  out << "instance,n,variant,seed,gamma,budget,cost,reference,gap,hit,time_to_best,elapsed,inference_seconds,"
         "iterations,error\n";
  for (const auto& r : records) {
    out << r.instance << ',' << r.n << ',' << r.variant << ',' << r.seed << ',' << r.gamma << ',' << r.budget << ',';
    optional_field(out, r.cost);
    out << ',';
    optional_field(out, r.reference);
    out << ',';
    optional_field(out, r.gap);
    std::string error = r.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    out << ',' << (r.hit ? 1 : 0) << ',' << r.time_to_best << ',' << r.elapsed << ',' << r.inference_seconds << ','
        << r.iterations << ',' << error << '\n';
  }
  return out.str();
}

std::string summary_csv(const std::vector<RunRecord>& records) {
  auto out = csv_stream();
  out << "variant,runs,with_reference,opt,mean_gap,mean_time,errors\n";
  for (const auto& v : variant_order(records)) {
    int runs = 0, with_ref = 0, opt = 0, errors = 0, timed = 0;
    double gap_sum = 0, time_sum = 0;
    for (const auto& r : records) {
      if (r.variant != v) continue;
      ++runs;
      if (!r.error.empty()) ++errors;
      if (r.cost) {
        time_sum += r.time_to_best;
        ++timed;
      }
      if (r.gap) {
        ++with_ref;
        gap_sum += *r.gap;
        if (r.hit) ++opt;
      }
    }
    out << v << ',' << runs << ',' << with_ref << ',' << opt << ',';
    if (with_ref) out << gap_sum / with_ref;
    out << ',';
    if (timed) out << time_sum / timed;
    out << ',' << errors << '\n';
  }
  return out.str();
}

std::string convergence_csv(const std::vector<RunRecord>& records, int buckets) {
  if (buckets < 1) throw DomainError("bucket count must be positive");
  auto out = csv_stream();
  out << "variant,bucket,fraction,mean_gap,runs\n";
  for (const auto& v : variant_order(records)) {
    for (int b = 1; b <= buckets; ++b) {
      const double fraction = static_cast<double>(b) / buckets;
      double sum = 0;
      int count = 0;
      for (const auto& r : records) {
        if (r.variant != v || !r.reference) continue;
        auto best = best_at(r.trace, fraction * r.budget);
        if (!best) continue;
        sum += gap_percent(*best, *r.reference);
        ++count;
      }
      out << v << ',' << b << ',' << fraction << ',';
      if (count) out << sum / count;
      out << ',' << count << '\n';
    }
  }
  return out.str();
}

std::string grouped_gap_csv(const std::vector<RunRecord>& records) {
  auto out = csv_stream();
  out << "variant,instance,seed,gamma,depot,customers,demand,route_size,gap\n";
  for (const auto& r : records) {
    out << r.variant << ',' << r.instance << ',' << r.seed << ',' << r.gamma << ',';
    if (r.attributes)
      out << to_string(r.attributes->depot) << ',' << to_string(r.attributes->customers) << ','
          << to_string(r.attributes->demand) << ',' << r.attributes->route_size;
    else
      out << ",,,";
    out << ',';
    optional_field(out, r.gap);
    out << '\n';
  }
  return out.str();
}

std::string comparison_csv(const std::vector<RunRecord>& records) {
  auto out = csv_stream();
  out << "variant_a,variant_b,pairs,mean_gap_a,mean_gap_b,mean_difference,statistic,p_value,exact,note\n";
  using Key = std::tuple<std::string, std::uint64_t, int>;
  std::map<std::string, std::map<Key, double>> gaps;
  for (const auto& r : records)
    if (r.gap) gaps[r.variant][Key{r.instance, r.seed, r.gamma}] = *r.gap;
  const auto order = variant_order(records);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      std::vector<double> a, b;
      for (const auto& [key, g] : gaps[order[i]]) {
        auto it = gaps[order[j]].find(key);
        if (it == gaps[order[j]].end()) continue;
        a.push_back(g);
        b.push_back(it->second);
      }
      out << order[i] << ',' << order[j] << ',' << a.size() << ',';
      if (a.empty()) {
        out << ",,,,,,no paired records\n";
        continue;
      }
      double sa = 0, sb = 0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        sa += a[k];
        sb += b[k];
      }
      const auto n = static_cast<double>(a.size());
      out << sa / n << ',' << sb / n << ',' << (sa - sb) / n << ',';
      try {
        auto w = wilcoxon_paired(a, b);
        out << w.statistic << ',' << w.p_value << ',' << (w.exact ? 1 : 0) << ",\n";
      } catch (const std::exception& e) {
        std::string note = e.what();
        std::replace(note.begin(), note.end(), ',', ';');
        out << ",,," << note << '\n';
      }
    }
  }
  return out.str();
}

void emit_reports(const std::vector<RunRecord>& records, const std::string& dir) {
  if (records.empty()) throw DomainError("no records to report");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  auto write = [&](const std::string& name, const std::string& body) {
    const auto path = (fs::path(dir) / name).string();
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << body)) throw IoError("cannot write " + path);
  };
  write("records.csv", records_csv(records));
  write("summary.csv", summary_csv(records));
  write("convergence.csv", convergence_csv(records));
  write("grouped_gaps.csv", grouped_gap_csv(records));
  write("comparisons.csv", comparison_csv(records));
}

}  // namespace rhgs
