#include <chrono>
#include <map>
#include <numeric>
#include <sstream>

#include "rhgs/errors.hpp"
#include "rhgs/harness.hpp"
#include "rhgs/localsearch.hpp"

namespace rhgs {

CalibrationTable calibration_protocol(const std::vector<Instance>& instances, const std::vector<int>& gammas,
                                      std::uint64_t seed, ClockKind clock, double work_units_per_second) {
  if (gammas.empty()) throw DomainError("calibration needs at least one gamma");
  constexpr int kStarts = 10;
  CalibrationTable table;
  table.gammas = gammas;

  for (const auto& inst : instances) {
    const double w = initial_penalty(inst);
    const std::size_t first_row = table.rows.size();
    for (int gamma : gammas) {
      const NeighborLists nl = build_neighbor_lists_distance(inst, gamma);
      Rng rng(seed);
      CalibrationRow row;
      row.instance = inst.name();
      row.gamma = gamma;
      double wall = 0;
      for (int s = 0; s < kStarts; ++s) {
        GiantTour tour;
        tour.order.resize(static_cast<std::size_t>(inst.customer_count()));
        std::iota(tour.order.begin(), tour.order.end(), 1);
        shuffle(std::span<int>(tour.order), rng);
        Solution sol = split(inst, tour, w);
        LsStats stats;
        const auto t0 = std::chrono::steady_clock::now();
        sol = local_search(inst, sol, nl, w, rng, &stats);
        if (!sol.feasible()) sol = repair(inst, sol, nl, w, rng, &stats);
        wall += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        row.move_evaluations += stats.counters.total_evaluated();
        if (sol.feasible() && (!row.best_cost || sol.distance < *row.best_cost)) row.best_cost = sol.distance;
      }
      row.ls_seconds = clock == ClockKind::Wall ? wall
                                                : static_cast<double>(row.move_evaluations) / work_units_per_second;
      table.rows.push_back(row);
    }

    std::optional<double> reference = inst.bks();
    if (!reference)
      for (std::size_t k = first_row; k < table.rows.size(); ++k)
        if (table.rows[k].best_cost && (!reference || *table.rows[k].best_cost < *reference))
          reference = table.rows[k].best_cost;
    for (std::size_t k = first_row; k < table.rows.size(); ++k)
      if (reference && table.rows[k].best_cost) table.rows[k].gap = gap_percent(*table.rows[k].best_cost, *reference);
  }

  for (int gamma : gammas) {
    double gap_sum = 0, time_sum = 0;
    int gap_count = 0, count = 0;
    for (const auto& row : table.rows) {
      if (row.gamma != gamma) continue;
      ++count;
      time_sum += row.ls_seconds;
      if (row.gap) {
        gap_sum += *row.gap;
        ++gap_count;
      }
    }
    table.mean_gap.push_back(gap_count ? gap_sum / gap_count : 0.0);
    table.mean_seconds.push_back(count ? time_sum / count : 0.0);
  }
  return table;
}

std::string calibration_csv(const CalibrationTable& table) {
  std::ostringstream out;
  out.precision(10);
  out << "instance,gamma,best_cost,gap,ls_seconds,move_evaluations\n";
  for (const auto& r : table.rows) {
    out << r.instance << ',' << r.gamma << ',';
    if (r.best_cost) out << *r.best_cost;
    out << ',';
    if (r.gap) out << *r.gap;
    out << ',' << r.ls_seconds << ',' << r.move_evaluations << '\n';
  }
  return out.str();
}

std::string calibration_summary_csv(const CalibrationTable& table) {
  std::ostringstream out;
  out.precision(10);
  out << "gamma,mean_gap,mean_ls_seconds\n";
  for (std::size_t k = 0; k < table.gammas.size(); ++k)
    out << table.gammas[k] << ',' << table.mean_gap[k] << ',' << table.mean_seconds[k] << '\n';
  return out.str();
}

}  // namespace rhgs
