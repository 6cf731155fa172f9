#pragma once

#include <chrono>
#include <cstdint>
#include <string_view>

namespace rhgs {

enum class ClockKind { Work, Wall };

ClockKind parse_clock_kind(std::string_view text);
std::string_view to_string(ClockKind kind);

// Default conversion rate for the work clock. One work unit is one local
// search move evaluation, one Split arc relaxation or one crossover position.
// The rate was measured on the development machine so that a work-clock
// second is close to a wall second for 100-customer instances.
inline constexpr double kDefaultWorkUnitsPerSecond = 5.0e7;

// Elapsed-time source for a search run.
//
// The work clock advances only through charge() and makes runs with a time
// limit bit-reproducible. The wall clock ignores charges and reads a steady
// clock started at construction.
class SearchClock {
 public:
  explicit SearchClock(ClockKind kind = ClockKind::Work,
                       double work_units_per_second = kDefaultWorkUnitsPerSecond);

  void charge(std::uint64_t units) { work_units_ += units; }
  // Adds time spent outside the search (heatmap inference) to either clock.
  void charge_seconds(double seconds) { offset_ += seconds; }
  double elapsed_seconds() const;
  std::uint64_t work_units() const { return work_units_; }
  ClockKind kind() const { return kind_; }

 private:
  ClockKind kind_;
  double rate_;
  std::uint64_t work_units_ = 0;
  double offset_ = 0;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace rhgs
