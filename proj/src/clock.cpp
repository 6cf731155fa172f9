#include "rhgs/clock.hpp"

#include <string>

#include "rhgs/errors.hpp"

namespace rhgs {

ClockKind parse_clock_kind(std::string_view text) {
  if (text == "work") return ClockKind::Work;
  if (text == "wall") return ClockKind::Wall;
  throw ParseError("unknown clock kind '" + std::string(text) + "' (expected work|wall)");
}

std::string_view to_string(ClockKind kind) {
  return kind == ClockKind::Work ? "work" : "wall";
}

SearchClock::SearchClock(ClockKind kind, double work_units_per_second)
    : kind_(kind), rate_(work_units_per_second), start_(std::chrono::steady_clock::now()) {
  if (!(rate_ > 0)) throw DomainError("work clock rate must be positive");
}

double SearchClock::elapsed_seconds() const {
  if (kind_ == ClockKind::Work) return offset_ + static_cast<double>(work_units_) / rate_;
  return offset_ + std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

}  // namespace rhgs
