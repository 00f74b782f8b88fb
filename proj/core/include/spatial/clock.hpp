#pragma once

#include <vector>

#include "spatial/types.hpp"

namespace spatial {

// Maps logical ticks onto simulated wall-clock time. A new simulated day
// starts at every declared day-start tick and at every simulated midnight.
struct SimClock {
  double tick_seconds = 0.5;
  int start_minute_of_day = 0;  // wall clock at tick 0
  std::vector<Tick> declared_day_starts;

  [[nodiscard]] double seconds_since_midnight(Tick tick) const;
  [[nodiscard]] int minute_of_day(Tick tick) const;
  [[nodiscard]] int day_index(Tick tick) const;
  [[nodiscard]] Tick day_start(Tick tick) const;
  [[nodiscard]] Tick ticks_for_seconds(double seconds) const;
  [[nodiscard]] double hours_between(Tick from, Tick to) const;
};

}  // namespace spatial
