#include "spatial/clock.hpp"

#include <algorithm>
#include <cmath>

namespace spatial {
namespace {

constexpr double kSecondsPerDay = 86400.0;

double wall_seconds(const SimClock& c, Tick tick) {
  return c.start_minute_of_day * 60.0 + static_cast<double>(tick) * c.tick_seconds;
}

long long midnights_through(const SimClock& c, Tick tick) {
  return static_cast<long long>(std::floor(wall_seconds(c, tick) / kSecondsPerDay));
}

bool is_midnight_tick(const SimClock& c, Tick tick) {
  return tick > 0 && midnights_through(c, tick) > midnights_through(c, tick - 1);
}

}  // namespace

double SimClock::seconds_since_midnight(Tick tick) const {
  return std::fmod(wall_seconds(*this, tick), kSecondsPerDay);
}

int SimClock::minute_of_day(Tick tick) const {
  return static_cast<int>(seconds_since_midnight(tick) / 60.0);
}

int SimClock::day_index(Tick tick) const {
  long long count = midnights_through(*this, tick);
  for (Tick d : declared_day_starts) {
    if (d > 0 && d <= tick && !is_midnight_tick(*this, d)) ++count;
  }
  return static_cast<int>(count);
}

Tick SimClock::day_start(Tick tick) const {
  Tick start = 0;
  const long long k = midnights_through(*this, tick);
  if (k > 0) {
    const double t = (static_cast<double>(k) * kSecondsPerDay - start_minute_of_day * 60.0) /
                     tick_seconds;
    start = std::max(start, static_cast<Tick>(std::ceil(t - 1e-9)));
  }
  for (Tick d : declared_day_starts) {
    if (d <= tick) start = std::max(start, d);
  }
  return start;
}

Tick SimClock::ticks_for_seconds(double seconds) const {
  return static_cast<Tick>(std::llround(seconds / tick_seconds));
}

double SimClock::hours_between(Tick from, Tick to) const {
  return static_cast<double>(to - from) * tick_seconds / 3600.0;
}

}  // namespace spatial
