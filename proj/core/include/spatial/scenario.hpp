#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "spatial/rules.hpp"
#include "spatial/types.hpp"
#include "spatial/world_model.hpp"

namespace spatial {

inline constexpr int kScenarioSchemaVersion = 1;

struct Waypoint {
  Tick tick = 0;
  Vec2 position;
};

struct ActivityInterval {
  Tick start = 0;  // inclusive
  Tick end = 0;    // exclusive
  Engagement engagement = Engagement::idle;
};

struct ScriptedPerson {
  std::string id;
  std::string name;
  bool enrolled = false;
  Embedding embedding;  // unit length
  Tick entry_tick = 0;  // inclusive
  Tick exit_tick = 0;   // exclusive
  std::vector<Waypoint> waypoints;  // sorted by tick, at least one
  std::vector<ActivityInterval> activities;

  [[nodiscard]] bool present(Tick tick) const { return tick >= entry_tick && tick < exit_tick; }
  // Piecewise-linear between waypoints, constant outside them.
  [[nodiscard]] Vec2 position(Tick tick) const;
  [[nodiscard]] Engagement engagement(Tick tick) const;
};

struct ScriptedAcoustic {
  Tick tick = 0;
  AudioLabel label = AudioLabel::other;
  double posterior = 1.0;
  std::optional<double> bearing;  // device frame; derived from the speaker when absent
  std::string speaker;            // person id, speech only
};

struct VoiceTrigger {
  Tick tick = 0;
  std::string text;
};

struct NoiseConfig {
  double detection_prob = 1.0;
  double false_positive_rate = 0.0;  // expected false detections per tick
  double position_sigma = 0.0;       // meters
  double embedding_sigma = 0.0;      // per component
  double bearing_sigma = 0.0;        // radians
  double detection_score = 0.9;      // reported score of true detections
};

// Declared message counts for the two study conditions.
struct ConditionCounts {
  int email = 0;
  int calendar = 0;
  int other = 0;
  Tick duration_ticks = 0;
};

std::optional<ConditionCounts> condition_counts(std::string_view condition);

struct Scenario {
  int schema_version = kScenarioSchemaVersion;
  std::string name;
  std::optional<std::string> condition;
  Tick duration_ticks = 0;
  double tick_seconds = 0.5;
  int start_minute_of_day = 0;
  std::vector<Tick> day_starts;
  std::uint64_t seed = 0;
  Pose device_pose;
  std::string user;  // id of the scripted person who owns the device
  std::set<std::string> whitelist{"family", "boss", "friends"};
  std::set<std::string> news_keywords{"terrorist", "politics"};
  std::string weather_report = "Today will be mostly sunny with a high of 18 degrees.";
  std::vector<ScriptedPerson> persons;
  std::vector<StationaryObject> stationary_objects;
  std::vector<ScriptedAcoustic> acoustic_events;
  std::vector<ServiceEvent> services;  // sorted by arrival tick, stable
  std::vector<VoiceTrigger> voice_triggers;
  NoiseConfig noise;
  std::map<ContentType, Tick> durations;  // speech duration per type, in ticks

  [[nodiscard]] const ScriptedPerson* person(std::string_view id) const;
  [[nodiscard]] Tick duration_of(ContentType type) const;
};

// Counts services by Table-2 category: email, calendar, everything else.
ConditionCounts count_messages(const Scenario& scenario);

// Deterministic unit embedding for a person's `embedding_seed`.
Embedding seeded_embedding(std::uint64_t seed);

// Throws ValidationError prefixed with the JSON pointer of the offending value.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::string& path);

// Re-checks cross-field invariants after programmatic edits.
void validate(const Scenario& scenario);

}  // namespace spatial
