#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spatial/types.hpp"

namespace spatial {

// One time-stamped detection response.
struct Observation {
  ObservationId id = 0;
  Vec2 position;
  Tick tick = 0;
  EmbeddingRef appearance;
  std::optional<AudioLabel> audio_tag;
  double detection_score = 0.0;
  ObjectClass label = ObjectClass::person;
};

// Throws ValidationError unless the score is in [0,1], the tick is
// non-negative and the appearance vector has kEmbeddingDim entries.
void validate(const Observation& obs);

// Temporally accumulated identity evidence for one trajectory.
struct IdentityTrack {
  std::optional<UserId> user;
  std::map<UserId, double> scores;  // exponential moving averages
  std::optional<UserId> challenger;
  int streak = 0;
  int changes = 0;
  Tick last_tick = -1;  // last decision folded in

  friend bool operator==(const IdentityTrack&, const IdentityTrack&) = default;
};

struct Trajectory {
  TrajectoryId id = 0;
  std::vector<Observation> observations;
  IdentityTrack identity;
  bool active = false;

  [[nodiscard]] const Observation& back() const { return observations.back(); }
  [[nodiscard]] bool empty() const { return observations.empty(); }
};

struct StationaryObject {
  ObjectClass label = ObjectClass::other;
  Vec2 position;
};

struct SemanticMap {
  std::vector<Trajectory> trajectories;
  std::vector<StationaryObject> stationary_objects;
  Pose device_pose;
  Tick clock = 0;
};

struct InteractionRecord {
  ContentType interaction_type = ContentType::email;
  Tick delivery_tick = 0;
  Priority priority = Priority::medium;
  bool batched = false;
};

struct UserProfile {
  UserId user_id;
  std::string display_name;
  Embedding enrolled_embedding;
  std::deque<InteractionRecord> history;
  std::size_t history_capacity = 32;
  std::optional<Tick> last_seen_tick;
};

struct PresenceConfig {
  Tick presence_horizon = 30;  // ticks since last observation to count as active
  Tick regreet_absence = 30;   // absence after which a return counts as a first detection
};

struct Presence {
  bool alone = false;
  bool user_present = false;
  bool first_time = false;
  bool first_time_today = false;
  Engagement engaged = Engagement::idle;
  int occupancy = 0;
  std::optional<TrajectoryId> user_trajectory;
};

// Maps a device-frame bearing and range onto the floor plane.
Vec2 project_to_floorplan(double bearing, double range, const Pose& device_pose);

// Bearing of a world point as seen from the device, in [0, 2*pi).
double bearing_from_device(const Vec2& point, const Pose& device_pose);

// Structural checks on a trajectory set: observations strictly increasing in
// time within each trajectory and no observation id shared between two.
void validate_trajectories(std::span<const Trajectory> trajectories);

// Replaces the map's trajectories with the solver output. Identity state is
// carried over for trajectory ids already in the map; the clock is unchanged.
SemanticMap apply_association(SemanticMap map, std::vector<Trajectory> trajectories);

// Sets `active` on each trajectory relative to map.clock.
void refresh_activity(SemanticMap& map, Tick presence_horizon);

// Number of active person-labelled trajectories.
int occupancy(const SemanticMap& map);

// Start of the simulated day containing `tick`, given sorted day-start ticks.
Tick day_start_for(std::span<const Tick> day_starts, Tick tick);

Presence presence_predicates(const SemanticMap& map, const UserProfile& profile, Tick tick,
                             Engagement engagement, Tick day_start,
                             const PresenceConfig& config = {});

// Updates the profile's last-seen bookkeeping after presence evaluation.
void mark_seen(UserProfile& profile, const Presence& presence, Tick tick);

// Appends to the bounded interaction history, evicting the oldest record once
// the capacity is exceeded. Rejects records older than the newest one.
void record_interaction(UserProfile& profile, const InteractionRecord& record);

std::optional<InteractionRecord> last_of_type(const UserProfile& profile, ContentType type);

}  // namespace spatial
