#include "spatial/world_model.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace spatial {

void validate(const Observation& obs) {
  if (!(obs.detection_score >= 0.0 && obs.detection_score <= 1.0)) {
    throw ValidationError("observation " + std::to_string(obs.id) +
                          ": detection_score outside [0,1]");
  }
  if (obs.tick < 0) {
    throw ValidationError("observation " + std::to_string(obs.id) + ": negative tick");
  }
  if (!obs.appearance || obs.appearance->size() != kEmbeddingDim) {
    throw ValidationError("observation " + std::to_string(obs.id) + ": appearance must have " +
                          std::to_string(kEmbeddingDim) + " entries");
  }
  if (!std::isfinite(obs.position.x) || !std::isfinite(obs.position.y)) {
    throw ValidationError("observation " + std::to_string(obs.id) + ": non-finite position");
  }
}

Vec2 project_to_floorplan(double bearing, double range, const Pose& device_pose) {
  if (!std::isfinite(bearing) || !std::isfinite(range) ||
      !std::isfinite(device_pose.heading) || !std::isfinite(device_pose.position.x) ||
      !std::isfinite(device_pose.position.y)) {
    throw ValidationError("project_to_floorplan: non-finite input");
  }
  if (!(range > 0.0)) throw ValidationError("project_to_floorplan: range must be positive");
  const double angle = device_pose.heading + bearing;
  return {device_pose.position.x + range * std::cos(angle),
          device_pose.position.y + range * std::sin(angle)};
}

double bearing_from_device(const Vec2& point, const Pose& device_pose) {
  const Vec2 d = point - device_pose.position;
  return wrap_two_pi(std::atan2(d.y, d.x) - device_pose.heading);
}

void validate_trajectories(std::span<const Trajectory> trajectories) {
  std::unordered_map<ObservationId, TrajectoryId> owner;
  std::unordered_set<TrajectoryId> ids;
  for (const auto& traj : trajectories) {
    if (!ids.insert(traj.id).second) {
      throw ValidationError("duplicate trajectory id " + std::to_string(traj.id));
    }
    for (std::size_t i = 0; i < traj.observations.size(); ++i) {
      const auto& obs = traj.observations[i];
      if (i > 0 && obs.tick <= traj.observations[i - 1].tick) {
        throw ValidationError("trajectory " + std::to_string(traj.id) +
                              ": observation times not strictly increasing at id " +
                              std::to_string(obs.id));
      }
      auto [it, inserted] = owner.emplace(obs.id, traj.id);
      if (!inserted) {
        throw ValidationError("observation " + std::to_string(obs.id) +
                              " shared by trajectories " + std::to_string(it->second) +
                              " and " + std::to_string(traj.id));
      }
    }
  }
}

SemanticMap apply_association(SemanticMap map, std::vector<Trajectory> trajectories) {
  validate_trajectories(trajectories);
  std::unordered_map<TrajectoryId, const Trajectory*> previous;
  for (const auto& t : map.trajectories) previous.emplace(t.id, &t);
  for (auto& t : trajectories) {
    if (auto it = previous.find(t.id); it != previous.end()) {
      t.identity = it->second->identity;
    }
  }
  map.trajectories = std::move(trajectories);
  return map;
}

void refresh_activity(SemanticMap& map, Tick presence_horizon) {
  for (auto& t : map.trajectories) {
    t.active = !t.empty() && map.clock - t.back().tick <= presence_horizon &&
               t.back().tick <= map.clock;
  }
}

int occupancy(const SemanticMap& map) {
  return static_cast<int>(std::count_if(
      map.trajectories.begin(), map.trajectories.end(), [](const Trajectory& t) {
        return t.active && !t.empty() && t.back().label == ObjectClass::person;
      }));
}

Tick day_start_for(std::span<const Tick> day_starts, Tick tick) {
  Tick start = 0;
  for (Tick s : day_starts) {
    if (s <= tick) start = std::max(start, s);
  }
  return start;
}

Presence presence_predicates(const SemanticMap& map, const UserProfile& profile, Tick tick,
                             Engagement engagement, Tick day_start,
                             const PresenceConfig& config) {
  Presence p;
  p.engaged = engagement;
  for (const auto& t : map.trajectories) {
    if (t.empty() || t.back().label != ObjectClass::person) continue;
    const bool active = tick - t.back().tick <= config.presence_horizon;
    if (!active) continue;
    ++p.occupancy;
    if (t.identity.user && *t.identity.user == profile.user_id) {
      p.user_present = true;
      p.user_trajectory = t.id;
    }
  }
  p.alone = p.occupancy == 1 && p.user_present;
  if (p.user_present) {
    const auto& last = profile.last_seen_tick;
    p.first_time = !last || tick - *last > config.regreet_absence;
    p.first_time_today = !last || *last < day_start;
  }
  return p;
}

void mark_seen(UserProfile& profile, const Presence& presence, Tick tick) {
  if (presence.user_present) profile.last_seen_tick = tick;
}

void record_interaction(UserProfile& profile, const InteractionRecord& record) {
  if (record.delivery_tick < 0) throw ValidationError("record_interaction: negative tick");
  if (!profile.history.empty() && record.delivery_tick < profile.history.back().delivery_tick) {
    throw ValidationError("record_interaction: delivery tick " +
                          std::to_string(record.delivery_tick) + " precedes last record " +
                          std::to_string(profile.history.back().delivery_tick));
  }
  profile.history.push_back(record);
  while (profile.history.size() > profile.history_capacity) profile.history.pop_front();
}

std::optional<InteractionRecord> last_of_type(const UserProfile& profile, ContentType type) {
  for (auto it = profile.history.rbegin(); it != profile.history.rend(); ++it) {
    if (it->interaction_type == type) return *it;
  }
  return std::nullopt;
}

}  // namespace spatial
