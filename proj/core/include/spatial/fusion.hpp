#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "spatial/types.hpp"
#include "spatial/world_model.hpp"

namespace spatial {

struct LinkParams {
  double position_sigma = 0.5;     // meters
  double appearance_gamma = 2.0;
  double label_mismatch = 0.01;
  double gap_decay = 0.8;          // per skipped tick
};

// Product of position, appearance, label and time-gap kernels, in (0,1].
// Requires obs_j to be strictly later than obs_i.
double link_likelihood(const Observation& obs_i, const Observation& obs_j,
                       const LinkParams& params = {});

// Cosine similarity; zero when either vector has zero norm.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

inline constexpr double kAudioRadius = 2.0;  // meters

// Far-field DOA has no usable range, so sources are placed at a fixed radius.
Vec2 doa_to_cartesian(double doa, const Pose& device_pose, double radius = kAudioRadius);

struct AcousticEvent {
  AudioLabel label = AudioLabel::other;
  double posterior = 0.0;
  double doa = 0.0;  // device frame, radians
  Tick tick = 0;
  EmbeddingRef speaker_embedding;  // set for speech when a voice print was extracted
};

inline constexpr double kDefaultPairGate = 20.0 * kPi / 180.0;

struct AudioVisualPair {
  std::size_t event_index = 0;
  std::optional<TrajectoryId> trajectory;  // nullopt: unpaired
  double angular_distance = 0.0;
};

// Minimum-cost assignment of co-occurring acoustic events to person
// trajectories by bearing. Each event either pairs with a distinct trajectory
// (cost = angular distance, allowed only within `gate`) or stays unpaired
// (cost = gate). Result is indexed like `events`.
std::vector<AudioVisualPair> pair_audio_visual(std::span<const AcousticEvent> events,
                                               std::span<const Trajectory> person_trajectories,
                                               const SemanticMap& map,
                                               double gate = kDefaultPairGate);

struct Gallery {
  std::map<UserId, Embedding> entries;
  double accept_threshold = 0.4;   // cosine distance
  double background_margin = 0.1;  // required gap to the runner-up
};

struct RecognitionResult {
  std::optional<UserId> user;
  double score = 0.0;     // cosine similarity to the nearest entry
  double distance = 2.0;  // cosine distance to the nearest entry
};

// Open-set decision: nearest enrolled entry by cosine distance, accepted only
// within the threshold and clearly ahead of the runner-up.
RecognitionResult classify_embedding(std::span<const double> embedding, const Gallery& gallery);

struct IdentityParams {
  double ema_alpha = 0.2;
  double hysteresis = 0.1;
  int confirm_ticks = 3;
};

struct IdentityDecision {
  Tick tick = 0;
  std::optional<UserId> user;
  double score = 1.0;  // evidence weight in [0,1]
};

// Folds one per-tick decision into the trajectory's identity track.
// Decisions at or before the last folded tick are rejected.
void accumulate_identity(IdentityTrack& track, const IdentityDecision& decision,
                         const IdentityParams& params = {});

// Combines face and voice decisions made on the same tick. The higher score
// wins; the face decision wins ties.
IdentityDecision fuse_decisions(const std::optional<IdentityDecision>& face,
                                const std::optional<IdentityDecision>& voice);

}  // namespace spatial
