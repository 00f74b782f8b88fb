#include "spatial/fusion.hpp"

#include <algorithm>
#include <cfloat>
#include <limits>
#include <numeric>
#include <string>

namespace spatial {

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("cosine_similarity: dimension mismatch");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

double link_likelihood(const Observation& obs_i, const Observation& obs_j,
                       const LinkParams& params) {
  if (!obs_i.appearance || !obs_j.appearance || obs_i.appearance->size() != kEmbeddingDim ||
      obs_j.appearance->size() != kEmbeddingDim) {
    throw ValidationError("link_likelihood: appearance must have " +
                          std::to_string(kEmbeddingDim) + " entries");
  }
  if (obs_j.tick <= obs_i.tick) {
    throw ValidationError("link_likelihood: observations must be strictly ordered in time");
  }
  const double dist2 = (obs_j.position - obs_i.position).squared_norm();
  const double position =
      std::exp(-dist2 / (2.0 * params.position_sigma * params.position_sigma));
  const double cos = cosine_similarity(*obs_i.appearance, *obs_j.appearance);
  const double appearance = std::pow((1.0 + cos) / 2.0, params.appearance_gamma);
  const double label = obs_i.label == obs_j.label ? 1.0 : params.label_mismatch;
  const double gap =
      std::pow(params.gap_decay, static_cast<double>(obs_j.tick - obs_i.tick - 1));
  return std::clamp(position * appearance * label * gap, DBL_MIN, 1.0);
}

Vec2 doa_to_cartesian(double doa, const Pose& device_pose, double radius) {
  const double angle = device_pose.heading + doa;
  return {device_pose.position.x + radius * std::cos(angle),
          device_pose.position.y + radius * std::sin(angle)};
}

namespace {

// Rectangular assignment (rows <= cols), potentials-based Hungarian method.
// Returns the column assigned to each row.
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  if (n == 0) return {};
  const std::size_t m = cost.front().size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based indices; column 0 is a virtual start.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (match[j] != 0) row_to_col[match[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

std::vector<AudioVisualPair> pair_audio_visual(std::span<const AcousticEvent> events,
                                               std::span<const Trajectory> person_trajectories,
                                               const SemanticMap& map, double gate) {
  std::vector<AudioVisualPair> out(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) out[i].event_index = i;
  if (events.empty()) return out;

  std::vector<const Trajectory*> tracks;
  std::vector<double> bearings;
  for (const auto& t : person_trajectories) {
    if (t.empty()) continue;
    tracks.push_back(&t);
    bearings.push_back(bearing_from_device(t.back().position, map.device_pose));
  }

  const std::size_t n = events.size();
  const std::size_t m = tracks.size();
  // Pairs beyond the gate are priced above the unpaired option so they are
  // never selected.
  const double forbidden = gate + 10.0;
  std::vector<std::vector<double>> cost(n, std::vector<double>(m + n, 0.0));
  std::vector<std::vector<double>> distance(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      distance[i][j] = angular_distance(events[i].doa, bearings[j]);
      cost[i][j] = distance[i][j] <= gate ? distance[i][j] : forbidden;
    }
    for (std::size_t k = 0; k < n; ++k) cost[i][m + k] = gate;
  }
  const auto assignment = hungarian(cost);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = assignment[i];
    if (j < m && distance[i][j] <= gate) {
      out[i].trajectory = tracks[j]->id;
      out[i].angular_distance = distance[i][j];
    }
  }
  return out;
}

RecognitionResult classify_embedding(std::span<const double> embedding, const Gallery& gallery) {
  if (embedding.size() != kEmbeddingDim) {
    throw ValidationError("classify_embedding: embedding must have " +
                          std::to_string(kEmbeddingDim) + " entries");
  }
  RecognitionResult result;
  if (gallery.entries.empty()) return result;

  const UserId* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  double second_d = std::numeric_limits<double>::infinity();
  for (const auto& [user, enrolled] : gallery.entries) {
    const double d = 1.0 - cosine_similarity(embedding, enrolled);
    if (d < best_d) {
      second_d = best_d;
      best_d = d;
      best = &user;
    } else if (d < second_d) {
      second_d = d;
    }
  }
  result.distance = best_d;
  result.score = 1.0 - best_d;
  const bool within = best_d <= gallery.accept_threshold;
  const bool separated = second_d - best_d >= gallery.background_margin;
  if (within && separated) result.user = *best;
  return result;
}

void accumulate_identity(IdentityTrack& track, const IdentityDecision& decision,
                         const IdentityParams& params) {
  if (decision.tick <= track.last_tick) {
    throw ValidationError("accumulate_identity: decision at tick " +
                          std::to_string(decision.tick) + " is not after tick " +
                          std::to_string(track.last_tick));
  }
  track.last_tick = decision.tick;
  for (auto& [user, score] : track.scores) score *= 1.0 - params.ema_alpha;
  if (decision.user) track.scores[*decision.user] += params.ema_alpha * decision.score;

  const double incumbent =
      track.user ? track.scores[*track.user] : 0.0;
  const UserId* contender = nullptr;
  double contender_score = -1.0;
  for (const auto& [user, score] : track.scores) {
    if (track.user && user == *track.user) continue;
    if (score > contender_score) {
      contender_score = score;
      contender = &user;
    }
  }

  if (contender && contender_score > incumbent + params.hysteresis) {
    if (track.challenger && *track.challenger == *contender) {
      ++track.streak;
    } else {
      track.challenger = *contender;
      track.streak = 1;
    }
    if (track.streak >= params.confirm_ticks) {
      track.user = *contender;
      ++track.changes;
      track.challenger.reset();
      track.streak = 0;
    }
  } else {
    track.challenger.reset();
    track.streak = 0;
  }
}

IdentityDecision fuse_decisions(const std::optional<IdentityDecision>& face,
                                const std::optional<IdentityDecision>& voice) {
  if (!face && !voice) throw ValidationError("fuse_decisions: no decision to fuse");
  if (!voice) return *face;
  if (!face) return *voice;
  if (face->tick != voice->tick) throw ValidationError("fuse_decisions: tick mismatch");
  // Unknown carries no evidence; prefer a positive decision from either channel.
  if (!face->user && voice->user) return *voice;
  if (face->user && !voice->user) return *face;
  return voice->score > face->score ? *voice : *face;
}

}  // namespace spatial
