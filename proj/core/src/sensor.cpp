#include "spatial/sensor.hpp"

#include <cmath>
#include <random>

#include "spatial/random.hpp"

namespace spatial {
namespace {

constexpr std::uint64_t kPersonStream = 1;
constexpr std::uint64_t kClutterStream = 2;
constexpr std::uint64_t kAcousticStream = 3;
constexpr double kRoomHalfWidth = 4.0;  // meters around the device

EmbeddingRef jitter(const Embedding& base, double sigma, std::mt19937_64& rng) {
  if (sigma == 0.0) return make_embedding(base);
  std::normal_distribution<double> normal(0.0, sigma);
  Embedding e = base;
  for (double& x : e) x += normal(rng);
  return make_embedding(std::move(e));
}

}  // namespace

int true_occupancy(const Scenario& scenario, Tick tick) {
  int n = 0;
  for (const auto& p : scenario.persons) n += p.present(tick) ? 1 : 0;
  return n;
}

SensorFrame sensor_step(const Scenario& scenario, Tick tick) {
  SensorFrame frame;
  const NoiseConfig& noise = scenario.noise;
  const auto t = static_cast<std::uint64_t>(tick);

  for (std::size_t k = 0; k < scenario.persons.size(); ++k) {
    const ScriptedPerson& p = scenario.persons[k];
    if (!p.present(tick)) continue;
    auto rng = counter_rng({scenario.seed, kPersonStream, t, k});
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // The detection draw comes first so the other draws do not depend on p_det.
    const double u = unit(rng);
    if (!(u < noise.detection_prob)) continue;
    Observation o;
    o.id = tick * kIdStride + static_cast<ObservationId>(k);
    o.tick = tick;
    o.position = p.position(tick);
    if (noise.position_sigma > 0.0) {
      std::normal_distribution<double> normal(0.0, noise.position_sigma);
      o.position.x += normal(rng);
      o.position.y += normal(rng);
    }
    o.appearance = jitter(p.embedding, noise.embedding_sigma, rng);
    o.detection_score = noise.detection_score;
    o.label = ObjectClass::person;
    frame.observations.push_back(std::move(o));
  }

  if (noise.false_positive_rate > 0.0) {
    auto rng = counter_rng({scenario.seed, kClutterStream, t});
    std::poisson_distribution<int> count(noise.false_positive_rate);
    const int n = count(rng);
    std::uniform_real_distribution<double> coord(-kRoomHalfWidth, kRoomHalfWidth);
    std::uniform_real_distribution<double> score(0.2, 0.6);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int j = 0; j < n && kFalsePositiveSlot + j < kIdStride; ++j) {
      Observation o;
      o.id = tick * kIdStride + kFalsePositiveSlot + j;
      o.tick = tick;
      o.position = scenario.device_pose.position + Vec2{coord(rng), coord(rng)};
      Embedding e(kEmbeddingDim);
      double norm = 0.0;
      for (double& x : e) {
        x = normal(rng);
        norm += x * x;
      }
      for (double& x : e) x /= std::sqrt(norm);
      o.appearance = make_embedding(std::move(e));
      o.detection_score = score(rng);
      o.label = ObjectClass::person;
      frame.observations.push_back(std::move(o));
    }
  }

  for (std::size_t i = 0; i < scenario.acoustic_events.size(); ++i) {
    const ScriptedAcoustic& a = scenario.acoustic_events[i];
    if (a.tick != tick) continue;
    auto rng = counter_rng({scenario.seed, kAcousticStream, t, i});
    const ScriptedPerson* speaker = a.speaker.empty() ? nullptr : scenario.person(a.speaker);
    if (!a.speaker.empty() && speaker == nullptr) {
      throw ValidationError("sensor_step: acoustic event " + std::to_string(i) +
                            " names unknown speaker '" + a.speaker + "'");
    }
    if (!a.bearing && speaker == nullptr) {
      throw ValidationError("sensor_step: acoustic event " + std::to_string(i) +
                            " has neither a bearing nor a speaker");
    }
    AcousticEvent e;
    e.label = a.label;
    e.posterior = a.posterior;
    e.tick = tick;
    double bearing = a.bearing ? *a.bearing
                               : bearing_from_device(speaker->position(tick), scenario.device_pose);
    if (noise.bearing_sigma > 0.0) {
      std::normal_distribution<double> normal(0.0, noise.bearing_sigma);
      bearing += normal(rng);
    }
    e.doa = wrap_two_pi(bearing);
    if (speaker && a.label == AudioLabel::speech) {
      e.speaker_embedding = jitter(speaker->embedding, noise.embedding_sigma, rng);
    }
    frame.acoustic.push_back(std::move(e));
    frame.acoustic_sources.push_back(a.speaker);
  }
  return frame;
}

}  // namespace spatial
