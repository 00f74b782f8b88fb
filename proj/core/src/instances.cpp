#include "spatial/instances.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "spatial/random.hpp"

namespace spatial {

std::vector<Observation> random_instance(std::uint64_t seed, std::size_t max_obs) {
  auto rng = counter_rng({0x696e7374ULL, seed});
  std::uniform_int_distribution<std::size_t> size(0, max_obs);
  const std::size_t n = size(rng);
  std::uniform_int_distribution<int> people_count(1, 3);
  const int people = people_count(rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  struct Walker {
    Vec2 start;
    Vec2 velocity;
    Embedding look;
  };
  std::vector<Walker> walkers;
  for (int p = 0; p < people; ++p) {
    Walker w;
    w.start = {unit(rng) * 4.0 - 2.0, unit(rng) * 4.0 - 2.0};
    w.velocity = {normal(rng) * 0.1, normal(rng) * 0.1};
    w.look.resize(kEmbeddingDim);
    for (double& x : w.look) x = normal(rng);
    walkers.push_back(std::move(w));
  }

  // Walkers are seen frame by frame so that most instances contain linkable
  // runs; clutter is sprinkled in between. Frames stop once n is reached.
  std::vector<Observation> out;
  auto emit = [&](Tick t, const Walker* w) {
    Observation o;
    o.tick = t;
    Embedding look(kEmbeddingDim);
    if (w == nullptr) {
      o.position = {unit(rng) * 4.0 - 2.0, unit(rng) * 4.0 - 2.0};
      for (double& x : look) x = normal(rng);
      o.detection_score = 0.05 + 0.6 * unit(rng);
    } else {
      o.position = w->start + w->velocity * static_cast<double>(t) +
                   Vec2{normal(rng) * 0.15, normal(rng) * 0.15};
      for (std::size_t k = 0; k < kEmbeddingDim; ++k) look[k] = w->look[k] + 0.15 * normal(rng);
      const double u = unit(rng);
      o.detection_score = 0.999 - 0.15 * u * u;
    }
    o.appearance = make_embedding(std::move(look));
    o.label = unit(rng) < 0.9 ? ObjectClass::person : ObjectClass::other;
    out.push_back(std::move(o));
  };
  for (Tick t = 0; out.size() < n; ++t) {
    for (const Walker& w : walkers) {
      if (out.size() < n && unit(rng) < 0.85) emit(t, &w);
    }
    if (out.size() < n && unit(rng) < 0.3) emit(t, nullptr);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Observation& a, const Observation& b) { return a.tick < b.tick; });
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].id = static_cast<ObservationId>(i + 1);
  }
  return out;
}

std::set<std::vector<ObservationId>> partition_of(std::span<const Trajectory> trajectories) {
  std::set<std::vector<ObservationId>> out;
  for (const auto& t : trajectories) {
    std::vector<ObservationId> ids;
    for (const auto& o : t.observations) ids.push_back(o.id);
    std::sort(ids.begin(), ids.end());
    out.insert(std::move(ids));
  }
  return out;
}

OracleCheck check_against_oracle(std::span<const Observation> observations,
                                 const EnergyParams& params, double tolerance) {
  const EnergyModel model = build_energy(observations, params);
  const AssociationResult flow = solve(model);
  const AssociationResult exhaustive = brute_force_map(model);
  OracleCheck c;
  c.observations = observations.size();
  c.solver_energy = flow.total_energy;
  c.oracle_energy = exhaustive.total_energy;
  c.energy_match = std::abs(flow.total_energy - exhaustive.total_energy) <= tolerance;
  c.partition_match = partition_of(flow.trajectories) == partition_of(exhaustive.trajectories);
  return c;
}

}  // namespace spatial
