#pragma once

// Independent reference computations shared by the unit and acceptance
// suites. Nothing here calls into the solver or scheduler internals.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "spatial/association.hpp"
#include "spatial/fusion.hpp"
#include "spatial/world_model.hpp"

namespace spatial::testing {

inline Embedding random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Embedding e(kEmbeddingDim);
  double norm = 0.0;
  for (double& v : e) {
    v = n(rng);
    norm += v * v;
  }
  norm = std::sqrt(norm);
  for (double& v : e) v /= norm;
  return e;
}

inline Embedding perturb(const Embedding& base, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, sigma);
  Embedding e = base;
  for (double& v : e) v += n(rng);
  return e;
}

inline Observation make_observation(ObservationId id, Tick tick, Vec2 position,
                                    const Embedding& appearance, double score = 0.9,
                                    ObjectClass label = ObjectClass::person) {
  Observation o;
  o.id = id;
  o.tick = tick;
  o.position = position;
  o.appearance = make_embedding(appearance);
  o.detection_score = score;
  o.label = label;
  return o;
}

// Negative log posterior of a trajectory set evaluated term by term from the
// observations: every unexplained observation pays -log(1-beta), every
// explained one -log(beta), each trajectory pays entry and exit, and each
// consecutive pair pays -log of the link likelihood.
inline double reference_energy(std::span<const Observation> all,
                               std::span<const Trajectory> trajectories,
                               const EnergyParams& p = {}) {
  auto beta = [&](const Observation& o) {
    return std::clamp(o.detection_score, p.score_epsilon, 1.0 - p.score_epsilon);
  };
  std::unordered_set<ObservationId> used;
  double e = 0.0;
  for (const auto& t : trajectories) {
    if (t.observations.empty()) continue;
    e += p.entry_cost + p.exit_cost;
    for (std::size_t k = 0; k < t.observations.size(); ++k) {
      const Observation& o = t.observations[k];
      used.insert(o.id);
      e += -std::log(beta(o));
      if (k > 0) e += -std::log(link_likelihood(t.observations[k - 1], o, p.link));
    }
  }
  for (const auto& o : all) {
    if (!used.contains(o.id)) e += -std::log(1.0 - beta(o));
  }
  return e;
}

// Exhaustive pairing reference: tries every injective partial assignment of
// events to tracks. Returns the optimal cost and whether the optimum is unique
// by more than `margin`; `best` receives the optimal assignment (-1 unpaired).
struct PairingOracle {
  double cost = std::numeric_limits<double>::infinity();
  bool unique = true;
  std::vector<int> best;
};

inline PairingOracle enumerate_pairings(const std::vector<std::vector<double>>& distance,
                                        std::size_t tracks, double gate,
                                        double margin = 1e-9) {
  const std::size_t n = distance.size();
  PairingOracle out;
  std::vector<int> current(n, -1);
  std::vector<bool> taken(tracks, false);
  double second = std::numeric_limits<double>::infinity();
  auto recurse = [&](auto&& self, std::size_t i, double acc) -> void {
    if (i == n) {
      if (acc < out.cost - margin) {
        second = out.cost;
        out.cost = acc;
        out.best = current;
      } else if (acc < second) {
        second = acc;
      }
      return;
    }
    current[i] = -1;
    self(self, i + 1, acc + gate);
    for (std::size_t j = 0; j < tracks; ++j) {
      if (taken[j] || distance[i][j] > gate) continue;
      taken[j] = true;
      current[i] = static_cast<int>(j);
      self(self, i + 1, acc + distance[i][j]);
      taken[j] = false;
      current[i] = -1;
    }
  };
  recurse(recurse, 0, 0.0);
  out.unique = second - out.cost > margin;
  return out;
}

}  // namespace spatial::testing
