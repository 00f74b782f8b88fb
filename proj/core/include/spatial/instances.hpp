#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "spatial/association.hpp"
#include "spatial/world_model.hpp"

namespace spatial {

// A few people walking through a small area plus clutter, with between 0
// and `max_obs` observations sorted by tick.
std::vector<Observation> random_instance(std::uint64_t seed, std::size_t max_obs);

// Trajectories as sets of observation ids, independent of trajectory ids.
std::set<std::vector<ObservationId>> partition_of(std::span<const Trajectory> trajectories);

struct OracleCheck {
  std::size_t observations = 0;
  double solver_energy = 0.0;
  double oracle_energy = 0.0;
  bool energy_match = false;
  bool partition_match = false;
};

// Runs the flow solver and exhaustive search on one instance.
OracleCheck check_against_oracle(std::span<const Observation> observations,
                                 const EnergyParams& params = {}, double tolerance = 1e-9);

}  // namespace spatial
