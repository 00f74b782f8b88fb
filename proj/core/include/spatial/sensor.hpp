#pragma once

#include <cstdint>
#include <vector>

#include "spatial/fusion.hpp"
#include "spatial/scenario.hpp"
#include "spatial/world_model.hpp"

namespace spatial {

// Person observations use entity slots below this; false positives above.
inline constexpr ObservationId kFalsePositiveSlot = 900;
inline constexpr ObservationId kIdStride = 1000;

struct SensorFrame {
  std::vector<Observation> observations;  // ids: tick * kIdStride + slot
  std::vector<AcousticEvent> acoustic;
  std::vector<std::string> acoustic_sources;  // scripted speaker per event, may be empty
};

// Synthesizes one tick of sensing. Every draw comes from a generator keyed
// by (seed, tick, entity), so the frame is a pure function of its arguments.
SensorFrame sensor_step(const Scenario& scenario, Tick tick);

// Number of scripted persons in the room at `tick`.
int true_occupancy(const Scenario& scenario, Tick tick);

}  // namespace spatial
