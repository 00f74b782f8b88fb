#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "spatial/fusion.hpp"
#include "spatial/types.hpp"
#include "spatial/world_model.hpp"

namespace spatial {

struct EnergyParams {
  double entry_cost = 4.0;  // -log psi_en
  double exit_cost = 4.0;   // -log psi_ex
  Tick max_gap = 5;         // longest temporal link, in ticks
  double score_epsilon = 1e-3;
  double link_floor = 1e-6;  // links with lower likelihood are not created
  LinkParams link;
};

struct EnergyLink {
  std::size_t from = 0;  // index into EnergyModel::observations
  std::size_t to = 0;
  double cost = 0.0;  // -log psi_li
};

// Tail of a committed trajectory that window observations may extend. The
// trajectory's exit cost has already been paid, so extending it refunds it.
struct EnergyAnchor {
  TrajectoryId trajectory = 0;
  Observation tail;
  std::vector<std::pair<std::size_t, double>> links;  // (observation index, cost)
};

// Negative-log posterior of a trajectory set, split into per-observation,
// entry/exit and link terms.
struct EnergyModel {
  std::vector<Observation> observations;  // nondecreasing tick order
  std::vector<double> beta;               // true-detection probability, in (0,1)
  double entry_cost = 0.0;
  double exit_cost = 0.0;
  std::vector<EnergyLink> links;  // forward in time only, sorted by (from, to)
  std::vector<EnergyAnchor> anchors;

  [[nodiscard]] std::size_t size() const { return observations.size(); }
};

// log((1-beta)/beta): the change in energy from selecting an observation.
inline double inclusion_cost(double beta) { return std::log((1.0 - beta) / beta); }
// -log(1-beta): the energy of leaving an observation unexplained.
inline double false_alarm_cost(double beta) { return -std::log1p(-beta); }

struct SolverStats {
  int augmenting_paths = 0;
  std::size_t window_size = 0;
  long long work = 0;  // relaxations performed; stands in for runtime
  bool solved = false;
};

struct AssociationResult {
  std::vector<Trajectory> trajectories;
  double total_energy = 0.0;
  SolverStats solver_stats;
};

// Throws ValidationError if observations are not time-sorted.
EnergyModel build_energy(std::span<const Observation> observations,
                         const EnergyParams& params = {});

// Throws ValidationError on inconsistent sizes, beta outside (0,1), links
// that are not forward in time or non-finite costs.
void validate(const EnergyModel& energy);

// Minimum-energy disjoint trajectory cover by min-cost flow.
AssociationResult solve(const EnergyModel& energy);

inline constexpr std::size_t kBruteForceLimit = 10;

// Exhaustive MAP reference. Refuses more than kBruteForceLimit observations.
// Ties are broken toward fewer trajectories, then lexicographically smallest
// sorted observation-id sets.
AssociationResult brute_force_map(const EnergyModel& energy);
AssociationResult brute_force_map(std::span<const Observation> observations,
                                  const EnergyParams& params = {});

// Plain-text flow network: one "from\tto\tcost" line per arc.
void write_flow_network(const EnergyModel& energy, std::ostream& out);

struct OnlineParams {
  Tick window = 50;
  Tick resolve_every = 5;
};

// Sliding-window association state. Observations that leave the window are
// frozen into committed trajectory prefixes which later solves may extend but
// never rewrite.
class OnlineAssociator {
 public:
  explicit OnlineAssociator(EnergyParams energy = {}, OnlineParams online = {});

  // Adds one frame (all observations share its tick) and re-solves when due.
  // Throws ValidationError on time regression.
  const AssociationResult& update(Tick tick, std::span<const Observation> frame);

  // Forces a solve over the current window.
  const AssociationResult& flush();

  [[nodiscard]] const AssociationResult& result() const { return result_; }
  [[nodiscard]] const std::vector<Trajectory>& committed() const { return committed_; }
  [[nodiscard]] std::size_t window_size() const { return pending_.size(); }
  [[nodiscard]] const EnergyParams& energy_params() const { return energy_; }

 private:
  void freeze_before(Tick cutoff);
  void resolve();

  EnergyParams energy_;
  OnlineParams online_;
  std::vector<Trajectory> committed_;
  std::vector<Observation> pending_;
  std::size_t unsolved_from_ = 0;  // pending_ index of the first unsolved observation
  std::unordered_map<ObservationId, TrajectoryId> assignment_;  // from the last solve
  std::optional<Tick> last_tick_;
  std::optional<Tick> last_solve_tick_;
  double frozen_energy_ = 0.0;
  TrajectoryId next_id_ = 1;
  AssociationResult result_;
};

// Functional form of OnlineAssociator::update.
const AssociationResult& online_update(OnlineAssociator& state, Tick tick,
                                       std::span<const Observation> frame);

}  // namespace spatial
