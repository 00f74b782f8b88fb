#include "spatial/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "spatial/min_cost_flow.hpp"

namespace spatial {
namespace {

double beta_of(double score, double epsilon) {
  return std::clamp(score, epsilon, 1.0 - epsilon);
}

double link_cost_or_nan(const Observation& a, const Observation& b, const EnergyParams& params) {
  const double psi = link_likelihood(a, b, params.link);
  if (psi < params.link_floor) return std::numeric_limits<double>::quiet_NaN();
  return -std::log(psi);
}

// Flow network for an energy model. Node 0 is the source, node 1 the sink;
// observation i owns nodes u_i = 2+2i and v_i = 3+2i; anchor a owns 2+2n+a.
struct Network {
  MinCostFlow flow;
  std::vector<int> entry_arc, split_arc, exit_arc, link_arc, anchor_arc;
  std::vector<std::vector<int>> anchor_link_arc;

  explicit Network(const EnergyModel& e)
      : flow(static_cast<int>(2 + 2 * e.size() + e.anchors.size())) {
    const std::size_t n = e.size();
    for (std::size_t i = 0; i < n; ++i) {
      const int u = u_node(i);
      const int v = v_node(i);
      entry_arc.push_back(flow.add_arc(kSource, u, 1, e.entry_cost));
      split_arc.push_back(flow.add_arc(u, v, 1, inclusion_cost(e.beta[i])));
      exit_arc.push_back(flow.add_arc(v, kSink, 1, e.exit_cost));
    }
    for (const auto& l : e.links) {
      link_arc.push_back(flow.add_arc(v_node(l.from), u_node(l.to), 1, l.cost));
    }
    for (std::size_t a = 0; a < e.anchors.size(); ++a) {
      const int node = anchor_node(n, a);
      anchor_arc.push_back(flow.add_arc(kSource, node, 1, -e.exit_cost));
      auto& arcs = anchor_link_arc.emplace_back();
      for (const auto& [j, cost] : e.anchors[a].links) {
        arcs.push_back(flow.add_arc(node, u_node(j), 1, cost));
      }
    }
  }

  static constexpr int kSource = 0;
  static constexpr int kSink = 1;
  static int u_node(std::size_t i) { return static_cast<int>(2 + 2 * i); }
  static int v_node(std::size_t i) { return static_cast<int>(3 + 2 * i); }
  static int anchor_node(std::size_t n, std::size_t a) { return static_cast<int>(2 + 2 * n + a); }
};

struct Path {
  std::optional<std::size_t> anchor;
  std::vector<std::size_t> members;  // observation indices, time order
};

struct PathSolution {
  std::vector<Path> paths;  // ordered by first member index
  double energy = 0.0;
  SolverStats stats;
};

PathSolution solve_paths(const EnergyModel& energy) {
  validate(energy);
  PathSolution out;
  const std::size_t n = energy.size();
  out.stats.window_size = n;
  out.stats.solved = true;
  double baseline = 0.0;
  for (double b : energy.beta) baseline += false_alarm_cost(b);
  if (n == 0) {
    out.energy = baseline;
    return out;
  }

  Network net(energy);
  const double cost = net.flow.augment_while_improving(Network::kSource, Network::kSink);
  out.energy = baseline + cost;
  out.stats.augmenting_paths = net.flow.stats().augmentations;
  out.stats.work = net.flow.stats().relaxations;

  auto has_flow = [&](int arc) { return net.flow.arc(arc).flow > 0; };
  std::vector<std::optional<std::size_t>> next(n);
  std::vector<bool> has_pred(n, false);
  for (std::size_t k = 0; k < energy.links.size(); ++k) {
    if (has_flow(net.link_arc[k])) {
      next[energy.links[k].from] = energy.links[k].to;
      has_pred[energy.links[k].to] = true;
    }
  }
  std::vector<std::optional<std::size_t>> anchor_of(n);
  for (std::size_t a = 0; a < energy.anchors.size(); ++a) {
    for (std::size_t k = 0; k < energy.anchors[a].links.size(); ++k) {
      if (has_flow(net.anchor_link_arc[a][k])) {
        const std::size_t j = energy.anchors[a].links[k].first;
        anchor_of[j] = a;
        has_pred[j] = true;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!has_flow(net.split_arc[i]) || has_pred[i]) continue;
    Path p;
    p.anchor = anchor_of[i];
    for (std::optional<std::size_t> cur = i; cur; cur = next[*cur]) p.members.push_back(*cur);
    out.paths.push_back(std::move(p));
  }
  // Anchored paths start at an observation with an anchor predecessor.
  for (std::size_t i = 0; i < n; ++i) {
    if (!anchor_of[i]) continue;
    Path p;
    p.anchor = anchor_of[i];
    for (std::optional<std::size_t> cur = i; cur; cur = next[*cur]) p.members.push_back(*cur);
    out.paths.push_back(std::move(p));
  }
  std::sort(out.paths.begin(), out.paths.end(),
            [](const Path& a, const Path& b) { return a.members.front() < b.members.front(); });
  return out;
}

}  // namespace

EnergyModel build_energy(std::span<const Observation> observations, const EnergyParams& params) {
  EnergyModel e;
  e.entry_cost = params.entry_cost;
  e.exit_cost = params.exit_cost;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    validate(observations[i]);
    if (i > 0 && observations[i].tick < observations[i - 1].tick) {
      throw ValidationError("build_energy: observations not sorted by tick at id " +
                            std::to_string(observations[i].id));
    }
  }
  e.observations.assign(observations.begin(), observations.end());
  e.beta.reserve(observations.size());
  for (const auto& o : observations) e.beta.push_back(beta_of(o.detection_score, params.score_epsilon));
  for (std::size_t i = 0; i < observations.size(); ++i) {
    for (std::size_t j = i + 1; j < observations.size(); ++j) {
      const Tick dt = observations[j].tick - observations[i].tick;
      if (dt > params.max_gap) break;
      if (dt <= 0) continue;
      const double cost = link_cost_or_nan(observations[i], observations[j], params);
      if (!std::isnan(cost)) e.links.push_back({i, j, cost});
    }
  }
  return e;
}

void validate(const EnergyModel& energy) {
  const std::size_t n = energy.size();
  if (energy.beta.size() != n) throw ValidationError("energy model: beta size mismatch");
  if (!std::isfinite(energy.entry_cost) || !std::isfinite(energy.exit_cost) ||
      energy.entry_cost < 0.0 || energy.exit_cost < 0.0) {
    throw ValidationError("energy model: entry and exit costs must be finite and non-negative");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(energy.beta[i] > 0.0 && energy.beta[i] < 1.0)) {
      throw ValidationError("energy model: beta outside (0,1) at index " + std::to_string(i));
    }
    if (i > 0 && energy.observations[i].tick < energy.observations[i - 1].tick) {
      throw ValidationError("energy model: observations not time-sorted");
    }
  }
  std::pair<std::size_t, std::size_t> prev{0, 0};
  for (std::size_t k = 0; k < energy.links.size(); ++k) {
    const auto& l = energy.links[k];
    if (l.from >= n || l.to >= n) throw ValidationError("energy model: link index out of range");
    if (energy.observations[l.to].tick <= energy.observations[l.from].tick) {
      throw ValidationError("energy model: link not forward in time");
    }
    if (!std::isfinite(l.cost)) throw ValidationError("energy model: non-finite link cost");
    const std::pair<std::size_t, std::size_t> key{l.from, l.to};
    if (k > 0 && !(prev < key)) throw ValidationError("energy model: links not sorted/unique");
    prev = key;
  }
  for (const auto& a : energy.anchors) {
    for (const auto& [j, cost] : a.links) {
      if (j >= n) throw ValidationError("energy model: anchor link out of range");
      if (energy.observations[j].tick <= a.tail.tick) {
        throw ValidationError("energy model: anchor link not forward in time");
      }
      if (!std::isfinite(cost)) throw ValidationError("energy model: non-finite anchor cost");
    }
  }
}

AssociationResult solve(const EnergyModel& energy) {
  PathSolution sol = solve_paths(energy);
  AssociationResult result;
  result.total_energy = sol.energy;
  result.solver_stats = sol.stats;
  TrajectoryId id = 1;
  for (const auto& p : sol.paths) {
    Trajectory t;
    t.id = p.anchor ? energy.anchors[*p.anchor].trajectory : id++;
    for (std::size_t idx : p.members) t.observations.push_back(energy.observations[idx]);
    result.trajectories.push_back(std::move(t));
  }
  return result;
}

namespace {

using Canonical = std::vector<std::vector<ObservationId>>;

class Enumerator {
 public:
  explicit Enumerator(const EnergyModel& e)
      : e_(e),
        n_(e.size()),
        link_(n_ * n_, std::numeric_limits<double>::quiet_NaN()) {
    for (const auto& l : e.links) link_[l.from * n_ + l.to] = l.cost;
  }

  void run() { visit(0, 0.0); }

  const std::vector<std::vector<std::size_t>>& best() const { return best_; }
  double best_energy() const { return best_energy_; }

 private:
  void visit(std::size_t k, double energy) {
    if (k == n_) {
      consider(energy);
      return;
    }
    const double beta = e_.beta[k];
    visit(k + 1, energy + false_alarm_cost(beta));

    const double selected = -std::log(beta);
    open_.push_back({k});
    visit(k + 1, energy + selected + e_.entry_cost + e_.exit_cost);
    open_.pop_back();

    for (std::size_t r = 0; r < open_.size(); ++r) {
      const std::size_t last = open_[r].back();
      const double cost = link_[last * n_ + k];
      if (std::isnan(cost)) continue;
      open_[r].push_back(k);
      visit(k + 1, energy + selected + cost);
      open_[r].pop_back();
    }
  }

  Canonical canonical(const std::vector<std::vector<std::size_t>>& trajs) const {
    Canonical c;
    for (const auto& t : trajs) {
      auto& ids = c.emplace_back();
      for (std::size_t i : t) ids.push_back(e_.observations[i].id);
      std::sort(ids.begin(), ids.end());
    }
    std::sort(c.begin(), c.end());
    return c;
  }

  void consider(double energy) {
    constexpr double kTie = 1e-12;
    bool better = false;
    if (!have_best_ || energy < best_energy_ - kTie) {
      better = true;
    } else if (std::abs(energy - best_energy_) <= kTie) {
      if (open_.size() < best_.size()) {
        better = true;
      } else if (open_.size() == best_.size()) {
        better = canonical(open_) < canonical(best_);
      }
    }
    if (better) {
      have_best_ = true;
      best_energy_ = energy;
      best_ = open_;
    }
  }

  const EnergyModel& e_;
  std::size_t n_;
  std::vector<double> link_;
  std::vector<std::vector<std::size_t>> open_;
  std::vector<std::vector<std::size_t>> best_;
  double best_energy_ = 0.0;
  bool have_best_ = false;
};

}  // namespace

AssociationResult brute_force_map(const EnergyModel& energy) {
  validate(energy);
  if (energy.size() > kBruteForceLimit) {
    throw ValidationError("brute_force_map: " + std::to_string(energy.size()) +
                          " observations exceeds the enumeration bound of " +
                          std::to_string(kBruteForceLimit));
  }
  if (!energy.anchors.empty()) throw ValidationError("brute_force_map: anchors unsupported");
  Enumerator en(energy);
  en.run();
  AssociationResult result;
  result.total_energy = en.best_energy();
  auto trajs = en.best();
  std::sort(trajs.begin(), trajs.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  TrajectoryId id = 1;
  for (const auto& members : trajs) {
    Trajectory t;
    t.id = id++;
    for (std::size_t i : members) t.observations.push_back(energy.observations[i]);
    result.trajectories.push_back(std::move(t));
  }
  result.solver_stats.window_size = energy.size();
  result.solver_stats.solved = true;
  return result;
}

AssociationResult brute_force_map(std::span<const Observation> observations,
                                  const EnergyParams& params) {
  if (observations.size() > kBruteForceLimit) {
    throw ValidationError("brute_force_map: " + std::to_string(observations.size()) +
                          " observations exceeds the enumeration bound of " +
                          std::to_string(kBruteForceLimit));
  }
  return brute_force_map(build_energy(observations, params));
}

void write_flow_network(const EnergyModel& energy, std::ostream& out) {
  validate(energy);
  Network net(energy);
  const std::size_t n = energy.size();
  auto name = [&](int node) -> std::string {
    if (node == Network::kSource) return "source";
    if (node == Network::kSink) return "sink";
    const auto idx = static_cast<std::size_t>(node - 2);
    if (idx < 2 * n) {
      return std::string(idx % 2 == 0 ? "u" : "v") +
             std::to_string(energy.observations[idx / 2].id);
    }
    return "a" + std::to_string(energy.anchors[idx - 2 * n].trajectory);
  };
  for (std::size_t k = 0; k < net.flow.arc_count(); ++k) {
    const auto& a = net.flow.arc(static_cast<int>(2 * k));
    out << name(a.from) << '\t' << name(a.to) << '\t' << a.cost << '\n';
  }
}

OnlineAssociator::OnlineAssociator(EnergyParams energy, OnlineParams online)
    : energy_(energy), online_(online) {
  if (online_.window <= 0 || online_.resolve_every <= 0) {
    throw ValidationError("online association: window and cadence must be positive");
  }
}

const AssociationResult& OnlineAssociator::update(Tick tick, std::span<const Observation> frame) {
  if (last_tick_ && tick < *last_tick_) {
    throw ValidationError("online association: frame tick " + std::to_string(tick) +
                          " precedes " + std::to_string(*last_tick_));
  }
  for (const auto& o : frame) {
    validate(o);
    if (o.tick != tick) throw ValidationError("online association: observation tick mismatch");
  }
  last_tick_ = tick;
  pending_.insert(pending_.end(), frame.begin(), frame.end());
  result_.solver_stats.solved = false;

  const Tick cutoff = tick - online_.window + 1;
  // Observations the last solve never saw must be placed before they freeze.
  bool unseen_leaving = false;
  for (std::size_t i = unsolved_from_; i < pending_.size() && pending_[i].tick < cutoff; ++i) {
    unseen_leaving = true;
  }
  if (unseen_leaving) resolve();
  freeze_before(cutoff);
  if (!last_solve_tick_ || tick - *last_solve_tick_ >= online_.resolve_every) resolve();
  return result_;
}

const AssociationResult& OnlineAssociator::flush() {
  resolve();
  return result_;
}

void OnlineAssociator::freeze_before(Tick cutoff) {
  std::size_t frozen = 0;
  while (frozen < pending_.size() && pending_[frozen].tick < cutoff) {
    const Observation& obs = pending_[frozen];
    const double beta = beta_of(obs.detection_score, energy_.score_epsilon);
    auto it = assignment_.find(obs.id);
    if (it == assignment_.end()) {
      frozen_energy_ += false_alarm_cost(beta);
    } else {
      const TrajectoryId id = it->second;
      auto pos = std::find_if(committed_.begin(), committed_.end(),
                              [id](const Trajectory& t) { return t.id == id; });
      if (pos == committed_.end()) {
        Trajectory t;
        t.id = id;
        t.observations.push_back(obs);
        committed_.push_back(std::move(t));
        frozen_energy_ += energy_.entry_cost + energy_.exit_cost - std::log(beta);
      } else {
        const double link = link_cost_or_nan(pos->back(), obs, energy_);
        if (std::isnan(link)) {
          throw std::logic_error("online association: frozen link below floor");
        }
        frozen_energy_ += link - std::log(beta);
        pos->observations.push_back(obs);
      }
      assignment_.erase(it);
    }
    ++frozen;
  }
  pending_.erase(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(frozen));
  unsolved_from_ = frozen > unsolved_from_ ? 0 : unsolved_from_ - frozen;
}

void OnlineAssociator::resolve() {
  EnergyModel model = build_energy(pending_, energy_);
  if (!pending_.empty()) {
    const Tick earliest = pending_.front().tick;
    for (const auto& c : committed_) {
      const Observation& tail = c.back();
      if (tail.tick + energy_.max_gap < earliest) continue;
      EnergyAnchor anchor;
      anchor.trajectory = c.id;
      anchor.tail = tail;
      for (std::size_t j = 0; j < pending_.size(); ++j) {
        const Tick dt = pending_[j].tick - tail.tick;
        if (dt > energy_.max_gap) break;
        if (dt <= 0) continue;
        const double cost = link_cost_or_nan(tail, pending_[j], energy_);
        if (!std::isnan(cost)) anchor.links.emplace_back(j, cost);
      }
      if (!anchor.links.empty()) model.anchors.push_back(std::move(anchor));
    }
  }

  const PathSolution sol = solve_paths(model);

  std::vector<Trajectory> trajectories = committed_;
  std::unordered_map<ObservationId, TrajectoryId> assignment;
  auto is_committed = [&](TrajectoryId id) {
    return std::any_of(committed_.begin(), committed_.end(),
                       [id](const Trajectory& t) { return t.id == id; });
  };
  std::vector<TrajectoryId> taken;
  for (const auto& p : sol.paths) {
    if (p.anchor) {
      const TrajectoryId id = model.anchors[*p.anchor].trajectory;
      auto pos = std::find_if(trajectories.begin(), trajectories.end(),
                              [id](const Trajectory& t) { return t.id == id; });
      for (std::size_t idx : p.members) {
        pos->observations.push_back(pending_[idx]);
        assignment[pending_[idx].id] = id;
      }
      continue;
    }
    TrajectoryId id = 0;
    if (auto prev = assignment_.find(pending_[p.members.front()].id); prev != assignment_.end()) {
      const TrajectoryId candidate = prev->second;
      if (!is_committed(candidate) &&
          std::find(taken.begin(), taken.end(), candidate) == taken.end()) {
        id = candidate;
      }
    }
    if (id == 0) id = next_id_++;
    taken.push_back(id);
    Trajectory t;
    t.id = id;
    for (std::size_t idx : p.members) {
      t.observations.push_back(pending_[idx]);
      assignment[pending_[idx].id] = id;
    }
    trajectories.push_back(std::move(t));
  }

  assignment_ = std::move(assignment);
  result_.trajectories = std::move(trajectories);
  result_.total_energy = frozen_energy_ + sol.energy;
  result_.solver_stats = sol.stats;
  result_.solver_stats.window_size = pending_.size();
  last_solve_tick_ = last_tick_;
  unsolved_from_ = pending_.size();
}

const AssociationResult& online_update(OnlineAssociator& state, Tick tick,
                                       std::span<const Observation> frame) {
  return state.update(tick, frame);
}

}  // namespace spatial
