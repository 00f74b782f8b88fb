#include "spatial/min_cost_flow.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>

namespace spatial {
namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

MinCostFlow::MinCostFlow(int node_count)
    : adjacency_(static_cast<std::size_t>(node_count)),
      potential_(static_cast<std::size_t>(node_count), 0.0),
      distance_(static_cast<std::size_t>(node_count), kInf),
      parent_arc_(static_cast<std::size_t>(node_count), -1) {}

int MinCostFlow::add_arc(int from, int to, int capacity, double cost) {
  if (from < 0 || to < 0 || from >= node_count() || to >= node_count()) {
    throw std::out_of_range("MinCostFlow::add_arc: node out of range");
  }
  const int id = static_cast<int>(arcs_.size());
  arcs_.push_back({from, to, capacity, 0, cost});
  arcs_.push_back({to, from, 0, 0, -cost});
  adjacency_[static_cast<std::size_t>(from)].push_back(id);
  adjacency_[static_cast<std::size_t>(to)].push_back(id + 1);
  return id;
}

// Label-correcting shortest paths from the source over arcs with residual
// capacity; the network is acyclic initially so this terminates.
void MinCostFlow::init_potentials(int source) {
  std::fill(potential_.begin(), potential_.end(), kInf);
  std::vector<bool> queued(potential_.size(), false);
  std::deque<int> work{source};
  potential_[static_cast<std::size_t>(source)] = 0.0;
  queued[static_cast<std::size_t>(source)] = true;
  while (!work.empty()) {
    const int v = work.front();
    work.pop_front();
    queued[static_cast<std::size_t>(v)] = false;
    for (int id : adjacency_[static_cast<std::size_t>(v)]) {
      const Arc& a = arcs_[static_cast<std::size_t>(id)];
      if (a.capacity - a.flow <= 0) continue;
      ++stats_.relaxations;
      const double cand = potential_[static_cast<std::size_t>(v)] + a.cost;
      if (cand < potential_[static_cast<std::size_t>(a.to)]) {
        potential_[static_cast<std::size_t>(a.to)] = cand;
        if (!queued[static_cast<std::size_t>(a.to)]) {
          queued[static_cast<std::size_t>(a.to)] = true;
          work.push_back(a.to);
        }
      }
    }
  }
  for (double& p : potential_) {
    if (p == kInf) p = 0.0;
  }
}

bool MinCostFlow::shortest_path(int source, int sink) {
  std::fill(distance_.begin(), distance_.end(), kInf);
  std::fill(parent_arc_.begin(), parent_arc_.end(), -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  distance_[static_cast<std::size_t>(source)] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > distance_[static_cast<std::size_t>(v)]) continue;
    for (int id : adjacency_[static_cast<std::size_t>(v)]) {
      const Arc& a = arcs_[static_cast<std::size_t>(id)];
      if (a.capacity - a.flow <= 0) continue;
      ++stats_.relaxations;
      // Reduced costs are non-negative up to rounding.
      const double reduced = std::max(
          0.0, a.cost + potential_[static_cast<std::size_t>(v)] -
                    potential_[static_cast<std::size_t>(a.to)]);
      const double cand = d + reduced;
      if (cand < distance_[static_cast<std::size_t>(a.to)]) {
        distance_[static_cast<std::size_t>(a.to)] = cand;
        parent_arc_[static_cast<std::size_t>(a.to)] = id;
        heap.emplace(cand, a.to);
      }
    }
  }
  if (distance_[static_cast<std::size_t>(sink)] == kInf) return false;
  for (std::size_t v = 0; v < potential_.size(); ++v) {
    if (distance_[v] != kInf) potential_[v] += distance_[v];
  }
  return true;
}

double MinCostFlow::augment_while_improving(int source, int sink, double tolerance) {
  init_potentials(source);
  double total = 0.0;
  while (shortest_path(source, sink)) {
    double path_cost = 0.0;
    int bottleneck = std::numeric_limits<int>::max();
    for (int v = sink; v != source;) {
      const Arc& a = arcs_[static_cast<std::size_t>(parent_arc_[static_cast<std::size_t>(v)])];
      path_cost += a.cost;
      bottleneck = std::min(bottleneck, a.capacity - a.flow);
      v = a.from;
    }
    if (!(path_cost < -tolerance)) break;
    for (int v = sink; v != source;) {
      const int id = parent_arc_[static_cast<std::size_t>(v)];
      arcs_[static_cast<std::size_t>(id)].flow += bottleneck;
      arcs_[static_cast<std::size_t>(id ^ 1)].flow -= bottleneck;
      v = arcs_[static_cast<std::size_t>(id)].from;
    }
    total += path_cost * bottleneck;
    ++stats_.augmentations;
  }
  return total;
}

}  // namespace spatial
