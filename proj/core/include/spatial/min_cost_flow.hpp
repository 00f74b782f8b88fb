#pragma once

#include <cstddef>
#include <vector>

namespace spatial {

// Successive shortest paths with Johnson potentials over real-valued costs.
// Arc costs may be negative as long as the initial network has no negative
// cycle. Flow is pushed one shortest path at a time for as long as each path
// strictly lowers the total cost, which yields the minimum-cost flow over all
// flow values when the cost is convex in the flow value (always true here).
class MinCostFlow {
 public:
  struct Arc {
    int from = 0;
    int to = 0;
    int capacity = 0;
    int flow = 0;
    double cost = 0.0;
  };

  struct Stats {
    int augmentations = 0;
    long long relaxations = 0;  // deterministic work counter
  };

  explicit MinCostFlow(int node_count);

  // Returns the arc id; the paired residual arc is id ^ 1.
  int add_arc(int from, int to, int capacity, double cost);

  // Returns the total cost of the pushed flow (<= 0).
  double augment_while_improving(int source, int sink, double tolerance = 1e-12);

  [[nodiscard]] int node_count() const { return static_cast<int>(adjacency_.size()); }
  [[nodiscard]] const Arc& arc(int id) const { return arcs_[static_cast<std::size_t>(id)]; }
  [[nodiscard]] std::size_t arc_count() const { return arcs_.size() / 2; }
  [[nodiscard]] const Stats& stats() const { return stats_; }

 private:
  void init_potentials(int source);
  bool shortest_path(int source, int sink);

  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<double> potential_;
  std::vector<double> distance_;
  std::vector<int> parent_arc_;
  Stats stats_;
};

}  // namespace spatial
