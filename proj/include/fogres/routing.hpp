// Copyright 2026 The fogres Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Single-path routing of the three traffic tasks and the node/link
// indicators derived from the routed flows.
//
// Flows are carried as integer stream counts per directed link; a stream of
// task t occupies rate[t] bps. Conservation is therefore exact.

#ifndef FOGRES_ROUTING_HPP
#define FOGRES_ROUTING_HPP

#include <array>
#include <set>
#include <string>
#include <vector>

#include "fogres/topology.hpp"

namespace fogres {

enum class Task : int { Processing = 0, Feedback = 1, Storage = 2 };
inline constexpr int kTasks = 3;
inline constexpr int kClasses = 2;  // 0 primary, 1 secondary

/// bps per stream for each task.
using TaskRates = std::array<double, kTasks>;

struct Demand {
  int src = -1;
  int dst = -1;
  long streams = 0;
  Task task = Task::Processing;
  int cls = 0;
  /// Base station the access hop must use (clinic endpoint demands only).
  int via = -1;
};

struct RoutedDemand {
  Demand demand;
  std::vector<int> path;  // node indices, src first
};

/// Directed-link slot: 2*link + (0 if a->b else 1).
inline int arc_of(const Link& l, int link_idx, int from) { return 2 * link_idx + (from == l.a ? 0 : 1); }

struct FlowSet {
  std::vector<RoutedDemand> routes;
  /// [class][task][arc] stream counts.
  std::array<std::array<std::vector<long>, kTasks>, kClasses> arc_streams;
  /// Node aggregates in streams: Processing counts incoming, Feedback
  /// outgoing, Storage incoming plus originated.
  std::array<std::array<std::vector<long>, kTasks>, kClasses> node_streams;
  std::vector<char> zeta_a, zeta_b, theta, vartheta, zeta_c;

  long arc_total(Task t, int arc) const;
  long node_total(Task t, int node) const;
  bool empty() const { return routes.empty(); }
};

struct RouteOptions {
  std::set<int> forbidden_nodes;
  std::set<int> forbidden_links;
  /// When set, per-direction task loads are checked against lambda.
  const TaskRates* rates = nullptr;
};

/// Shortest path src -> dst; clinics are never transit nodes. Among equal
/// hop counts the lexicographically smallest node-index sequence wins.
/// Returns an empty vector when no path exists.
std::vector<int> shortest_path(const NetworkInstance& inst, int src, int dst,
                               const std::set<int>& forbidden_nodes = {},
                               const std::set<int>& forbidden_links = {});

/// Hop distance from every node to dst (clinics are not expanded), -1 if
/// unreachable.
std::vector<int> hop_distances(const NetworkInstance& inst, int dst);

FlowSet route(const NetworkInstance& inst, const std::vector<Demand>& demands, const RouteOptions& opts = {});

struct CapacityViolation {
  int link = -1;
  int from = -1;
  Task task = Task::Processing;
  double load_bps = 0.0;
  double capacity_bps = 0.0;
};

std::vector<CapacityViolation> capacity_violations(const NetworkInstance& inst, const FlowSet& flows,
                                                   const TaskRates& rates);

struct DisjointReport {
  std::vector<int> shared_links;  // access-layer link indices used by both classes
  std::vector<int> shared_nodes;  // access-layer nodes touched by both classes
  bool empty() const { return shared_links.empty() && shared_nodes.empty(); }
};

/// Per-class access-layer usage: link used in either direction, node
/// incident to a used link.
std::vector<char> class_link_usage(const NetworkInstance& inst, const FlowSet& flows, int cls);
std::vector<char> class_node_usage(const NetworkInstance& inst, const FlowSet& flows, int cls);

/// Access-layer links and nodes carrying traffic of both classes.
DisjointReport check_disjoint(const NetworkInstance& inst, const FlowSet& primary, const FlowSet& secondary);
/// Same check on one flow set carrying both classes.
DisjointReport check_disjoint(const NetworkInstance& inst, const FlowSet& flows);

std::string flows_to_csv(const NetworkInstance& inst, const FlowSet& flows);

}  // namespace fogres

#endif  // FOGRES_ROUTING_HPP
