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


// Greedy placement heuristics for real-time use.
//
// All three share one pipeline: order the clinics, pack their raw and
// feedback streams into as few base stations as the ordering allows, then
// search node combinations of increasing size for the cheapest server
// placement. Streams go to the nearest node of the combination (hop count,
// ties by node id) that still has server capacity. The search stops at the
// first size that does not strictly improve on the previous one.
//
//   eoriwg  primary and secondary may share a node (scenario A, or NONRES
//           with a single copy)
//   eorig   primary hosts are removed before secondary assignment (B)
//   eorign  primary in one cluster, secondary in another on what is left
//           after removing every access node the primary traffic touched (C)
//
// Trace format: one decision per line, space-separated, first word is the
// record type.
//   group <key> <clinic>...
//   bs <raw|fb> <clinic> <bs>:<streams>...
//   combo <k> <node>,... <energy|infeasible>
//   best <k> <node>,... <energy>
//   stop <k> <reason>
//   orient <primary-cluster> <secondary-cluster> <energy|error>
//   alloc <raw|fb> <clinic> <bs> <fog> <a|b> <patients>
//   phi <fog> <a|b> <servers>
// A stage prefix ("a:" or "b:") precedes the record type when the two
// classes are placed separately. replay() needs only alloc and phi lines.

#ifndef FOGRES_HEURISTICS_HPP
#define FOGRES_HEURISTICS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "fogres/demand.hpp"
#include "fogres/energy.hpp"
#include "fogres/solution.hpp"
#include "fogres/topology.hpp"

namespace fogres {

struct HeuristicTrace {
  std::vector<std::string> lines;

  std::string text() const;
  static HeuristicTrace parse(std::string_view text);
};

struct HeuristicOptions {
  /// Evaluate node combinations on OpenMP threads. The result does not
  /// depend on this flag.
  bool parallel = true;
};

struct HeuristicResult {
  Solution solution;
  EnergyBreakdown energy;
  HeuristicTrace trace;
};

/// Scenario A. Throws NoFeasibleAssignment.
HeuristicResult eoriwg(const NetworkInstance& inst, const DerivedParams& params, const DemandSet& demand,
                       const HeuristicOptions& opts = {});
/// Scenario B. Throws NoFeasibleAssignment or NoDisjointNodes.
HeuristicResult eorig(const NetworkInstance& inst, const DerivedParams& params, const DemandSet& demand,
                      const HeuristicOptions& opts = {});
/// Scenario C. Tries every ordered pair of clusters and keeps the cheapest.
/// Throws NoDisjointRoute.
HeuristicResult eorign(const NetworkInstance& inst, const DerivedParams& params, const DemandSet& demand,
                       const HeuristicOptions& opts = {});

/// Matching heuristic for a level; NONRES runs eoriwg with a single copy.
HeuristicResult run_heuristic(const NetworkInstance& inst, const DerivedParams& params, Level level,
                              const DemandSet& demand, const HeuristicOptions& opts = {});

/// Rebuilds the returned Solution from the alloc and phi records.
Solution replay(const NetworkInstance& inst, const DerivedParams& params, Level level,
                const HeuristicTrace& trace);

}  // namespace fogres

#endif  // FOGRES_HEURISTICS_HPP
