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

// Constraint checks for a placement solution. Every violated constraint is
// reported with its equation tag; nothing short-circuits.

#ifndef FOGRES_FEASIBILITY_HPP
#define FOGRES_FEASIBILITY_HPP

#include <string>
#include <vector>

#include "fogres/demand.hpp"
#include "fogres/solution.hpp"
#include "fogres/topology.hpp"

namespace fogres {

struct Violation {
  std::string tag;  // e.g. "Eq.34"
  int node = -1;    // node index, -1 if not node specific
  std::string detail;
};

struct FeasibilityReport {
  std::vector<Violation> violations;

  bool feasible() const { return violations.empty(); }
  bool has(std::string_view tag) const;
  /// One `VIOLATION eq=<tag> node=<id> detail=<...>` line per violation.
  std::string text(const NetworkInstance& inst) const;
};

FeasibilityReport check(const NetworkInstance& inst, const DerivedParams& params, Level level,
                        const DemandSet& demand, const Solution& sol);
/// Demand taken from the instance scaled by spec.demand_fraction.
FeasibilityReport check(const NetworkInstance& inst, const DerivedParams& params, const ScenarioSpec& spec,
                        const Solution& sol);

/// ceil(total / Pat), doubled when resilient.
int server_lower_bound(int total_patients, int pat, bool resilient);

}  // namespace fogres

#endif  // FOGRES_FEASIBILITY_HPP
