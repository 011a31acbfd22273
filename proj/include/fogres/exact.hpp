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

// Exact placement by branch-and-bound over patient assignments.
//
// The tree assigns each clinic's patients to fog nodes, primary class first.
// Server counts follow from the loads (ceil(load / Pat) is optimal for a
// fixed assignment: more servers only add idle power). At a leaf the raw
// and feedback tasks are independent given the assignment, and each is
// solved exactly by enumerating open base stations and relay nodes and
// running a min-cost transport for the remaining load-proportional cost.
// Scenario C additionally labels every OLT subtree with the class allowed
// to use it; any feasible C solution induces such a labelling.

#ifndef FOGRES_EXACT_HPP
#define FOGRES_EXACT_HPP

#include <optional>
#include <string_view>

#include "fogres/demand.hpp"
#include "fogres/energy.hpp"
#include "fogres/solution.hpp"
#include "fogres/topology.hpp"

namespace fogres {

enum class BoundStatus { Optimal, BudgetExhausted };
std::string_view to_string(BoundStatus s);

struct ExactOptions {
  double budget_s = 300.0;
  /// Fan the first branching level out over OpenMP threads.
  bool parallel = true;
  /// Warm start (for example a heuristic solution). Must be feasible.
  std::optional<Solution> incumbent;
};

struct ExactResult {
  BoundStatus status = BoundStatus::BudgetExhausted;
  bool has_solution = false;
  Solution solution;
  EnergyBreakdown energy;
  /// Proven lower bound on the optimum; equals energy.total when Optimal.
  double lower_bound = 0.0;
  long nodes = 0;   // search nodes expanded
  long leaves = 0;  // complete assignments evaluated

  /// (energy - bound) / energy, 0 when optimal.
  double gap() const;
};

/// Throws Infeasible when the search completes without a feasible solution.
ExactResult solve_exact(const NetworkInstance& inst, const DerivedParams& params, Level level,
                        const DemandSet& demand, const ExactOptions& opts = {});
ExactResult solve_exact(const NetworkInstance& inst, const DerivedParams& params, const ScenarioSpec& spec,
                        double budget_s);

/// Root lower bound used by solve_exact.
double energy_lower_bound(const NetworkInstance& inst, const DerivedParams& params, Level level,
                          const DemandSet& demand);

}  // namespace fogres

#endif  // FOGRES_EXACT_HPP
