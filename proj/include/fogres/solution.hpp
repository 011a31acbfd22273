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

// Placement solutions and the assembler that turns a patient/BS allocation
// into routed flows, PRB counts and activation flags.

#ifndef FOGRES_SOLUTION_HPP
#define FOGRES_SOLUTION_HPP

#include <string>
#include <string_view>
#include <vector>

#include "fogres/demand.hpp"
#include "fogres/routing.hpp"
#include "fogres/topology.hpp"

namespace fogres {

enum class Level { NonRes, A, B, C };

std::string_view to_string(Level level);
Level level_from_string(std::string_view name);  // "nonres", "a", "b", "c"
/// Copies of every patient stream: 1 without protection, 2 otherwise.
inline int copies(Level level) { return level == Level::NonRes ? 1 : 2; }

struct ScenarioSpec {
  Level level = Level::A;
  double demand_fraction = 1.0;
  int N = 3;
};

/// `patients` streams of class `cls` from `clinic` reach fog node `fog`
/// through base station `bs` (raw) or come back through it (feedback).
/// All ids are node indices.
struct StreamAlloc {
  int clinic = -1;
  int bs = -1;
  int fog = -1;
  int cls = 0;
  int patients = 0;
  bool operator==(const StreamAlloc&) const = default;
  auto operator<=>(const StreamAlloc&) const = default;
};

struct Solution {
  Level level = Level::A;
  // Decision part. Matrices are [clinic position][fog position].
  std::vector<std::vector<int>> omega_a, omega_b;
  std::vector<int> phi_a, phi_b;  // by fog position
  std::vector<StreamAlloc> raw, feedback;

  // Derived by assemble().
  std::vector<char> y_a, y_b, y;           // by fog position
  std::vector<std::vector<int>> pp, pf;    // [clinic position][BS position], streams
  std::vector<int> beta_a, beta_b;         // by BS position
  std::vector<double> tau_pa, tau_pb;      // by fog position
  FlowSet flows;

  int servers_a() const;
  int servers_b() const;
  int servers() const { return servers_a() + servers_b(); }
  /// Fog nodes hosting at least one server.
  int host_nodes() const;
  /// Base stations with raw / feedback PRBs in use.
  int raw_bs_count() const;
  int feedback_bs_count() const;
};

/// Empty decision matrices sized for the instance.
Solution empty_solution(const NetworkInstance& inst, Level level);

/// Route all demands implied by the decision part and fill every derived
/// field. Throws NoPath if an allocation references an unusable access hop.
void assemble(const NetworkInstance& inst, const DerivedParams& params, Solution& sol);

TaskRates task_rates(const DerivedParams& params);

std::string solution_to_json(const NetworkInstance& inst, const Solution& sol);
/// Reads the decision part and reassembles.
Solution solution_from_json(const NetworkInstance& inst, const DerivedParams& params, std::string_view text);

}  // namespace fogres

#endif  // FOGRES_SOLUTION_HPP
