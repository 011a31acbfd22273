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


// MILP export in CPLEX LP format, plus the variable-value bridge to and from
// Solution.
//
// Flows are per commodity and per directed link in bps. Scenarios without
// link/node separation carry both classes in one commodity; scenario C
// splits every commodity by class and adds the access-layer link (La, Lb)
// and node (rho) indicators. Clinics are never transit nodes, so commodity
// flow variables exist only on links between non-clinic nodes plus the
// commodity's own clinic links; rows that would be empty are not written.
//
// Rows are grouped under `\* Eq.N *\` comment lines; the objective is the
// same sum evaluate() computes.

#ifndef FOGRES_MILP_HPP
#define FOGRES_MILP_HPP

#include <map>
#include <string>
#include <string_view>

#include "fogres/demand.hpp"
#include "fogres/solution.hpp"
#include "fogres/topology.hpp"

namespace fogres {

struct MilpStats {
  long rows = 0;
  long variables = 0;
  long binaries = 0;
  long generals = 0;
  std::map<std::string, long> rows_by_tag;  // "Eq.39" -> count
};

/// Whole LP file as text.
std::string milp_text(const NetworkInstance& inst, const DerivedParams& params, Level level, const DemandSet& demand,
                      MilpStats* stats = nullptr);

/// Writes the LP file. Throws IoError.
MilpStats export_milp(const NetworkInstance& inst, const DerivedParams& params, Level level,
                      const DemandSet& demand, const std::string& path);
MilpStats export_milp(const NetworkInstance& inst, const DerivedParams& params, const ScenarioSpec& spec,
                      const std::string& path);

/// `name value` line for every model variable at this solution (zeros
/// included). The solution must be assembled.
std::string milp_values(const NetworkInstance& inst, const DerivedParams& params, Level level,
                        const DemandSet& demand, const Solution& sol);

/// Reads `name value` lines (blank lines and lines starting with `#` or `\`
/// are skipped; absent variables are zero) and rebuilds an assembled
/// Solution from omega, phi and the clinic-side link flows. Throws
/// ParseError on unknown names or non-integral integer variables.
Solution import_milp_values(const NetworkInstance& inst, const DerivedParams& params, Level level,
                            const DemandSet& demand, std::string_view text);

}  // namespace fogres

#endif  // FOGRES_MILP_HPP
