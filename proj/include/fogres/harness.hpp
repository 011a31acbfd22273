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


// Sweep driver: one cell per (demand fraction, N, scenario), solved,
// re-checked, evaluated and written as CSV.

#ifndef FOGRES_HARNESS_HPP
#define FOGRES_HARNESS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "fogres/demand.hpp"
#include "fogres/energy.hpp"
#include "fogres/solution.hpp"
#include "fogres/topology.hpp"

namespace fogres {

enum class SolverKind { Exact, Eoriwg, Eorig, Eorign, Auto };
std::string_view to_string(SolverKind s);
SolverKind solver_from_string(std::string_view name);

/// Solver actually run for a scenario: Auto picks the matching heuristic.
/// Throws InvalidConfig when an explicit heuristic does not belong to the
/// scenario (EORIWG: NONRES or A, EORIG: B, EORIGN: C).
SolverKind resolve_solver(SolverKind s, Level level);

struct SweepConfig {
  std::vector<double> demand_fractions;
  std::vector<int> N_values;
  std::vector<Level> scenarios;
  SolverKind solver = SolverKind::Auto;
  double budget_s = 300.0;  // exact cells only; must be finite
  std::string output_dir;   // empty: nothing written
  bool gnuplot = false;
  /// Worker cap; 0 reads FOGRES_THREADS, then falls back to the OpenMP
  /// default.
  int threads = 0;
};

struct SweepRow {
  Level scenario = Level::A;
  double demand_fraction = 0.0;
  int N = 0;
  SolverKind solver = SolverKind::Auto;
  /// "ok" (heuristic), "optimal" / "budget" (exact), "failed" (solver
  /// error), "violation" (solution failed the re-check).
  std::string status;
  std::string error;
  EnergyBreakdown energy;
  int servers_a = 0, servers_b = 0, host_nodes = 0, raw_bs = 0, feedback_bs = 0;
  long violations = 0;
  bool has_bound = false;
  double lower_bound = 0.0;
  double runtime_s = 0.0;
  Solution solution;

  bool usable() const { return status == "ok" || status == "optimal" || status == "budget"; }
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by (fraction, N, scenario)
  int failed_cells() const;
};

/// Throws InvalidConfig on a bad configuration, IoError when an output file
/// cannot be written. Solver errors are recorded per cell.
SweepResult run_sweep(const SweepConfig& cfg, const NetworkInstance& inst, const Constants& constants);

/// Worker count the sweep would use.
int sweep_threads(const SweepConfig& cfg);

struct PenaltyRow {
  double demand_fraction = 0.0;
  int N = 0;
  double network_pct = 0.0;
  double processing_pct = 0.0;
  double total_pct = 0.0;
};

/// (resilient - baseline) / baseline in percent per aligned (fraction, N)
/// row; 0 when both are zero. Throws MisalignedRows when the lists differ
/// in length or (fraction, N) at any position, or a row is not usable.
std::vector<PenaltyRow> penalty(const std::vector<SweepRow>& baseline, const std::vector<SweepRow>& resilient);

std::string results_csv_header();
std::string results_csv_row(const SweepRow& r);
std::string penalty_csv_header();

}  // namespace fogres

#endif  // FOGRES_HARNESS_HPP
