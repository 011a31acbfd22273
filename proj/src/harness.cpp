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


#include "fogres/harness.hpp"

#ifdef FOGRES_HAVE_OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <tuple>

#include "fogres/exact.hpp"
#include "fogres/feasibility.hpp"
#include "fogres/heuristics.hpp"

namespace fogres {

std::string_view to_string(SolverKind s) {
  switch (s) {
    case SolverKind::Exact: return "exact";
    case SolverKind::Eoriwg: return "eoriwg";
    case SolverKind::Eorig: return "eorig";
    case SolverKind::Eorign: return "eorign";
    case SolverKind::Auto: return "auto";
  }
  return "?";
}

SolverKind solver_from_string(std::string_view name) {
  for (SolverKind s : {SolverKind::Exact, SolverKind::Eoriwg, SolverKind::Eorig, SolverKind::Eorign, SolverKind::Auto}) {
    if (to_string(s) == name) return s;
  }
  throw InvalidConfig("unknown solver '" + std::string(name) + "'");
}

SolverKind resolve_solver(SolverKind s, Level level) {
  const SolverKind native = level == Level::B ? SolverKind::Eorig
                            : level == Level::C ? SolverKind::Eorign
                                                : SolverKind::Eoriwg;
  if (s == SolverKind::Auto) return native;
  if (s != SolverKind::Exact && s != native) {
    throw InvalidConfig(std::string(to_string(s)) + " does not solve scenario " + std::string(to_string(level)));
  }
  return s;
}

int SweepResult::failed_cells() const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.usable(); }));
}

int sweep_threads(const SweepConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("FOGRES_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
#ifdef FOGRES_HAVE_OPENMP
  return std::max(1, omp_get_max_threads());
#else
  return 1;
#endif
}

namespace {

using Clock = std::chrono::steady_clock;

void solve_cell(SweepRow& row, const NetworkInstance& inst, const Constants& constants, const DemandSet& base,
                int pat, double budget, bool inner_parallel) {
  const auto t0 = Clock::now();
  try {
    const DerivedParams params = derive_params(row.N, pat, constants);
    const DemandSet demand = scale_demand(base, row.demand_fraction);
    Solution sol;
    if (row.solver == SolverKind::Exact) {
      ExactOptions o;
      o.budget_s = budget;
      o.parallel = inner_parallel;
      try {
        HeuristicOptions ho;
        ho.parallel = inner_parallel;
        o.incumbent = run_heuristic(inst, params, row.scenario, demand, ho).solution;
      } catch (const Error&) {
        // No warm start; the search may still find a solution.
      }
      const ExactResult r = solve_exact(inst, params, row.scenario, demand, o);
      row.status = r.status == BoundStatus::Optimal ? "optimal" : "budget";
      row.has_bound = true;
      row.lower_bound = r.lower_bound;
      sol = r.solution;
    } else {
      HeuristicOptions ho;
      ho.parallel = inner_parallel;
      sol = run_heuristic(inst, params, row.scenario, demand, ho).solution;
      row.status = "ok";
    }
    const FeasibilityReport rep = check(inst, params, row.scenario, demand, sol);
    row.violations = static_cast<long>(rep.violations.size());
    row.energy = evaluate(inst, params, sol);
    row.servers_a = sol.servers_a();
    row.servers_b = sol.servers_b();
    row.host_nodes = sol.host_nodes();
    row.raw_bs = sol.raw_bs_count();
    row.feedback_bs = sol.feedback_bs_count();
    if (!rep.feasible()) {
      row.status = "violation";
      row.error = rep.violations.front().tag + " " + rep.violations.front().detail;
    }
    row.solution = std::move(sol);
  } catch (const std::exception& e) {
    row.status = "failed";
    row.error = e.what();
  }
  row.runtime_s = std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string csv_field(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '\n') c = ' ';
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot open '" + p.string() + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("write to '" + p.string() + "' failed");
}

double pct(double base, double res) {
  if (base == 0.0) return res == 0.0 ? 0.0 : std::copysign(INFINITY, res);
  return (res - base) / base * 100.0;
}

std::string gnuplot_text(const SweepResult& res) {
  // One block per (scenario, N), blank-line separated for `index`.
  std::map<std::pair<Level, int>, std::vector<const SweepRow*>> blocks;
  for (const auto& r : res.rows) blocks[{r.scenario, r.N}].push_back(&r);
  std::string out;
  for (const auto& [key, rows] : blocks) {
    out += "# scenario " + std::string(to_string(key.first)) + " N " + std::to_string(key.second) + "\n";
    out += "# fraction total_j networking_j processing_j servers host_nodes\n";
    for (const SweepRow* r : rows) {
      if (!r->usable()) continue;
      out += fmt("%g", r->demand_fraction) + " " + fmt("%.6f", r->energy.total) + " " +
             fmt("%.6f", r->energy.networking()) + " " + fmt("%.6f", r->energy.processing()) + " " +
             std::to_string(r->servers_a + r->servers_b) + " " + std::to_string(r->host_nodes) + "\n";
    }
    out += "\n\n";
  }
  return out;
}

std::string summary_text(const SweepConfig& cfg, const SweepResult& res, int threads) {
  std::string out = "cells " + std::to_string(res.rows.size()) + "\n";
  out += "failed " + std::to_string(res.failed_cells()) + "\n";
  out += "workers " + std::to_string(threads) + "\n";
  out += "solver " + std::string(to_string(cfg.solver)) + "\n";
  std::map<Level, std::pair<double, int>> mean;
  double worst_gap = 0.0;
  for (const auto& r : res.rows) {
    if (!r.usable()) continue;
    auto& m = mean[r.scenario];
    m.first += r.energy.total;
    ++m.second;
    if (r.has_bound && r.energy.total > 0) worst_gap = std::max(worst_gap, (r.energy.total - r.lower_bound) / r.energy.total);
  }
  for (const auto& [lv, m] : mean) {
    out += "mean_total_j " + std::string(to_string(lv)) + " " + fmt("%.6f", m.first / m.second) + "\n";
  }
  if (cfg.solver == SolverKind::Exact) out += "worst_bound_gap_pct " + fmt("%.6f", worst_gap * 100.0) + "\n";
  for (const auto& r : res.rows) {
    if (r.usable()) continue;
    out += "failed_cell " + std::string(to_string(r.scenario)) + " " + fmt("%g", r.demand_fraction) + " " +
           std::to_string(r.N) + " " + r.status + ": " + r.error + "\n";
  }
  return out;
}

}  // namespace

std::string results_csv_header() {
  return "scenario,demand_fraction,N,solver,status,total_j,access_j,metro_j,core_j,cloud_j,fog_j,networking_j,"
         "processing_j,eps_j,servers_a,servers_b,servers,host_nodes,raw_bs,feedback_bs,violations,lower_bound_j,"
         "bound_gap_pct,runtime_s,error\n";
}

std::string results_csv_row(const SweepRow& r) {
  const auto& e = r.energy;
  std::string out = std::string(to_string(r.scenario)) + "," + fmt("%g", r.demand_fraction) + "," +
                    std::to_string(r.N) + "," + std::string(to_string(r.solver)) + "," + r.status + ",";
  const bool has = r.usable() || r.status == "violation";
  for (double v : {e.total, e.e_access, e.e_metro, e.e_core, e.e_cloud, e.e_fog, e.networking(), e.processing(),
                   e.eps}) {
    out += (has ? fmt("%.6f", v) : std::string()) + ",";
  }
  for (long v : {static_cast<long>(r.servers_a), static_cast<long>(r.servers_b),
                 static_cast<long>(r.servers_a + r.servers_b), static_cast<long>(r.host_nodes),
                 static_cast<long>(r.raw_bs), static_cast<long>(r.feedback_bs), r.violations}) {
    out += (has ? std::to_string(v) : std::string()) + ",";
  }
  if (r.has_bound && has) {
    out += fmt("%.6f", r.lower_bound) + "," +
           fmt("%.6f", e.total > 0 ? (e.total - r.lower_bound) / e.total * 100.0 : 0.0) + ",";
  } else {
    out += ",,";
  }
  out += fmt("%.3f", r.runtime_s) + "," + csv_field(r.error) + "\n";
  return out;
}

std::string penalty_csv_header() { return "comparison,demand_fraction,N,network_pct,processing_pct,total_pct\n"; }

std::vector<PenaltyRow> penalty(const std::vector<SweepRow>& baseline, const std::vector<SweepRow>& resilient) {
  if (baseline.size() != resilient.size()) throw MisalignedRows("row counts differ");
  std::vector<PenaltyRow> out;
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    const SweepRow &b = baseline[i], &r = resilient[i];
    if (b.demand_fraction != r.demand_fraction || b.N != r.N) {
      throw MisalignedRows("row " + std::to_string(i) + " pairs different (fraction, N) cells");
    }
    if (!b.usable() || !r.usable()) throw MisalignedRows("row " + std::to_string(i) + " has no solution");
    out.push_back({b.demand_fraction, b.N, pct(b.energy.networking(), r.energy.networking()),
                   pct(b.energy.processing(), r.energy.processing()), pct(b.energy.total, r.energy.total)});
  }
  return out;
}

SweepResult run_sweep(const SweepConfig& cfg, const NetworkInstance& inst, const Constants& constants) {
  for (double f : cfg.demand_fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw InvalidConfig("demand fraction " + fmt("%g", f) + " outside (0, 1]");
  }
  for (int n : cfg.N_values) {
    if (n < 1) throw InvalidConfig("N must be at least 1");
  }
  if (cfg.solver == SolverKind::Exact && !(std::isfinite(cfg.budget_s) && cfg.budget_s > 0.0)) {
    throw InvalidConfig("the exact solver needs a finite positive budget");
  }
  std::vector<SweepRow> cells;
  auto fractions = cfg.demand_fractions;
  auto ns = cfg.N_values;
  auto levels = cfg.scenarios;
  std::sort(fractions.begin(), fractions.end());
  fractions.erase(std::unique(fractions.begin(), fractions.end()), fractions.end());
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (double f : fractions) {
    for (int n : ns) {
      for (Level lv : levels) {
        SweepRow r;
        r.scenario = lv;
        r.demand_fraction = f;
        r.N = n;
        r.solver = resolve_solver(cfg.solver, lv);
        cells.push_back(std::move(r));
      }
    }
  }

  const DemandSet base = base_demand(inst);
  const int pat = default_pat(base, constants);
  const int threads = std::max(1, std::min(sweep_threads(cfg), static_cast<int>(cells.size())));
  const bool inner = threads == 1;
  const auto ncells = static_cast<long>(cells.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (threads > 1)
  for (long i = 0; i < ncells; ++i) {
    solve_cell(cells[static_cast<std::size_t>(i)], inst, constants, base, pat, cfg.budget_s, inner);
  }

  SweepResult res;
  res.rows = std::move(cells);
  if (cfg.output_dir.empty()) return res;

  const std::filesystem::path dir(cfg.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  std::string results = results_csv_header(), breakdown = breakdown_csv_header(), pen = penalty_csv_header();
  for (const auto& r : res.rows) {
    results += results_csv_row(r);
    if (r.usable()) breakdown += breakdown_csv_rows(r.energy, to_string(r.scenario), r.demand_fraction, r.N);
  }
  // Each resilience level against the one below it, on cells where both solved.
  const Level order[] = {Level::NonRes, Level::A, Level::B, Level::C};
  for (int k = 0; k + 1 < 4; ++k) {
    std::vector<SweepRow> lo, hi;
    std::map<std::pair<double, int>, const SweepRow*> base_rows;
    for (const auto& r : res.rows) {
      if (r.scenario == order[k] && r.usable()) base_rows[{r.demand_fraction, r.N}] = &r;
    }
    for (const auto& r : res.rows) {
      if (r.scenario != order[k + 1] || !r.usable()) continue;
      const auto it = base_rows.find({r.demand_fraction, r.N});
      if (it == base_rows.end()) continue;
      lo.push_back(*it->second);
      hi.push_back(r);
    }
    const std::string name = std::string(to_string(order[k + 1])) + "_vs_" + std::string(to_string(order[k]));
    for (const auto& p : penalty(lo, hi)) {
      pen += name + "," + fmt("%g", p.demand_fraction) + "," + std::to_string(p.N) + "," + fmt("%.6f", p.network_pct) +
             "," + fmt("%.6f", p.processing_pct) + "," + fmt("%.6f", p.total_pct) + "\n";
    }
  }
  write_text(dir / "results.csv", results);
  write_text(dir / "breakdown.csv", breakdown);
  write_text(dir / "penalty.csv", pen);
  write_text(dir / "summary.txt", summary_text(cfg, res, threads));
  if (cfg.gnuplot) write_text(dir / "gnuplot.dat", gnuplot_text(res));
  return res;
}

}  // namespace fogres
