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


// fogres command line: sweep, solve, check, export-milp.
// Exit codes: 0 success, 2 an infeasible or failed cell / solution,
// 3 configuration or input error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fogres/energy.hpp"
#include "fogres/exact.hpp"
#include "fogres/feasibility.hpp"
#include "fogres/harness.hpp"
#include "fogres/heuristics.hpp"
#include "fogres/milp.hpp"

using namespace fogres;

namespace {

constexpr int kInfeasible = 2;
constexpr int kConfig = 3;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// "3..8" or "3,5,8".
std::vector<int> parse_ns(const std::string& s) {
  std::vector<int> out;
  for (const auto& part : split(s, ',')) {
    const auto dots = part.find("..");
    try {
      if (dots == std::string::npos) {
        out.push_back(std::stoi(part));
      } else {
        const int lo = std::stoi(part.substr(0, dots)), hi = std::stoi(part.substr(dots + 2));
        if (hi < lo) throw InvalidConfig("empty range '" + part + "'");
        for (int n = lo; n <= hi; ++n) out.push_back(n);
      }
    } catch (const std::logic_error&) {
      throw InvalidConfig("bad N list '" + s + "'");
    }
  }
  return out;
}

std::vector<double> parse_fractions(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) {
    try {
      out.push_back(std::stod(part));
    } catch (const std::logic_error&) {
      throw InvalidConfig("bad demand list '" + s + "'");
    }
  }
  return out;
}

struct Common {
  std::string instance;
  std::string constants;

  NetworkInstance load() const { return load_instance(instance); }
  Constants consts() const { return constants.empty() ? Constants{} : load_constants(constants); }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--instance", c.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  app->add_option("--constants", c.constants, "Workload constants JSON")->check(CLI::ExistingFile);
}

DerivedParams params_for(const NetworkInstance& inst, const Constants& k, int N) {
  return derive_params(N, default_pat(base_demand(inst), k), k);
}

void write_out(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  if (!f.flush()) throw IoError("write to '" + path + "' failed");
}

void print_energy(const EnergyBreakdown& e) {
  std::printf("total_j %.6f\nnetworking_j %.6f\nprocessing_j %.6f\n", e.total, e.networking(), e.processing());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resilient fog placement for health monitoring: energy models, solvers and sweeps"};
  app.require_subcommand(1);

  Common sweep_c;
  std::string scenarios = "nonres,a,b,c", demands = "0.2,0.4,0.6,0.8,1.0", ns = "3..8", solver = "auto", out;
  double budget = 300.0;
  bool gnuplot = false;
  int threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Solve every (demand, N, scenario) cell and write CSVs");
  add_common(sweep, sweep_c);
  sweep->add_option("--scenarios", scenarios, "Comma list of nonres,a,b,c");
  sweep->add_option("--demands", demands, "Comma list of demand fractions");
  sweep->add_option("--n", ns, "Servers per node: 3..8 or 3,5,8");
  sweep->add_option("--solver", solver, "exact, eoriwg, eorig, eorign or auto");
  sweep->add_option("--budget", budget, "Seconds per exact cell");
  sweep->add_option("--out", out, "Output directory")->required();
  sweep->add_flag("--gnuplot", gnuplot, "Also write gnuplot.dat");
  sweep->add_option("--threads", threads, "Worker cap (default FOGRES_THREADS)");

  Common solve_c;
  std::string level = "a", solution_out;
  double fraction = 1.0;
  int N = 3;
  auto* solve = app.add_subcommand("solve", "Solve one cell and write the solution JSON");
  add_common(solve, solve_c);
  solve->add_option("--scenario", level, "nonres, a, b or c");
  solve->add_option("--fraction", fraction, "Demand fraction");
  solve->add_option("--n", N, "Servers per node");
  solve->add_option("--solver", solver, "exact, eoriwg, eorig, eorign or auto");
  solve->add_option("--budget", budget, "Seconds for the exact solver");
  solve->add_option("--out", solution_out, "Solution JSON")->required();

  Common check_c;
  std::string solution_in;
  auto* chk = app.add_subcommand("check", "Check a solution JSON and print its energy");
  add_common(chk, check_c);
  chk->add_option("--solution", solution_in, "Solution JSON")->required()->check(CLI::ExistingFile);
  chk->add_option("--fraction", fraction, "Demand fraction the solution serves");
  chk->add_option("--n", N, "Servers per node");

  Common milp_c;
  std::string lp_out, values_out, values_in;
  auto* milp = app.add_subcommand("export-milp", "Write the placement MILP in CPLEX LP format");
  add_common(milp, milp_c);
  milp->add_option("--scenario", level, "nonres, a, b or c");
  milp->add_option("--fraction", fraction, "Demand fraction");
  milp->add_option("--n", N, "Servers per node");
  milp->add_option("--out", lp_out, "LP file")->required();
  milp->add_option("--solution", solution_in, "Also write variable values for this solution JSON")
      ->check(CLI::ExistingFile);
  milp->add_option("--values-out", values_out, "Where to write the values (needs --solution)");
  milp->add_option("--import", values_in, "Read `name value` lines, check and print the rebuilt solution")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfig;
  }

  try {
    if (*sweep) {
      SweepConfig cfg;
      cfg.demand_fractions = parse_fractions(demands);
      cfg.N_values = parse_ns(ns);
      for (const auto& s : split(scenarios, ',')) cfg.scenarios.push_back(level_from_string(s));
      cfg.solver = solver_from_string(solver);
      cfg.budget_s = budget;
      cfg.output_dir = out;
      cfg.gnuplot = gnuplot;
      cfg.threads = threads;
      const SweepResult res = run_sweep(cfg, sweep_c.load(), sweep_c.consts());
      std::printf("%zu cells, %d failed, results in %s\n", res.rows.size(), res.failed_cells(), out.c_str());
      return res.failed_cells() > 0 ? kInfeasible : 0;
    }

    if (*solve) {
      const auto inst = solve_c.load();
      const auto k = solve_c.consts();
      const Level lv = level_from_string(level);
      const auto p = params_for(inst, k, N);
      const auto demand = scale_demand(base_demand(inst), fraction);
      const SolverKind sk = resolve_solver(solver_from_string(solver), lv);
      Solution sol;
      try {
        if (sk == SolverKind::Exact) {
          ExactOptions o;
          o.budget_s = budget;
          const auto r = solve_exact(inst, p, lv, demand, o);
          std::printf("status %s\nlower_bound_j %.6f\n", std::string(to_string(r.status)).c_str(), r.lower_bound);
          sol = r.solution;
        } else {
          sol = run_heuristic(inst, p, lv, demand).solution;
        }
      } catch (const Infeasible& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return kInfeasible;
      } catch (const NoFeasibleAssignment& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return kInfeasible;
      } catch (const NoDisjointNodes& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return kInfeasible;
      } catch (const NoDisjointRoute& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return kInfeasible;
      }
      write_out(solution_out, solution_to_json(inst, sol));
      print_energy(evaluate(inst, p, sol));
      return 0;
    }

    if (*chk) {
      const auto inst = check_c.load();
      const auto p = params_for(inst, check_c.consts(), N);
      std::ifstream f(solution_in);
      std::stringstream ss;
      ss << f.rdbuf();
      const Solution sol = solution_from_json(inst, p, ss.str());
      const auto demand = scale_demand(base_demand(inst), fraction);
      const auto rep = check(inst, p, sol.level, demand, sol);
      std::fputs(rep.text(inst).c_str(), stdout);
      if (!rep.feasible()) return kInfeasible;
      std::printf("feasible\n");
      print_energy(evaluate(inst, p, sol));
      return 0;
    }

    if (*milp) {
      const auto inst = milp_c.load();
      const Level lv = level_from_string(level);
      const auto p = params_for(inst, milp_c.consts(), N);
      const auto demand = scale_demand(base_demand(inst), fraction);
      const MilpStats st = export_milp(inst, p, lv, demand, lp_out);
      std::printf("rows %ld\ncolumns %ld\nbinaries %ld\ngenerals %ld\n", st.rows, st.variables, st.binaries,
                  st.generals);
      if (!solution_in.empty()) {
        if (values_out.empty()) throw InvalidConfig("--solution needs --values-out");
        std::ifstream f(solution_in);
        std::stringstream ss;
        ss << f.rdbuf();
        write_out(values_out, milp_values(inst, p, lv, demand, solution_from_json(inst, p, ss.str())));
      }
      if (!values_in.empty()) {
        std::ifstream f(values_in);
        std::stringstream ss;
        ss << f.rdbuf();
        const Solution sol = import_milp_values(inst, p, lv, demand, ss.str());
        const auto rep = check(inst, p, lv, demand, sol);
        std::fputs(rep.text(inst).c_str(), stdout);
        if (!rep.feasible()) return kInfeasible;
        std::fputs(solution_to_json(inst, sol).c_str(), stdout);
        print_energy(evaluate(inst, p, sol));
      }
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfig;
  }
  return 0;
}
