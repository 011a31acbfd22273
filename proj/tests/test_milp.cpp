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


#include <doctest.h>

#include <filesystem>

#include "builders.hpp"
#include "fogres/exact.hpp"
#include "fogres/feasibility.hpp"
#include "fogres/heuristics.hpp"
#include "fogres/milp.hpp"
#include "lp_oracle.hpp"
#include "test_util.hpp"

using namespace fogres;

namespace {

// Row count per tag from the set sizes alone.
std::map<std::string, long> expected_rows(const NetworkInstance& inst, Level level) {
  const long C = static_cast<long>(inst.clinics().size()), F = static_cast<long>(inst.fog_nodes().size());
  const long B = static_cast<long>(inst.base_stations().size());
  const long Nn = static_cast<long>(inst.node_count()) - C;
  long L = 0, Lc = 0, Lx = 0, D = 0;
  for (const auto& l : inst.links()) {
    ++L;
    if (inst.kind(l.a) == NodeKind::Clinic || inst.kind(l.b) == NodeKind::Clinic) ++Lc;
    if (inst.is_access(l.a) && inst.is_access(l.b)) ++Lx;
  }
  for (std::size_t i = 0; i < inst.node_count(); ++i) D += inst.is_access(static_cast<int>(i));
  const bool res = level != Level::NonRes, split = level == Level::C;
  std::map<std::string, long> r;
  auto add = [&](const std::string& tag, long n) { r[tag] += n; };
  add("Eq.32", C * F + F);
  add("Eq.34", C);
  if (res) add("Eq.33", C * F + F), add("Eq.35", C);
  if (split) {
    for (auto t : {"Eq.73", "Eq.74", "Eq.75", "Eq.76"}) add(t, C * F);
    add("Eq.77", F), add("Eq.78", F);
    for (auto t : {"Eq.79", "Eq.80", "Eq.81", "Eq.82"}) add(t, C * F * (Nn + 1));
    add("Eq.83", F * Nn), add("Eq.84", F * Nn);
  } else {
    add("Eq.36", C * F), add("Eq.37", C * F), add("Eq.38", F);
    add("Eq.39", C * F * (Nn + 1)), add("Eq.40", C * F * (Nn + 1)), add("Eq.41", F * Nn);
  }
  for (auto t : {"Eq.42", "Eq.43", "Eq.44"}) add(t, Nn);
  add("Eq.45", 2 * L - Lc), add("Eq.46", 2 * L - Lc), add("Eq.47", 2 * (L - Lc));
  add(level == Level::B || level == Level::C ? "Eq.72" : "Eq.48", F);
  add("Eq.49", F);
  for (auto t : {"Eq.49b", "Eq.50", "Eq.51", "Eq.52", "Eq.53", "Eq.54", "Eq.55", "Eq.56", "Eq.57"}) add(t, Nn);
  add("Eq.58", C * B), add("Eq.59", C), add("Eq.60", B), add("Eq.61", B);
  add("Eq.62", C * B), add("Eq.63", C), add("Eq.64", B), add("Eq.65", B);
  for (auto t : {"Eq.66", "Eq.68", "Eq.70"}) add(t, F);
  if (res) {
    for (auto t : {"Eq.67", "Eq.69", "Eq.71"}) add(t, F);
  }
  if (split) {
    for (auto t : {"Eq.85", "Eq.86", "Eq.87", "Eq.88"}) add(t, 2 * Lx);
    add("Eq.89", 2 * Lx), add("Eq.90", Lx), add("Eq.91", Lx);
    for (auto t : {"Eq.92", "Eq.93", "Eq.94", "Eq.95", "Eq.96"}) add(t, D);
  }
  return r;
}

DerivedParams default_params(int N) { return derive_params(N, default_pat(base_demand(test::default_instance()), {})); }

// Exported rows hold at the solution, the objective equals evaluate(), and
// the imported solution is feasible with the same energy.
void round_trip(const NetworkInstance& inst, const DerivedParams& p, Level level, const DemandSet& demand,
                const Solution& sol) {
  const auto lp = test::parse_lp(milp_text(inst, p, level, demand));
  const std::string vals = milp_values(inst, p, level, demand, sol);
  const auto assignment = test::parse_values(vals);
  std::string undeclared;
  for (const auto& [name, v] : assignment) {
    if (!lp.columns.count(name) && !lp.generals.count(name) && !lp.binaries.count(name)) undeclared = name;
  }
  CHECK_MESSAGE(undeclared.empty(), undeclared);
  const auto res = test::evaluate_lp(lp, assignment);
  CHECK_MESSAGE(res.failures.empty(), (res.failures.empty() ? std::string() : res.failures.front()));
  const double e = evaluate(inst, p, sol).total;
  CHECK(test::rel_close(res.objective, e, 1e-9));

  const Solution back = import_milp_values(inst, p, level, demand, vals);
  CHECK(check(inst, p, level, demand, back).text(inst) == "");
  CHECK(back.omega_a == sol.omega_a);
  CHECK(back.omega_b == sol.omega_b);
  CHECK(back.phi_a == sol.phi_a);
  CHECK(back.phi_b == sol.phi_b);
  CHECK(back.pp == sol.pp);
  CHECK(back.pf == sol.pf);
  CHECK(test::rel_close(evaluate(inst, p, back).total, e, 1e-9));
}

}  // namespace

TEST_CASE("row counts follow the set sizes") {
  const auto& inst = test::default_instance();
  const auto p = default_params(3);
  for (Level level : {Level::NonRes, Level::A, Level::B, Level::C}) {
    INFO(to_string(level));
    MilpStats st;
    const auto lp = test::parse_lp(milp_text(inst, p, level, base_demand(inst), &st));
    const auto want = expected_rows(inst, level);
    CHECK(lp.rows_by_tag == want);
    CHECK(st.rows_by_tag == want);
    long total = 0;
    for (const auto& [t, n] : want) total += n;
    CHECK(st.rows == total);
    CHECK(static_cast<long>(lp.rows.size()) == total);
    CHECK(st.generals == static_cast<long>(lp.generals.size()));
    CHECK(st.binaries == static_cast<long>(lp.binaries.size()));
  }
  // Also on a small synthetic network with a different shape.
  const auto small = generate_synthetic(5, 4, 2, 3);
  for (Level level : {Level::A, Level::C}) {
    const auto lp = test::parse_lp(milp_text(small, derive_params(2, 2), level, base_demand(small)));
    CHECK(lp.rows_by_tag == expected_rows(small, level));
  }
}

TEST_CASE("column sets per scenario") {
  const auto& inst = test::default_instance();
  const auto p = default_params(3);
  auto has_prefix = [](const test::Lp& lp, const std::string& pre) {
    for (const auto& c : lp.columns) {
      if (c.rfind(pre, 0) == 0) return true;
    }
    return false;
  };
  const auto nonres = test::parse_lp(milp_text(inst, p, Level::NonRes, base_demand(inst)));
  CHECK_FALSE(has_prefix(nonres, "wb_"));
  CHECK_FALSE(has_prefix(nonres, "phb_"));
  CHECK_FALSE(has_prefix(nonres, "Yb_"));
  CHECK(has_prefix(nonres, "wa_"));
  CHECK(has_prefix(nonres, "z_"));

  const auto b = test::parse_lp(milp_text(inst, p, Level::B, base_demand(inst)));
  CHECK(has_prefix(b, "wb_"));
  CHECK_FALSE(has_prefix(b, "z_"));
  CHECK_FALSE(has_prefix(b, "La_"));

  const auto c = test::parse_lp(milp_text(inst, p, Level::C, base_demand(inst)));
  CHECK(has_prefix(c, "pa_"));
  CHECK(has_prefix(c, "pb_"));
  CHECK_FALSE(has_prefix(c, "p_"));
  long access_links = 0;
  for (const auto& l : inst.links()) access_links += inst.is_access(l.a) && inst.is_access(l.b);
  long la = 0, lb = 0;
  for (const auto& v : c.binaries) {
    const bool is_a = v.rfind("La_", 0) == 0, is_b = v.rfind("Lb_", 0) == 0;
    if (!is_a && !is_b) continue;
    (is_a ? la : lb) += 1;
    // Both endpoints are access-layer nodes.
    bool found = false;
    for (const auto& l : inst.links()) {
      for (auto [x, y] : {std::pair{l.a, l.b}, std::pair{l.b, l.a}}) {
        if (v.substr(3) == inst.id_of(x) + "_" + inst.id_of(y)) {
          found = true;
          CHECK(inst.is_access(x));
          CHECK(inst.is_access(y));
        }
      }
    }
    CHECK_MESSAGE(found, v);
  }
  CHECK(la == 2 * access_links);
  CHECK(lb == 2 * access_links);
}

TEST_CASE("file layout") {
  const auto& inst = test::default_instance();
  const std::string text = milp_text(inst, default_params(5), Level::A, base_demand(inst));
  std::size_t pos = 0;
  for (const char* s : {"Minimize", "Subject To", "Bounds", "Generals", "Binaries", "End"}) {
    const auto at = text.find(std::string("\n") + s + "\n", pos);
    REQUIRE_MESSAGE(at != std::string::npos, s);
    pos = at + 1;
  }
  CHECK(text.find("\\* Eq.39 *\\") != std::string::npos);
  std::istringstream in(text);
  std::size_t longest = 0;
  for (std::string line; std::getline(in, line);) longest = std::max(longest, line.size());
  CHECK(longest < 510);
  // Server bound is N.
  CHECK(text.find(" 0 <= pha_ONU1 <= 5\n") != std::string::npos);
}

TEST_CASE("exact solutions of tiny instances round-trip") {
  ExactOptions o;
  o.parallel = false;
  o.budget_s = 60;
  int done = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (Level level : {Level::NonRes, Level::A, Level::B, Level::C}) {
      const auto tc = test::tiny_case(seed * 101, level == Level::C ? 2 : 1);
      INFO("seed ", seed, " level ", to_string(level));
      try {
        const auto ex = solve_exact(tc.inst, tc.p, level, tc.demand, o);
        round_trip(tc.inst, tc.p, level, tc.demand, ex.solution);
        ++done;
      } catch (const Infeasible&) {
      }
    }
  }
  CHECK(done >= 10);
}

TEST_CASE("heuristic solutions on the default instance round-trip") {
  const auto& inst = test::default_instance();
  const auto p = default_params(3);
  for (Level level : {Level::NonRes, Level::A, Level::B, Level::C}) {
    for (double f : {0.2, 1.0}) {
      INFO(to_string(level), " ", f);
      const auto demand = scale_demand(base_demand(inst), f);
      round_trip(inst, p, level, demand, run_heuristic(inst, p, level, demand, {}).solution);
    }
  }
}

TEST_CASE("evaluator catches a broken assignment") {
  const auto& inst = test::default_instance();
  const auto p = default_params(3);
  const auto demand = base_demand(inst);
  const auto sol = run_heuristic(inst, p, Level::C, demand, {}).solution;
  const auto lp = test::parse_lp(milp_text(inst, p, Level::C, demand));
  auto vals = test::parse_values(milp_values(inst, p, Level::C, demand, sol));
  // Put a secondary flow on a link the primary class uses.
  std::string victim;
  for (const auto& [name, v] : vals) {
    if (name.rfind("La_", 0) == 0 && v == 1.0) victim = "Lb_" + name.substr(3);
  }
  REQUIRE(!victim.empty());
  vals[victim] = 1.0;
  const auto res = test::evaluate_lp(lp, vals);
  bool eq89 = false;
  for (const auto& f : res.failures) eq89 = eq89 || f.rfind("e89_", 0) == 0;
  CHECK(eq89);
}

TEST_CASE("import errors") {
  const auto tc = test::tiny_case(7, 1);
  CHECK_THROWS_AS(import_milp_values(tc.inst, tc.p, Level::A, tc.demand, "nosuchvar 1\n"), ParseError);
  const std::string w = "wa_" + tc.inst.id_of(tc.inst.clinics()[0]) + "_" + tc.inst.id_of(tc.inst.fog_nodes()[0]);
  CHECK_THROWS_AS(import_milp_values(tc.inst, tc.p, Level::A, tc.demand, w + " 0.5\n"), ParseError);
  CHECK_THROWS_AS(import_milp_values(tc.inst, tc.p, Level::A, tc.demand, w + "\n"), ParseError);
  // Comments and blank lines are fine; an all-zero assignment imports as empty.
  const Solution s = import_milp_values(tc.inst, tc.p, Level::A, tc.demand, "# values\n\n\\ more\n");
  CHECK(s.servers() == 0);
}

TEST_CASE("write failure is an IoError") {
  const auto tc = test::tiny_case(3, 1);
  const auto dir = std::filesystem::temp_directory_path() / "fogres_no_such_dir_xyz";
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(export_milp(tc.inst, tc.p, Level::A, tc.demand, (dir / "m.lp").string()), IoError);
  const auto ok = std::filesystem::temp_directory_path() / "fogres_milp_test.lp";
  const auto st = export_milp(tc.inst, tc.p, Level::A, tc.demand, ok.string());
  CHECK(st.rows == static_cast<long>(test::parse_lp(test::read_file(ok.string())).rows.size()));
  std::filesystem::remove(ok);
}
