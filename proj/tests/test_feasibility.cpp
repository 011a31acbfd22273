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

#include "builders.hpp"
#include "fogres/feasibility.hpp"
#include "test_util.hpp"

using namespace fogres;

namespace {

// CL1 = 10 patients, CL12 = 5, everything else empty.
const NetworkInstance& small() {
  static const NetworkInstance inst = [] {
    std::vector<int> pts(16, 0);
    pts[0] = 10;
    pts[11] = 5;
    return test::with_patients(test::default_instance(), pts);
  }();
  return inst;
}

int id(const char* name) { return small().index_of(name); }

// Primary on ONU1, secondary on OLT1.
Solution golden(Level level, const DerivedParams& p) {
  const int cl1 = id("CL1"), cl12 = id("CL12");
  std::vector<StreamAlloc> raw = {{cl1, id("BS1"), id("ONU1"), 0, 10}, {cl12, id("BS1"), id("ONU1"), 0, 5}};
  if (level != Level::NonRes) {
    raw.push_back({cl1, id("BS2"), id("OLT1"), 1, 10});
    raw.push_back({cl12, id("BS1"), id("OLT1"), 1, 5});
  }
  return test::build_solution(small(), p, level, raw);
}

FeasibilityReport run(Level level, const DerivedParams& p, const Solution& s) {
  return check(small(), p, level, base_demand(small()), s);
}

}  // namespace

TEST_CASE("golden solutions are feasible") {
  const auto p = derive_params(3, 20);
  for (Level l : {Level::NonRes, Level::A, Level::B}) {
    const auto r = run(l, p, golden(l, p));
    INFO(to_string(l), "\n", r.text(small()));
    CHECK(r.feasible());
  }
}

TEST_CASE("single-field mutations are tagged") {
  const auto p = derive_params(3, 20);
  const Solution base = golden(Level::A, p);
  const int s = small().clinic_pos(id("CL1"));
  const int onu1 = small().fog_pos(id("ONU1"));

  SUBCASE("omega sum") {
    Solution m = base;
    m.omega_a[static_cast<std::size_t>(s)][static_cast<std::size_t>(onu1)] += 1;
    const auto r = run(Level::A, p, m);
    CHECK(r.has("Eq.34"));
    CHECK(r.has("Eq.36"));
  }
  SUBCASE("PRB count") {
    Solution m = base;
    m.beta_a[static_cast<std::size_t>(small().bs_pos(id("BS1")))] += 1;
    const auto r = run(Level::A, p, m);
    CHECK(r.has("Eq.60"));
    CHECK(r.violations.size() == 1);
  }
  SUBCASE("activation flag") {
    Solution m = base;
    m.flows.zeta_a[static_cast<std::size_t>(id("ONU1"))] = 0;
    CHECK(run(Level::A, p, m).has("Eq.50"));
    m = base;
    m.flows.zeta_a[static_cast<std::size_t>(id("ONU5"))] = 1;
    CHECK(run(Level::A, p, m).has("Eq.49b"));
  }
  SUBCASE("processing time") {
    Solution m = base;
    m.tau_pa[static_cast<std::size_t>(onu1)] += 0.5;
    CHECK(run(Level::A, p, m).has("Eq.68"));
  }
  SUBCASE("host indicator") {
    Solution m = base;
    m.y[static_cast<std::size_t>(onu1)] = 0;
    CHECK(run(Level::A, p, m).has("Eq.48"));
    CHECK(run(Level::B, p, m).has("Eq.72"));
  }
  SUBCASE("server cap") {
    Solution m = base;
    m.phi_a[static_cast<std::size_t>(onu1)] = 0;  // 15 patients, no server
    m.tau_pa[static_cast<std::size_t>(onu1)] = p.m * 15;
    const auto r = run(Level::A, p, m);
    CHECK(r.has("Eq.66"));
    CHECK(r.has("Eq.70"));
  }
  SUBCASE("too many servers on one node") {
    Solution m = base;
    m.phi_a[static_cast<std::size_t>(onu1)] = 4;
    CHECK(run(Level::A, p, m).has("Eq.49"));
  }
  SUBCASE("unassembled") {
    Solution m = empty_solution(small(), Level::A);
    m.pp.clear();
    CHECK(run(Level::A, p, m).has("structure"));
  }
}

TEST_CASE("report text format") {
  const auto p = derive_params(3, 20);
  Solution m = golden(Level::A, p);
  m.beta_a[static_cast<std::size_t>(small().bs_pos(id("BS1")))] += 4;
  const auto r = run(Level::A, p, m);
  CHECK(r.text(small()).rfind("VIOLATION eq=Eq.60 node=BS1 detail=", 0) == 0);
}

TEST_CASE("server_lower_bound") {
  CHECK(server_lower_bound(300, 60, false) == 5);
  CHECK(server_lower_bound(300, 60, true) == 10);
  CHECK(server_lower_bound(301, 60, true) == 12);
  CHECK(server_lower_bound(0, 60, true) == 0);
}

TEST_CASE("co-located classes: allowed for A, rejected for B and C") {
  const auto p = derive_params(3, 20);
  const int cl1 = id("CL1"), cl12 = id("CL12"), olt1 = id("OLT1");
  const std::vector<StreamAlloc> raw = {{cl1, id("BS1"), olt1, 0, 10},
                                        {cl12, id("BS1"), olt1, 0, 5},
                                        {cl1, id("BS2"), olt1, 1, 10},
                                        {cl12, id("BS1"), olt1, 1, 5}};
  const Solution a = test::build_solution(small(), p, Level::A, raw);
  CHECK(run(Level::A, p, a).feasible());
  const Solution b = test::build_solution(small(), p, Level::B, raw);
  CHECK(run(Level::B, p, b).has("Eq.72"));
}

TEST_CASE("scenario C: one cluster per class") {
  const auto p = derive_params(3, 20);
  const int cl1 = id("CL1"), cl12 = id("CL12");
  const std::vector<StreamAlloc> raw = {{cl1, id("BS1"), id("ONU1"), 0, 10},
                                        {cl12, id("BS1"), id("ONU1"), 0, 5},
                                        {cl1, id("BS8"), id("OLT2"), 1, 10},
                                        {cl12, id("BS13"), id("OLT2"), 1, 5}};
  const Solution c = test::build_solution(small(), p, Level::C, raw);
  const auto r = run(Level::C, p, c);
  INFO(r.text(small()));
  CHECK(r.feasible());
  // C implies B implies A
  CHECK(run(Level::B, p, c).feasible());
  CHECK(run(Level::A, p, c).feasible());

  // the golden B solution shares OLT1 between classes
  const Solution g = golden(Level::B, p);
  const auto rc = run(Level::C, p, g);
  CHECK(rc.has("Eq.96"));
}

TEST_CASE("storage and patient caps bind at the same point") {
  // Lambda_max = Pat * alpha, so Eq.70 fires exactly when Eq.66 does.
  for (int pat : {1, 7, 10, 60}) {
    const auto p = derive_params(3, pat);
    for (int load = 0; load <= 3 * pat; ++load) {
      for (int phi = 0; phi <= 3; ++phi) {
        const bool patient_cap = load > p.omega_max() * phi;
        const bool storage_cap = load * p.analysed_bits > p.lambda_max() * phi * (1.0 + 1e-12);
        CHECK(patient_cap == storage_cap);
      }
    }
  }
}

TEST_CASE("Omega_max binds exactly") {
  const int cl1 = id("CL1"), cl12 = id("CL12"), onu1 = id("ONU1");
  // 15 patients fit on one server when Pat = 15, not when Pat = 14
  for (int pat : {14, 15}) {
    const auto p = derive_params(3, pat);
    Solution s = test::build_solution(small(), p, Level::NonRes,
                                      {{cl1, id("BS1"), onu1, 0, 10}, {cl12, id("BS1"), onu1, 0, 5}});
    s.phi_a[static_cast<std::size_t>(small().fog_pos(onu1))] = 1;
    assemble(small(), p, s);
    CHECK(run(Level::NonRes, p, s).feasible() == (pat == 15));
  }
}
