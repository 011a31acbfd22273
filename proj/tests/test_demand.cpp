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

#include <cmath>

#include "doctest.h"
#include "fogres/demand.hpp"
#include "reference_tables.hpp"
#include "test_util.hpp"

using namespace fogres;

TEST_CASE("scale_demand on the bundled instance") {
  const DemandSet base = base_demand(test::default_instance());
  CHECK(base.total() == 300);
  for (double f : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    const DemandSet s = scale_demand(base, f);
    CHECK(s.total() == std::lround(f * 300));
    CHECK(s.fraction == doctest::Approx(f));
    for (std::size_t i = 0; i < s.patients.size(); ++i) {
      // largest remainder never moves a clinic by a whole patient
      CHECK(std::fabs(s.patients[i] - f * base.patients[i]) < 1.0);
    }
  }
  CHECK(scale_demand(base, 1.0) == DemandSet{base.patients, 1.0});
  CHECK_THROWS_AS(scale_demand(base, 0.0), InvalidFraction);
  CHECK_THROWS_AS(scale_demand(base, 1.5), InvalidFraction);
  CHECK_THROWS_AS(scale_demand(base, -0.2), InvalidFraction);
}

TEST_CASE("largest remainder hand example") {
  // 0.5 * {3, 3, 1}: floors {1, 1, 0}, remainders all 0.5, target 4 -> first two tied clinics
  const DemandSet s = scale_demand(DemandSet{{3, 3, 1}, 1.0}, 0.5);
  CHECK(s.patients == std::vector<int>{2, 2, 0});
}

TEST_CASE("default patients per server is 20% of the full demand") {
  const DemandSet base = base_demand(test::default_instance());
  CHECK(default_pat(base, Constants{}) == 60);
  Constants k;
  k.pat = 25;
  CHECK(default_pat(base, k) == 25);
}

TEST_CASE("derived parameter chain, N = 3 by hand") {
  const DerivedParams p = derive_params(3, 60);
  CHECK(p.MaxP == 180);
  CHECK(p.delta_f == doctest::Approx(1280.0));
  CHECK(p.Rf == 3);
  CHECK(p.delta_b == doctest::Approx(1008.0));
  CHECK(p.tau_p == doctest::Approx(4.8057));
  CHECK(p.tau_max == doctest::Approx(240.0 - 30.0 - 256.0 / 1008.0 - 4.8057));
  CHECK(p.delta_p == doctest::Approx(1233.5).epsilon(1e-4));
  CHECK(p.Rp == 4);
  CHECK(p.delta_a == doctest::Approx(1344.0));
  CHECK(p.tau_a == doctest::Approx(252800.0 / 1344.0));
  CHECK(p.delta_c == doctest::Approx(1280.0));
  CHECK(p.tau_c == doctest::Approx(0.2));
  CHECK(p.omega_max() == 60);
  CHECK(p.lambda_max() == doctest::Approx(60 * 256.0));
}

TEST_CASE("published rate table") {
  for (const auto& row : test::kRateTable) {
    CAPTURE(row.N);
    const DerivedParams p = derive_params(row.N, 60);
    CHECK(test::three_sig_figs(p.delta_a / 1000.0, row.delta_a_kbps));
    CHECK(test::three_sig_figs(p.tau_a, row.tau_a));
    CHECK(test::three_sig_figs(p.delta_b / 1000.0, row.delta_b_kbps));
    CHECK(test::three_sig_figs(p.tau_b, row.tau_b));
    CHECK(test::three_sig_figs(p.delta_c / 1000.0, row.delta_c_kbps));
    CHECK(test::three_sig_figs(p.tau_c, row.tau_c));
  }
}

TEST_CASE("parameter properties over N") {
  DerivedParams prev = derive_params(1, 60);
  for (int N = 1; N <= 10; ++N) {
    const DerivedParams p = derive_params(N, 60);
    CHECK(p.MaxP == N * 60);
    CHECK(p.delta_a == doctest::Approx(p.Rp * 336.0));
    CHECK(p.delta_b == doctest::Approx(p.Rf * 336.0));
    CHECK(p.delta_a == doctest::Approx(1344.0));
    CHECK(p.tau_m + p.tau_a + processing_time(p.Pat, 1) + p.tau_b <= p.tau_t);
    if (N > 1) {
      CHECK(p.delta_b <= prev.delta_b);
      CHECK(p.delta_c <= prev.delta_c);
      CHECK(p.tau_b >= prev.tau_b);
      CHECK(p.tau_c >= prev.tau_c);
    }
    prev = p;
  }
  CHECK_THROWS_AS(derive_params(12, 60), ZeroRate);  // 230400/720 < 336
  Constants tight;
  tight.tau_t = 34.0;
  CHECK_THROWS_AS(derive_params(3, 60, tight), InfeasibleDeadline);
  CHECK_THROWS_AS(derive_params(0, 60), InvalidConfig);
}

TEST_CASE("processing_time") {
  CHECK(processing_time(60, 1) == doctest::Approx(4.8057));
  CHECK(processing_time(0, 0) == 0.0);
  CHECK(processing_time(120, 2) == doctest::Approx(9.6114));
  CHECK_THROWS_AS(processing_time(5, 0), NoServer);
}

TEST_CASE("constants file") {
  const Constants k = load_constants(test::data_path("default_constants.json"));
  CHECK(k.ecg_bits == 252800.0);
  CHECK(k.cf_min == 230400.0);
  CHECK(k.pat.value() == 60);
  CHECK_FALSE(k.eps_proportional_minus_idle);
  CHECK_THROWS_AS(parse_constants(R"({"format":1,"prb_bps":0})"), ParseError);
  CHECK_THROWS_AS(parse_constants("[]"), ParseError);
  CHECK(parse_constants(R"({"format":1})") == Constants{});
}
