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

// Small solution builders for tests.

#ifndef FOGRES_TEST_BUILDERS_HPP
#define FOGRES_TEST_BUILDERS_HPP

#include <random>
#include <vector>

#include "fogres/solution.hpp"

namespace fogres::test {

/// Omega from the raw allocations, phi = ceil(load / Pat); feedback mirrors
/// the raw base stations unless given.
inline Solution build_solution(const NetworkInstance& inst, const DerivedParams& p, Level level,
                               std::vector<StreamAlloc> raw, std::vector<StreamAlloc> feedback = {}) {
  Solution s = empty_solution(inst, level);
  for (const auto& a : raw) {
    auto& m = a.cls == 0 ? s.omega_a : s.omega_b;
    m[static_cast<std::size_t>(inst.clinic_pos(a.clinic))][static_cast<std::size_t>(inst.fog_pos(a.fog))] +=
        a.patients;
  }
  for (std::size_t d = 0; d < inst.fog_nodes().size(); ++d) {
    int la = 0, lb = 0;
    for (std::size_t c = 0; c < s.omega_a.size(); ++c) la += s.omega_a[c][d], lb += s.omega_b[c][d];
    s.phi_a[d] = (la + p.Pat - 1) / p.Pat;
    s.phi_b[d] = (lb + p.Pat - 1) / p.Pat;
  }
  s.feedback = feedback.empty() ? raw : std::move(feedback);
  s.raw = std::move(raw);
  assemble(inst, p, s);
  return s;
}

/// Copy of `inst` with new clinic patient counts (by clinic position).
inline NetworkInstance with_patients(const NetworkInstance& inst, const std::vector<int>& patients) {
  InstanceData d = inst.data();
  std::size_t k = 0;
  for (auto& n : d.nodes) {
    if (n.kind == NodeKind::Clinic) n.patients = patients.at(k++);
  }
  return NetworkInstance(std::move(d));
}

struct TinyCase {
  NetworkInstance inst;
  DerivedParams p;
  DemandSet demand;
};

/// Randomised instance small enough for exhaustive search: 2-4 clinics,
/// 1-4 patients in total, one or two clusters with a BS each (two BSs when
/// there is a single cluster), and a PRB cap that makes feedback PRBs bind.
inline TinyCase tiny_case(std::uint64_t seed, int clusters) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int n_clinics = pick(2, 4);
  const int n_bs = clusters == 1 ? pick(1, 2) : clusters;
  const int N = pick(1, 3), pat = pick(1, 3);
  const DerivedParams p = derive_params(N, pat);
  InstanceData d = generate_synthetic(n_clinics, n_bs, clusters, rng()).data();
  d.radio.prb_cap = std::max(p.Rp, p.Rf) * pick(2, 6) + pick(0, p.Rf - 1);
  std::vector<int> pts(static_cast<std::size_t>(n_clinics), 0);
  const int total = pick(1, 4);
  for (int k = 0; k < total; ++k) ++pts[static_cast<std::size_t>(pick(0, n_clinics - 1))];
  std::size_t k = 0;
  for (auto& n : d.nodes) {
    if (n.kind == NodeKind::Clinic) n.patients = pts[k++];
  }
  NetworkInstance inst(std::move(d));
  DemandSet demand = base_demand(inst);
  return {std::move(inst), p, std::move(demand)};
}

}  // namespace fogres::test

#endif  // FOGRES_TEST_BUILDERS_HPP
