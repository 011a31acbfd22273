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


// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "fogres/exact.hpp"
#include "fogres/harness.hpp"
#include "fogres/heuristics.hpp"

using namespace fogres;

namespace {

const NetworkInstance& instance() {
  static const NetworkInstance inst = load_instance(FOGRES_DATA_DIR "/default_instance.json");
  return inst;
}

DerivedParams params(int N) { return derive_params(N, default_pat(base_demand(instance()), {})); }

void BM_Heuristic(benchmark::State& state, Level level) {
  HeuristicOptions o;
  o.parallel = state.range(0) != 0;
  const auto p = params(3);
  const auto demand = base_demand(instance());
  for (auto _ : state) benchmark::DoNotOptimize(run_heuristic(instance(), p, level, demand, o).energy.total);
}

// Exhaustive search on a small synthetic network that finishes well inside
// the budget.
void BM_Exact(benchmark::State& state) {
  InstanceData d = generate_synthetic(4, 3, 1, 5).data();
  int k = 0;
  for (auto& n : d.nodes) {
    if (n.kind == NodeKind::Clinic) n.patients = 1 + (k++ % 2);
  }
  const auto p = derive_params(3, 3);
  d.radio.prb_cap = p.Rf * 20;
  const NetworkInstance inst(std::move(d));
  ExactOptions o;
  o.parallel = state.range(0) != 0;
  o.budget_s = 120;
  for (auto _ : state) benchmark::DoNotOptimize(solve_exact(inst, p, Level::A, base_demand(inst), o).energy.total);
}

void BM_Sweep(benchmark::State& state) {
  SweepConfig cfg;
  cfg.demand_fractions = {0.2, 0.6, 1.0};
  cfg.N_values = {3, 5, 8};
  cfg.scenarios = {Level::A, Level::B, Level::C};
  cfg.threads = state.range(0) != 0 ? 0 : 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(cfg, instance(), {}).rows.size());
}

}  // namespace

BENCHMARK_CAPTURE(BM_Heuristic, eoriwg, Level::A)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Heuristic, eorig, Level::B)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Heuristic, eorign, Level::C)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Exact)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
