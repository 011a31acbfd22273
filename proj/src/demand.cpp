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

#include "fogres/demand.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace fogres {

Constants parse_constants(std::string_view json_text) {
  using nlohmann::json;
  Constants k;
  try {
    const json j = json::parse(json_text);
    if (j.value("format", 0) != 1) throw ParseError("unsupported constants format (expected \"format\": 1)");
    k.ecg_bits = j.value("ecg_bits", k.ecg_bits);
    k.analysed_bits = j.value("analysed_bits", k.analysed_bits);
    k.tau_t = j.value("tau_t", k.tau_t);
    k.tau_m = j.value("tau_m", k.tau_m);
    k.prb_bps = j.value("prb_bps", k.prb_bps);
    k.cf_min = j.value("cf_min", k.cf_min);
    k.cs_min = j.value("cs_min", k.cs_min);
    k.m = j.value("m", k.m);
    k.c_const = j.value("c_const", k.c_const);
    if (j.contains("pat") && !j["pat"].is_null()) k.pat = j["pat"].get<int>();
    k.eps_proportional_minus_idle = j.value("eps_proportional_minus_idle", false);
  } catch (const json::exception& e) {
    throw ParseError(std::string("constants JSON: ") + e.what());
  }
  for (double v : {k.ecg_bits, k.analysed_bits, k.tau_t, k.prb_bps, k.cf_min, k.cs_min}) {
    if (!(v > 0.0)) throw ParseError("constants: sizes, rates and tau_t must be positive");
  }
  if (k.tau_m < 0.0 || k.m < 0.0 || k.c_const < 0.0) throw ParseError("constants: negative time constant");
  if (k.pat && *k.pat <= 0) throw ParseError("constants: pat must be positive");
  return k;
}

Constants load_constants(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open constants file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_constants(ss.str());
}

int DemandSet::total() const { return std::accumulate(patients.begin(), patients.end(), 0); }

DemandSet base_demand(const NetworkInstance& inst) {
  DemandSet ds;
  for (int c : inst.clinics()) ds.patients.push_back(inst.node(c).patients);
  return ds;
}

DemandSet scale_demand(const DemandSet& ds, double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw InvalidFraction("demand fraction must lie in (0, 1], got " + std::to_string(fraction));
  }
  const std::size_t n = ds.patients.size();
  DemandSet out;
  out.fraction = ds.fraction * fraction;
  out.patients.resize(n);
  const long target = std::llround(fraction * ds.total());
  std::vector<double> rem(n);
  long assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double exact = fraction * ds.patients[i];
    out.patients[i] = static_cast<int>(std::floor(exact));
    rem[i] = exact - out.patients[i];
    assigned += out.patients[i];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t r = 0; assigned < target && r < n; ++r, ++assigned) ++out.patients[order[r]];
  return out;
}

int default_pat(const DemandSet& full, const Constants& k) {
  if (k.pat) return *k.pat;
  return std::max(1, static_cast<int>(std::llround(0.2 * full.total())));
}

DerivedParams derive_params(int N, int pat, const Constants& k) {
  if (N < 1) throw InvalidConfig("servers per node must be >= 1");
  if (pat < 1) throw InvalidConfig("patients per server must be >= 1");
  DerivedParams p;
  p.N = N;
  p.Pat = pat;
  p.tau_t = k.tau_t;
  p.tau_m = k.tau_m;
  p.ecg_bits = k.ecg_bits;
  p.analysed_bits = k.analysed_bits;
  p.m = k.m;
  p.c_const = k.c_const;
  p.prb_bps = k.prb_bps;
  p.eps_proportional_minus_idle = k.eps_proportional_minus_idle;

  p.MaxP = N * pat;
  p.delta_f = k.cf_min / p.MaxP;
  // Floor keeps the feedback rate within the shared capacity.
  p.Rf = static_cast<int>(std::floor(p.delta_f / k.prb_bps));
  if (p.Rf == 0) {
    throw ZeroRate("feedback rate " + std::to_string(p.delta_f) + " bps is below one PRB at N=" + std::to_string(N));
  }
  p.delta_b = p.Rf * k.prb_bps;
  p.tau_b = k.analysed_bits / p.delta_b;
  p.tau_p = processing_time(pat, 1, k.m, k.c_const);
  p.tau_max = k.tau_t - k.tau_m - p.tau_b - p.tau_p;
  if (!(p.tau_max > 0.0)) {
    throw InfeasibleDeadline("no time left for raw upload (tau_max = " + std::to_string(p.tau_max) + " s)");
  }
  p.delta_p = k.ecg_bits / p.tau_max;
  p.Rp = static_cast<int>(std::ceil(p.delta_p / k.prb_bps));
  p.delta_a = p.Rp * k.prb_bps;
  p.tau_a = k.ecg_bits / p.delta_a;
  p.delta_c = k.cs_min / p.MaxP;
  p.tau_c = k.analysed_bits / p.delta_c;
  return p;
}

double processing_time(int patients, int servers, double m, double c_const) {
  if (patients > 0 && servers <= 0) throw NoServer(std::to_string(patients) + " patients but no server");
  return m * patients + c_const * servers;
}

}  // namespace fogres
