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

// Patient demand and the per-N traffic/timing parameter chain.

#ifndef FOGRES_DEMAND_HPP
#define FOGRES_DEMAND_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fogres/topology.hpp"

namespace fogres {

/// Workload constants. Defaults reproduce the bundled experiment.
struct Constants {
  double ecg_bits = 252800.0;    // raw ECG record (Pi)
  double analysed_bits = 256.0;  // analysed result (alpha)
  double tau_t = 240.0;          // end-to-end budget, s
  double tau_m = 30.0;           // recording time, s
  double prb_bps = 336.0;
  double cf_min = 230400.0;      // shared feedback capacity, bps
  double cs_min = 230400.0;      // shared storage capacity, bps
  double m = 0.002;              // processing s per patient
  double c_const = 4.6857;       // processing s per server
  std::optional<int> pat;        // patients per server; default 20% of total
  /// Use (PPS - IPS) instead of PPS for the processing window.
  bool eps_proportional_minus_idle = false;

  bool operator==(const Constants&) const = default;
};

Constants parse_constants(std::string_view json_text);
Constants load_constants(const std::string& path);

/// Patients per clinic, indexed by clinic position in NetworkInstance.
struct DemandSet {
  std::vector<int> patients;
  double fraction = 1.0;

  int total() const;
  bool operator==(const DemandSet&) const = default;
};

/// Patient counts as stored in the instance.
DemandSet base_demand(const NetworkInstance& inst);

/// Largest-remainder scaling to llround(fraction * total).
DemandSet scale_demand(const DemandSet& ds, double fraction);

/// Patients per server: 20% of the full demand, unless overridden.
int default_pat(const DemandSet& full, const Constants& k);

struct DerivedParams {
  int N = 0;
  int Pat = 0;
  int MaxP = 0;
  int Rp = 0;
  int Rf = 0;
  double delta_a = 0, delta_b = 0, delta_c = 0, delta_p = 0, delta_f = 0;
  double tau_a = 0, tau_b = 0, tau_c = 0, tau_p = 0, tau_max = 0;
  double tau_t = 0, tau_m = 0;
  double ecg_bits = 0, analysed_bits = 0;
  double m = 0, c_const = 0;
  double prb_bps = 0;
  bool eps_proportional_minus_idle = false;

  /// Per-server patient cap (Omega_max).
  int omega_max() const { return Pat; }
  /// Per-server storage cap (Lambda_max), bits.
  double lambda_max() const { return Pat * analysed_bits; }
};

DerivedParams derive_params(int N, int pat, const Constants& k = {});

/// m * patients + c * servers.
double processing_time(int patients, int servers, double m = 0.002, double c_const = 4.6857);

}  // namespace fogres

#endif  // FOGRES_DEMAND_HPP
