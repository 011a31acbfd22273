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

// Network, cloud and fog energy of a routed placement.

#ifndef FOGRES_ENERGY_HPP
#define FOGRES_ENERGY_HPP

#include <string>
#include <vector>

#include "fogres/demand.hpp"
#include "fogres/solution.hpp"
#include "fogres/topology.hpp"

namespace fogres {

/// Sub-terms are in joules before PUE; component totals include PUE.
struct EnergyBreakdown {
  // access
  double ebsp = 0, ebsf = 0;
  double eonup = 0, eonuf = 0, eonus = 0;
  double eoltp = 0, eoltf = 0, eolts = 0;
  // metro and core
  double ecasp = 0, ecasf = 0, ecass = 0, ears = 0;
  double ecrs = 0;
  // cloud
  double eclrs = 0, eclss = 0, ecss = 0, ecsts = 0;
  // fog
  double eps = 0;
  double eesp = 0, eesf = 0, eess = 0;

  double e_access = 0, e_metro = 0, e_core = 0, e_cloud = 0, e_fog = 0;
  double total = 0;
  double pue_network = 1.0, pue_fog_cloud = 1.0;

  double etbs() const { return ebsp + ebsf; }
  double etonu() const { return eonup + eonuf + eonus; }
  double etolt() const { return eoltp + eoltf + eolts; }
  double etes() const { return eesp + eesf + eess; }
  /// Processing servers including PUE.
  double processing() const { return eps * pue_fog_cloud; }
  /// Everything else: network devices, cloud relays and fog switches.
  double networking() const { return total - processing(); }

  struct Row {
    std::string component;
    std::string sub_term;
    double joules;
  };
  /// Every sub-term plus one "total" row per component and the grand total.
  std::vector<Row> rows() const;
};

/// (idle * x * activation + load * (max - idle) / capacity) * task_time.
double device_term(const DeviceSpec& spec, bool active, double load, double task_time);

EnergyBreakdown evaluate(const NetworkInstance& inst, const DerivedParams& params, const Solution& sol);

/// Rows of `scenario,demand_fraction,N,component,sub_term,joules`.
std::string breakdown_csv_header();
std::string breakdown_csv_rows(const EnergyBreakdown& e, std::string_view scenario, double demand_fraction, int N);

}  // namespace fogres

#endif  // FOGRES_ENERGY_HPP
