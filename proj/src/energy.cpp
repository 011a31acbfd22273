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

#include "fogres/energy.hpp"

#include <sstream>

namespace fogres {

double device_term(const DeviceSpec& spec, bool active, double load, double task_time) {
  if (load < 0.0) throw InvalidConfig("negative device load");
  if (!active && load > 0.0) throw InconsistentSolution("load on an inactive device");
  if (load > spec.capacity * (1.0 + 1e-12)) {
    throw OverCapacity("device load " + std::to_string(load) + " exceeds capacity " + std::to_string(spec.capacity));
  }
  const double idle = active ? spec.idle_power * spec.idle_fraction : 0.0;
  return (idle + load * spec.load_coefficient()) * task_time;
}

namespace {

bool solution_is_empty(const Solution& sol) {
  for (const auto& row : sol.omega_a) {
    for (int v : row) if (v != 0) return false;
  }
  for (const auto& row : sol.omega_b) {
    for (int v : row) if (v != 0) return false;
  }
  for (int v : sol.phi_a) if (v != 0) return false;
  for (int v : sol.phi_b) if (v != 0) return false;
  return sol.raw.empty() && sol.feedback.empty();
}

void finish(EnergyBreakdown& e) {
  const double eta = e.pue_network, c = e.pue_fog_cloud;
  e.e_access = (e.etbs() + e.etonu() + e.etolt()) * eta;
  e.e_metro = (e.ecasp + e.ecasf + e.ecass + e.ears) * eta;
  e.e_core = e.ecrs * eta;
  e.e_cloud = (e.eclrs + e.eclss + e.ecss + e.ecsts) * c;
  e.e_fog = e.eps * c + e.etes() * eta;
  e.total = e.e_access + e.e_metro + e.e_core + e.e_cloud + e.e_fog;
}

void check_flags(const NetworkInstance& inst, const Solution& sol) {
  const auto& f = sol.flows;
  for (std::size_t i = 0; i < inst.node_count(); ++i) {
    const int n = static_cast<int>(i);
    const bool p = f.node_total(Task::Processing, n) > 0;
    const bool fb = f.node_total(Task::Feedback, n) > 0;
    const bool s = f.node_total(Task::Storage, n) > 0;
    if (p != static_cast<bool>(f.zeta_a[i]) || fb != static_cast<bool>(f.zeta_b[i]) ||
        s != static_cast<bool>(f.zeta_c[i]) || static_cast<bool>(f.zeta_c[i]) != (f.theta[i] || f.vartheta[i])) {
      throw InconsistentSolution("activation flags of '" + inst.id_of(n) + "' disagree with its flows");
    }
  }
  for (std::size_t j = 0; j < inst.base_stations().size(); ++j) {
    const int b = inst.base_stations()[j];
    if ((sol.beta_a[j] > 0) != static_cast<bool>(f.zeta_a[static_cast<std::size_t>(b)]) ||
        (sol.beta_b[j] > 0) != static_cast<bool>(f.zeta_b[static_cast<std::size_t>(b)])) {
      throw InconsistentSolution("PRB allocation of '" + inst.id_of(b) + "' disagrees with its flows");
    }
  }
}

}  // namespace

EnergyBreakdown evaluate(const NetworkInstance& inst, const DerivedParams& params, const Solution& sol) {
  EnergyBreakdown e;
  e.pue_network = inst.pue_network();
  e.pue_fog_cloud = inst.pue_fog_cloud();
  const auto n = inst.node_count();
  if (sol.flows.zeta_a.size() != n) {
    if (solution_is_empty(sol)) {
      finish(e);
      return e;
    }
    throw InconsistentSolution("solution has not been routed");
  }
  const auto nf = inst.fog_nodes().size();
  if (sol.y.size() != nf || sol.beta_a.size() != inst.base_stations().size()) {
    throw InconsistentSolution("solution has not been assembled");
  }
  check_flags(inst, sol);

  const double ta = params.tau_a, tb = params.tau_b, tc = params.tau_c;
  const auto& f = sol.flows;
  for (std::size_t i = 0; i < n; ++i) {
    const int node = static_cast<int>(i);
    const NodeKind k = inst.kind(node);
    if (k == NodeKind::Clinic) continue;
    const double P = static_cast<double>(f.node_total(Task::Processing, node)) * params.delta_a;
    const double F = static_cast<double>(f.node_total(Task::Feedback, node)) * params.delta_b;
    const double S = static_cast<double>(f.node_total(Task::Storage, node)) * params.delta_c;
    const bool za = f.zeta_a[i], zb = f.zeta_b[i], zc = f.zeta_c[i];
    if (k == NodeKind::BaseStation) {
      const DeviceSpec& bs = inst.device(k);
      const double idle = bs.idle_power * bs.idle_fraction;
      const auto j = static_cast<std::size_t>(inst.bs_pos(node));
      e.ebsp += (idle * za + inst.radio().per_prb_power * sol.beta_a[j]) * ta;
      e.ebsf += (idle * zb + inst.radio().per_prb_power * sol.beta_b[j]) * tb;
      continue;
    }
    const DeviceSpec& d = inst.device(k);
    const double ep = device_term(d, za, P, ta);
    const double ef = device_term(d, zb, F, tb);
    switch (k) {
      case NodeKind::ONU:
        e.eonup += ep, e.eonuf += ef, e.eonus += device_term(d, zc, S, tc);
        break;
      case NodeKind::OLT:
        e.eoltp += ep, e.eoltf += ef, e.eolts += device_term(d, zc, S, tc);
        break;
      case NodeKind::CenterAggSwitch:
        e.ecasp += ep, e.ecasf += ef, e.ecass += device_term(d, zc, S, tc);
        break;
      // Relay-only devices normally see storage traffic alone.
      case NodeKind::AggRouter: e.ears += ep + ef + device_term(d, zc, S, tc); break;
      case NodeKind::CoreRouter: e.ecrs += ep + ef + device_term(d, zc, S, tc); break;
      case NodeKind::CloudRouter: e.eclrs += ep + ef + device_term(d, zc, S, tc); break;
      case NodeKind::CloudSwitch: e.eclss += 2.0 * (ep + ef + device_term(d, zc, S, tc)); break;
      case NodeKind::ContentServer: e.ecss += ep + ef + device_term(d, zc, S, tc); break;
      case NodeKind::CloudStorage: {
        const double stored = S / 2.0 * tc;  // bits
        if (stored > d.capacity * (1.0 + 1e-12)) throw OverCapacity("cloud storage capacity exceeded");
        const double idle = zc ? d.idle_power * d.idle_fraction : 0.0;
        e.ecsts += 2.0 * (ep + ef + (idle + stored * d.load_coefficient()) * tc);
        break;
      }
      default: break;
    }
  }

  const DeviceSpec& es = inst.device(NodeKind::EthernetSwitch);
  const ServerSpec& ps = inst.server();
  const double pps = params.eps_proportional_minus_idle ? ps.max_power - ps.idle_power : ps.max_power;
  // EPS is linear in the totals; summing integers first keeps it independent
  // of how servers are spread over nodes (bit for bit).
  long servers = 0, patients = 0;
  for (std::size_t d = 0; d < nf; ++d) {
    long hosted = 0;
    for (std::size_t s = 0; s < sol.omega_a.size(); ++s) hosted += sol.omega_a[s][d] + sol.omega_b[s][d];
    const bool y = sol.y[d];
    if (!y && (hosted > 0 || sol.phi_a[d] + sol.phi_b[d] > 0)) {
      throw InconsistentSolution("servers at '" + inst.id_of(inst.fog_nodes()[d]) + "' but Y = 0");
    }
    servers += sol.phi_a[d] + sol.phi_b[d];
    patients += hosted;
    const auto h = static_cast<double>(hosted);
    e.eesp += device_term(es, y, h * params.delta_a, ta);
    e.eesf += device_term(es, y, h * params.delta_b, tb);
    e.eess += device_term(es, y, h * params.delta_c, tc);
  }
  const auto S = static_cast<double>(servers);
  e.eps = ps.idle_power * S * (ta + tb + tc) + pps * (params.m * static_cast<double>(patients) + params.c_const * S);
  finish(e);
  return e;
}

std::vector<EnergyBreakdown::Row> EnergyBreakdown::rows() const {
  return {
      {"access", "EBSP", ebsp},     {"access", "EBSF", ebsf},     {"access", "EONUP", eonup},
      {"access", "EONUF", eonuf},   {"access", "EONUS", eonus},   {"access", "EOLTP", eoltp},
      {"access", "EOLTF", eoltf},   {"access", "EOLTS", eolts},   {"access", "total", e_access},
      {"metro", "ECASP", ecasp},    {"metro", "ECASF", ecasf},    {"metro", "ECASS", ecass},
      {"metro", "EARS", ears},      {"metro", "total", e_metro},  {"core", "ECRS", ecrs},
      {"core", "total", e_core},    {"cloud", "ECLRS", eclrs},    {"cloud", "ECLSS", eclss},
      {"cloud", "ECSS", ecss},      {"cloud", "ECSTS", ecsts},    {"cloud", "total", e_cloud},
      {"fog", "EPS", eps},          {"fog", "EESP", eesp},        {"fog", "EESF", eesf},
      {"fog", "EESS", eess},        {"fog", "total", e_fog},      {"all", "total", total},
  };
}

std::string breakdown_csv_header() { return "scenario,demand_fraction,N,component,sub_term,joules\n"; }

std::string breakdown_csv_rows(const EnergyBreakdown& e, std::string_view scenario, double demand_fraction, int N) {
  std::ostringstream os;
  for (const auto& r : e.rows()) {
    os << scenario << ',' << demand_fraction << ',' << N << ',' << r.component << ',' << r.sub_term << ',';
    os.precision(17);
    os << r.joules << '\n';
    os.precision(6);
  }
  return os.str();
}

}  // namespace fogres
