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

#include "fogres/solution.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"

namespace fogres {

std::string_view to_string(Level level) {
  switch (level) {
    case Level::NonRes: return "nonres";
    case Level::A: return "a";
    case Level::B: return "b";
    case Level::C: return "c";
  }
  return "?";
}

Level level_from_string(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "nonres") return Level::NonRes;
  if (s == "a") return Level::A;
  if (s == "b") return Level::B;
  if (s == "c") return Level::C;
  throw InvalidConfig("unknown scenario '" + std::string(name) + "' (expected nonres, a, b or c)");
}

int Solution::servers_a() const { return std::accumulate(phi_a.begin(), phi_a.end(), 0); }
int Solution::servers_b() const { return std::accumulate(phi_b.begin(), phi_b.end(), 0); }

int Solution::host_nodes() const {
  int n = 0;
  for (std::size_t d = 0; d < phi_a.size(); ++d) n += (phi_a[d] + phi_b[d]) > 0 ? 1 : 0;
  return n;
}

int Solution::raw_bs_count() const {
  return static_cast<int>(std::count_if(beta_a.begin(), beta_a.end(), [](int b) { return b > 0; }));
}

int Solution::feedback_bs_count() const {
  return static_cast<int>(std::count_if(beta_b.begin(), beta_b.end(), [](int b) { return b > 0; }));
}

Solution empty_solution(const NetworkInstance& inst, Level level) {
  Solution s;
  s.level = level;
  const auto nc = inst.clinics().size(), nf = inst.fog_nodes().size();
  s.omega_a.assign(nc, std::vector<int>(nf, 0));
  s.omega_b.assign(nc, std::vector<int>(nf, 0));
  s.phi_a.assign(nf, 0);
  s.phi_b.assign(nf, 0);
  return s;
}

TaskRates task_rates(const DerivedParams& p) { return {p.delta_a, p.delta_b, p.delta_c}; }

void assemble(const NetworkInstance& inst, const DerivedParams& params, Solution& sol) {
  const auto nc = inst.clinics().size(), nf = inst.fog_nodes().size(), nb = inst.base_stations().size();
  if (sol.omega_a.size() != nc || sol.omega_b.size() != nc || sol.phi_a.size() != nf || sol.phi_b.size() != nf) {
    throw InvalidConfig("solution dimensions do not match the instance");
  }
  for (std::size_t s = 0; s < nc; ++s) {
    if (sol.omega_a[s].size() != nf || sol.omega_b[s].size() != nf) {
      throw InvalidConfig("solution dimensions do not match the instance");
    }
  }
  std::vector<int> load_a(nf, 0), load_b(nf, 0);
  for (std::size_t s = 0; s < nc; ++s) {
    for (std::size_t d = 0; d < nf; ++d) {
      load_a[d] += sol.omega_a[s][d];
      load_b[d] += sol.omega_b[s][d];
    }
  }
  sol.y_a.assign(nf, 0);
  sol.y_b.assign(nf, 0);
  sol.y.assign(nf, 0);
  sol.tau_pa.assign(nf, 0.0);
  sol.tau_pb.assign(nf, 0.0);
  for (std::size_t d = 0; d < nf; ++d) {
    sol.y_a[d] = static_cast<char>(sol.phi_a[d] > 0 || load_a[d] > 0);
    sol.y_b[d] = static_cast<char>(sol.phi_b[d] > 0 || load_b[d] > 0);
    sol.y[d] = static_cast<char>(sol.y_a[d] || sol.y_b[d]);
    sol.tau_pa[d] = params.m * load_a[d] + params.c_const * sol.phi_a[d];
    sol.tau_pb[d] = params.m * load_b[d] + params.c_const * sol.phi_b[d];
  }

  std::vector<Demand> demands;
  demands.reserve(sol.raw.size() + sol.feedback.size() + 2 * nf);
  sol.pp.assign(nc, std::vector<int>(nb, 0));
  sol.pf.assign(nc, std::vector<int>(nb, 0));
  auto check_ids = [&](const StreamAlloc& a) {
    if (a.clinic < 0 || static_cast<std::size_t>(a.clinic) >= inst.node_count() || inst.clinic_pos(a.clinic) < 0 ||
        a.bs < 0 || static_cast<std::size_t>(a.bs) >= inst.node_count() || inst.bs_pos(a.bs) < 0 || a.fog < 0 ||
        static_cast<std::size_t>(a.fog) >= inst.node_count() || inst.fog_pos(a.fog) < 0 || a.cls < 0 ||
        a.cls >= kClasses || a.patients < 0) {
      throw InvalidConfig("stream allocation references an invalid node or class");
    }
  };
  for (const auto& a : sol.raw) {
    check_ids(a);
    demands.push_back({a.clinic, a.fog, a.patients, Task::Processing, a.cls, a.bs});
    sol.pp[static_cast<std::size_t>(inst.clinic_pos(a.clinic))][static_cast<std::size_t>(inst.bs_pos(a.bs))] +=
        a.patients;
  }
  for (const auto& a : sol.feedback) {
    check_ids(a);
    demands.push_back({a.fog, a.clinic, a.patients, Task::Feedback, a.cls, a.bs});
    sol.pf[static_cast<std::size_t>(inst.clinic_pos(a.clinic))][static_cast<std::size_t>(inst.bs_pos(a.bs))] +=
        a.patients;
  }
  const int cst = inst.cloud_storage();
  for (std::size_t d = 0; d < nf; ++d) {
    const int node = inst.fog_nodes()[d];
    demands.push_back({node, cst, load_a[d], Task::Storage, 0, -1});
    demands.push_back({node, cst, load_b[d], Task::Storage, 1, -1});
  }
  sol.flows = route(inst, demands);

  sol.beta_a.assign(nb, 0);
  sol.beta_b.assign(nb, 0);
  for (std::size_t s = 0; s < nc; ++s) {
    for (std::size_t j = 0; j < nb; ++j) {
      sol.beta_a[j] += params.Rp * sol.pp[s][j];
      sol.beta_b[j] += params.Rf * sol.pf[s][j];
    }
  }
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

json matrix_to_json(const NetworkInstance& inst, const std::vector<std::vector<int>>& m) {
  json j = json::object();
  for (std::size_t s = 0; s < m.size(); ++s) {
    for (std::size_t d = 0; d < m[s].size(); ++d) {
      if (m[s][d] != 0) j[inst.id_of(inst.clinics()[s])][inst.id_of(inst.fog_nodes()[d])] = m[s][d];
    }
  }
  return j;
}

json vector_to_json(const NetworkInstance& inst, const std::vector<int>& v) {
  json j = json::object();
  for (std::size_t d = 0; d < v.size(); ++d) {
    if (v[d] != 0) j[inst.id_of(inst.fog_nodes()[d])] = v[d];
  }
  return j;
}

json allocs_to_json(const NetworkInstance& inst, const std::vector<StreamAlloc>& v) {
  json j = json::array();
  for (const auto& a : v) {
    j.push_back({{"clinic", inst.id_of(a.clinic)}, {"bs", inst.id_of(a.bs)}, {"fog", inst.id_of(a.fog)},
                 {"class", a.cls}, {"patients", a.patients}});
  }
  return j;
}

int fog_index(const NetworkInstance& inst, const std::string& id) {
  const int p = inst.fog_pos(inst.index_of(id));
  if (p < 0) throw ParseError("'" + id + "' is not a candidate fog node");
  return p;
}

}  // namespace

std::string solution_to_json(const NetworkInstance& inst, const Solution& sol) {
  json j;
  j["format"] = 1;
  j["level"] = std::string(to_string(sol.level));
  j["omega_a"] = matrix_to_json(inst, sol.omega_a);
  j["omega_b"] = matrix_to_json(inst, sol.omega_b);
  j["phi_a"] = vector_to_json(inst, sol.phi_a);
  j["phi_b"] = vector_to_json(inst, sol.phi_b);
  j["raw"] = allocs_to_json(inst, sol.raw);
  j["feedback"] = allocs_to_json(inst, sol.feedback);
  return j.dump(2) + "\n";
}

Solution solution_from_json(const NetworkInstance& inst, const DerivedParams& params, std::string_view text) {
  Solution sol;
  try {
    const json j = json::parse(text);
    if (j.value("format", 0) != 1) throw ParseError("unsupported solution format");
    sol = empty_solution(inst, level_from_string(j.at("level").get<std::string>()));
    auto read_matrix = [&](const char* key, std::vector<std::vector<int>>& m) {
      if (!j.contains(key)) return;
      for (const auto& [cid, row] : j.at(key).items()) {
        const int cp = inst.clinic_pos(inst.index_of(cid));
        if (cp < 0) throw ParseError("'" + cid + "' is not a clinic");
        for (const auto& [fid, v] : row.items()) {
          m[static_cast<std::size_t>(cp)][static_cast<std::size_t>(fog_index(inst, fid))] = v.get<int>();
        }
      }
    };
    auto read_vector = [&](const char* key, std::vector<int>& v) {
      if (!j.contains(key)) return;
      for (const auto& [fid, x] : j.at(key).items()) v[static_cast<std::size_t>(fog_index(inst, fid))] = x.get<int>();
    };
    auto read_allocs = [&](const char* key, std::vector<StreamAlloc>& v) {
      if (!j.contains(key)) return;
      for (const auto& a : j.at(key)) {
        v.push_back({inst.index_of(a.at("clinic").get<std::string>()), inst.index_of(a.at("bs").get<std::string>()),
                     inst.index_of(a.at("fog").get<std::string>()), a.value("class", 0),
                     a.at("patients").get<int>()});
      }
    };
    read_matrix("omega_a", sol.omega_a);
    read_matrix("omega_b", sol.omega_b);
    read_vector("phi_a", sol.phi_a);
    read_vector("phi_b", sol.phi_b);
    read_allocs("raw", sol.raw);
    read_allocs("feedback", sol.feedback);
  } catch (const json::exception& e) {
    throw ParseError(std::string("solution JSON: ") + e.what());
  } catch (const UnknownNode& e) {
    throw ParseError(std::string("solution JSON: ") + e.what());
  }
  assemble(inst, params, sol);
  return sol;
}

}  // namespace fogres
