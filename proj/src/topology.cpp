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

#include "fogres/topology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace fogres {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<NodeKind, std::string_view>, 12> kKindNames{{
    {NodeKind::Clinic, "Clinic"},
    {NodeKind::BaseStation, "BaseStation"},
    {NodeKind::ONU, "ONU"},
    {NodeKind::OLT, "OLT"},
    {NodeKind::CenterAggSwitch, "CenterAggSwitch"},
    {NodeKind::AggRouter, "AggRouter"},
    {NodeKind::CoreRouter, "CoreRouter"},
    {NodeKind::CloudRouter, "CloudRouter"},
    {NodeKind::CloudSwitch, "CloudSwitch"},
    {NodeKind::ContentServer, "ContentServer"},
    {NodeKind::CloudStorage, "CloudStorage"},
    {NodeKind::EthernetSwitch, "EthernetSwitch"},
}};

[[noreturn]] void invalid(const std::string& what) { throw ValidationError(what); }

}  // namespace

std::string_view to_string(NodeKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

NodeKind node_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw ParseError("unknown node kind '" + std::string(name) + "'");
}

std::map<NodeKind, DeviceSpec> default_catalog() {
  // Shared devices idle at 90% of maximum; the healthcare slice is x = 0.3%.
  auto shared = [](double pmax, double cap) {
    return DeviceSpec{pmax, 0.9 * pmax, cap, 0.003, true};
  };
  std::map<NodeKind, DeviceSpec> c;
  c[NodeKind::BaseStation] = DeviceSpec{528.0, 333.0, 360.0 * 336.0, 0.0042, true};
  c[NodeKind::ONU] = shared(8.0, 3.75e9);
  c[NodeKind::OLT] = shared(20.0, 128e9);
  c[NodeKind::CenterAggSwitch] = shared(1766.0, 256e9);
  c[NodeKind::AggRouter] = shared(4550.0, 560e9);
  c[NodeKind::CoreRouter] = shared(12300.0, 4480e9);
  c[NodeKind::CloudRouter] = shared(4550.0, 560e9);
  c[NodeKind::CloudSwitch] = shared(2020.0, 320e9);
  c[NodeKind::ContentServer] = DeviceSpec{380.8, 324.82, 1.8e9, 0.003, true};
  c[NodeKind::CloudStorage] = DeviceSpec{4900.0, 0.9 * 4900.0, 75.6e12 * 8.0, 0.003, true};
  // Dedicated fog switch; not listed with the other devices, see README.
  c[NodeKind::EthernetSwitch] = DeviceSpec{10.0, 9.0, 16e9, 1.0, false};
  return c;
}

// ---------------------------------------------------------------------------
// NetworkInstance

NetworkInstance::NetworkInstance(InstanceData data) : data_(std::move(data)) {
  validate_and_index();
}

int NetworkInstance::index_of(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw UnknownNode("unknown node '" + std::string(id) + "'");
  return it->second;
}

int NetworkInstance::link_between(int i, int j) const {
  auto it = link_lookup_.find({std::min(i, j), std::max(i, j)});
  return it == link_lookup_.end() ? -1 : it->second;
}

std::span<const int> NetworkInstance::neighbors(int idx) const {
  if (idx < 0 || static_cast<std::size_t>(idx) >= adjacency_.size()) {
    throw UnknownNode("node index " + std::to_string(idx) + " out of range");
  }
  return adjacency_[static_cast<std::size_t>(idx)];
}

bool NetworkInstance::is_access(int idx) const {
  const NodeKind k = kind(idx);
  return k == NodeKind::BaseStation || k == NodeKind::ONU || k == NodeKind::OLT;
}

std::span<const int> NetworkInstance::bs_of_clinic(int clinic) const {
  return clinic_bs_.at(static_cast<std::size_t>(clinic_pos(clinic)));
}

int NetworkInstance::onu_of_bs(int bs) const { return onu_of_bs_.at(static_cast<std::size_t>(bs_pos(bs))); }
int NetworkInstance::olt_of_bs(int bs) const { return olt_of_bs_.at(static_cast<std::size_t>(bs_pos(bs))); }
int NetworkInstance::olt_of(int access_node) const { return olt_root_.at(static_cast<std::size_t>(access_node)); }
int NetworkInstance::bs_degree(int bs) const { return bs_degree_.at(static_cast<std::size_t>(bs_pos(bs))); }

const DeviceSpec& NetworkInstance::device(NodeKind kind) const {
  auto it = data_.catalog.find(kind);
  if (it == data_.catalog.end()) {
    throw ValidationError("catalog has no entry for " + std::string(to_string(kind)));
  }
  return it->second;
}

bool NetworkInstance::has_device(NodeKind kind) const { return data_.catalog.contains(kind); }

int NetworkInstance::total_patients() const {
  int total = 0;
  for (int c : clinics_) total += node(c).patients;
  return total;
}

void NetworkInstance::validate_and_index() {
  const auto& nodes = data_.nodes;
  const std::size_t n = nodes.size();
  if (n == 0) invalid("instance has no nodes");

  for (std::size_t i = 0; i < n; ++i) {
    if (!index_.emplace(nodes[i].id, static_cast<int>(i)).second) {
      invalid("duplicate node id '" + nodes[i].id + "'");
    }
  }
  clinic_pos_.assign(n, -1);
  bs_pos_.assign(n, -1);
  fog_pos_.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const int idx = static_cast<int>(i);
    switch (nodes[i].kind) {
      case NodeKind::Clinic:
        clinic_pos_[i] = static_cast<int>(clinics_.size());
        clinics_.push_back(idx);
        if (nodes[i].patients < 0) invalid("clinic '" + nodes[i].id + "' has negative patients");
        break;
      case NodeKind::BaseStation:
        bs_pos_[i] = static_cast<int>(base_stations_.size());
        base_stations_.push_back(idx);
        break;
      case NodeKind::ONU: onus_.push_back(idx); break;
      case NodeKind::OLT: olts_.push_back(idx); break;
      case NodeKind::CloudStorage:
        if (cloud_storage_ != -1) invalid("more than one CloudStorage node ('" + nodes[i].id + "')");
        cloud_storage_ = idx;
        break;
      default: break;
    }
    if (is_access(idx)) {
      if (nodes[i].cluster < 0) invalid("access node '" + nodes[i].id + "' has no cluster");
      cluster_count_ = std::max(cluster_count_, nodes[i].cluster + 1);
    }
  }
  if (cloud_storage_ == -1) invalid("instance has no CloudStorage node");
  if (clinics_.empty()) invalid("instance has no clinics");
  for (int x : onus_) {
    fog_pos_[static_cast<std::size_t>(x)] = static_cast<int>(fog_nodes_.size());
    fog_nodes_.push_back(x);
  }
  for (int x : olts_) {
    fog_pos_[static_cast<std::size_t>(x)] = static_cast<int>(fog_nodes_.size());
    fog_nodes_.push_back(x);
  }

  // Catalog.
  for (const auto& [kind, spec] : data_.catalog) {
    const std::string k(to_string(kind));
    if (!(spec.max_power >= 0.0) || spec.idle_power < 0.0 || spec.idle_power > spec.max_power) {
      invalid("catalog " + k + ": need 0 <= idle_power <= max_power");
    }
    if (!(spec.capacity > 0.0)) invalid("catalog " + k + ": capacity must be positive");
    if (!(spec.idle_fraction > 0.0) || spec.idle_fraction > 1.0) {
      invalid("catalog " + k + ": idle_fraction must lie in (0, 1]");
    }
    if (!spec.shared && spec.idle_fraction != 1.0) {
      invalid("catalog " + k + ": unshared devices use the full idle power");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (nodes[i].kind != NodeKind::Clinic && !data_.catalog.contains(nodes[i].kind)) {
      invalid("catalog has no entry for kind of node '" + nodes[i].id + "'");
    }
  }
  if (!data_.catalog.contains(NodeKind::EthernetSwitch)) invalid("catalog has no EthernetSwitch entry");
  if (data_.radio.prb_cap <= 0 || data_.radio.per_prb_power < 0.0) invalid("radio parameters out of range");
  if (data_.server.idle_power < 0.0 || data_.server.idle_power > data_.server.max_power) {
    invalid("processing server: need 0 <= idle_power <= max_power");
  }
  if (!(data_.pue_network >= 1.0) || !(data_.pue_fog_cloud >= 1.0)) invalid("PUE values must be >= 1");

  // Links.
  adjacency_.assign(n, {});
  for (const auto& lr : data_.links) {
    auto ia = index_.find(lr.a);
    auto ib = index_.find(lr.b);
    if (ia == index_.end() || ib == index_.end()) {
      invalid("link " + lr.a + "-" + lr.b + " references an unknown node");
    }
    const int a = ia->second, b = ib->second;
    if (a == b) invalid("self loop on '" + lr.a + "'");
    if (!(lr.capacity_bps > 0.0)) invalid("link " + lr.a + "-" + lr.b + " has non-positive capacity");
    const auto key = std::make_pair(std::min(a, b), std::max(a, b));
    if (link_lookup_.contains(key)) invalid("duplicate link " + lr.a + "-" + lr.b);
    link_lookup_[key] = static_cast<int>(links_.size());
    links_.push_back(Link{a, b, lr.capacity_bps, lr.raw_capacity_bps});
    adjacency_[static_cast<std::size_t>(a)].push_back(b);
    adjacency_[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());

  // Clinic <-> BS adjacency must match the clinic links exactly.
  clinic_bs_.assign(clinics_.size(), {});
  for (const auto& [cid, bss] : data_.clinic_bs) {
    auto it = index_.find(cid);
    if (it == index_.end() || kind(it->second) != NodeKind::Clinic) {
      invalid("adjacency.clinic_bs: '" + cid + "' is not a clinic");
    }
    auto& list = clinic_bs_[static_cast<std::size_t>(clinic_pos(it->second))];
    for (const auto& bid : bss) {
      auto jt = index_.find(bid);
      if (jt == index_.end() || kind(jt->second) != NodeKind::BaseStation) {
        invalid("adjacency.clinic_bs: '" + bid + "' (clinic " + cid + ") is not a base station");
      }
      if (link_between(it->second, jt->second) < 0) {
        invalid("adjacency.clinic_bs: no link between " + cid + " and " + bid);
      }
      list.push_back(jt->second);
    }
    std::sort(list.begin(), list.end());
    if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
      invalid("adjacency.clinic_bs: clinic " + cid + " lists a BS twice");
    }
  }
  for (int c : clinics_) {
    const auto& list = clinic_bs_[static_cast<std::size_t>(clinic_pos(c))];
    if (list.empty()) invalid("clinic '" + id_of(c) + "' is adjacent to no base station");
    for (int nb : neighbors(c)) {
      if (kind(nb) != NodeKind::BaseStation) {
        invalid("clinic '" + id_of(c) + "' links to non-BS node '" + id_of(nb) + "'");
      }
      if (!std::binary_search(list.begin(), list.end(), nb)) {
        invalid("link " + id_of(c) + "-" + id_of(nb) + " missing from adjacency.clinic_bs");
      }
    }
    std::map<int, int> per_cluster;
    for (int b : list) {
      if (++per_cluster[node(b).cluster] > 2) {
        invalid("clinic '" + id_of(c) + "' is adjacent to more than 2 BSs in cluster " +
                std::to_string(node(b).cluster));
      }
    }
  }

  // BS -> ONU -> OLT tree.
  onu_of_bs_.assign(base_stations_.size(), -1);
  olt_of_bs_.assign(base_stations_.size(), -1);
  for (const auto& [bid, oid] : data_.bs_onu) {
    auto it = index_.find(bid);
    auto jt = index_.find(oid);
    if (it == index_.end() || kind(it->second) != NodeKind::BaseStation) {
      invalid("adjacency.bs_onu: '" + bid + "' is not a base station");
    }
    if (jt == index_.end() || kind(jt->second) != NodeKind::ONU) {
      invalid("adjacency.bs_onu: '" + oid + "' is not an ONU");
    }
    if (link_between(it->second, jt->second) < 0) invalid("no link between " + bid + " and " + oid);
    onu_of_bs_[static_cast<std::size_t>(bs_pos(it->second))] = jt->second;
  }
  for (const auto& [oid, bss] : data_.olt_bs) {
    auto it = index_.find(oid);
    if (it == index_.end() || kind(it->second) != NodeKind::OLT) {
      invalid("adjacency.olt_bs: '" + oid + "' is not an OLT");
    }
    for (const auto& bid : bss) {
      auto jt = index_.find(bid);
      if (jt == index_.end() || kind(jt->second) != NodeKind::BaseStation) {
        invalid("adjacency.olt_bs: '" + bid + "' is not a base station");
      }
      int& slot = olt_of_bs_[static_cast<std::size_t>(bs_pos(jt->second))];
      if (slot != -1) invalid("base station '" + bid + "' is listed under two OLTs");
      slot = it->second;
    }
  }
  olt_root_.assign(n, -1);
  for (int olt : olts_) olt_root_[static_cast<std::size_t>(olt)] = olt;
  for (int b : base_stations_) {
    const auto p = static_cast<std::size_t>(bs_pos(b));
    const int onu = onu_of_bs_[p], olt = olt_of_bs_[p];
    if (onu < 0) invalid("base station '" + id_of(b) + "' has no ONU");
    if (olt < 0) invalid("base station '" + id_of(b) + "' is not listed under any OLT");
    if (link_between(onu, olt) < 0) {
      invalid("ONU '" + id_of(onu) + "' of BS '" + id_of(b) + "' is not linked to OLT '" + id_of(olt) + "'");
    }
    if (node(b).cluster != node(olt).cluster || node(onu).cluster != node(olt).cluster) {
      invalid("base station '" + id_of(b) + "' is not in the cluster of its OLT");
    }
    for (int nb : neighbors(b)) {
      if (kind(nb) != NodeKind::Clinic && nb != onu) {
        invalid("base station '" + id_of(b) + "' links to '" + id_of(nb) + "' besides its ONU");
      }
    }
    olt_root_[static_cast<std::size_t>(b)] = olt;
    const int prev = olt_root_[static_cast<std::size_t>(onu)];
    if (prev != -1 && prev != olt) invalid("ONU '" + id_of(onu) + "' serves BSs under two OLTs");
    olt_root_[static_cast<std::size_t>(onu)] = olt;
  }
  for (int onu : onus_) {
    const int olt = olt_root_[static_cast<std::size_t>(onu)];
    if (olt == -1) invalid("ONU '" + id_of(onu) + "' serves no base station");
    for (int nb : neighbors(onu)) {
      const NodeKind k = kind(nb);
      if (!(k == NodeKind::BaseStation || nb == olt)) {
        invalid("ONU '" + id_of(onu) + "' links to '" + id_of(nb) + "' outside its subtree");
      }
    }
  }
  for (int olt : olts_) {
    for (int nb : neighbors(olt)) {
      if (kind(nb) == NodeKind::OLT || kind(nb) == NodeKind::BaseStation || kind(nb) == NodeKind::Clinic) {
        invalid("OLT '" + id_of(olt) + "' links directly to '" + id_of(nb) + "'");
      }
      if (kind(nb) == NodeKind::ONU && olt_root_[static_cast<std::size_t>(nb)] != olt) {
        invalid("ONU '" + id_of(nb) + "' is linked to a second OLT");
      }
    }
  }

  bs_degree_.assign(base_stations_.size(), 0);
  for (const auto& list : clinic_bs_) {
    for (int b : list) ++bs_degree_[static_cast<std::size_t>(bs_pos(b))];
  }

  // Connectivity.
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(cloud_storage_);
  seen[static_cast<std::size_t>(cloud_storage_)] = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adjacency_[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        q.push(v);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[i]) invalid("node '" + nodes[i].id + "' is not connected to the cloud storage");
  }
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json device_to_json(const DeviceSpec& d) {
  return json{{"max_power", d.max_power}, {"idle_power", d.idle_power}, {"capacity", d.capacity},
              {"idle_fraction", d.idle_fraction}, {"shared", d.shared}};
}

DeviceSpec device_from_json(const json& j) {
  DeviceSpec d;
  d.max_power = j.at("max_power").get<double>();
  d.idle_power = j.at("idle_power").get<double>();
  d.capacity = j.at("capacity").get<double>();
  d.idle_fraction = j.value("idle_fraction", 1.0);
  d.shared = j.value("shared", true);
  return d;
}

InstanceData data_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("instance document must be a JSON object");
  if (j.value("format", 0) != 1) throw ParseError("unsupported instance format (expected \"format\": 1)");
  InstanceData d;
  d.name = j.value("name", "");
  if (j.contains("notes")) d.notes = j.at("notes").get<std::vector<std::string>>();
  for (const auto& jn : j.at("nodes")) {
    Node node;
    node.id = jn.at("id").get<std::string>();
    node.kind = node_kind_from_string(jn.at("kind").get<std::string>());
    node.cluster = jn.value("cluster", -1);
    node.patients = jn.value("patients", 0);
    d.nodes.push_back(std::move(node));
  }
  for (const auto& jl : j.at("links")) {
    InstanceData::LinkRef l;
    l.a = jl.at("a").get<std::string>();
    l.b = jl.at("b").get<std::string>();
    l.capacity_bps = jl.at("capacity_bps").get<double>();
    l.raw_capacity_bps = jl.value("raw_capacity_bps", l.capacity_bps / kHealthcareShare);
    d.links.push_back(std::move(l));
  }
  const auto& cat = j.at("catalog");
  for (const auto& [name, spec] : cat.at("devices").items()) {
    d.catalog[node_kind_from_string(name)] = device_from_json(spec);
  }
  if (cat.contains("radio")) {
    d.radio.per_prb_power = cat["radio"].at("per_prb_power").get<double>();
    d.radio.prb_cap = cat["radio"].at("prb_cap").get<int>();
  }
  if (cat.contains("processing_server")) {
    d.server.max_power = cat["processing_server"].at("max_power").get<double>();
    d.server.idle_power = cat["processing_server"].at("idle_power").get<double>();
  }
  const auto& adj = j.at("adjacency");
  d.clinic_bs = adj.at("clinic_bs").get<std::map<std::string, std::vector<std::string>>>();
  d.bs_onu = adj.at("bs_onu").get<std::map<std::string, std::string>>();
  d.olt_bs = adj.at("olt_bs").get<std::map<std::string, std::vector<std::string>>>();
  const auto& pue = j.at("pue");
  d.pue_network = pue.at("network").get<double>();
  d.pue_fog_cloud = pue.at("fog_cloud").get<double>();
  return d;
}

json data_to_json(const InstanceData& d) {
  json j;
  j["format"] = 1;
  j["name"] = d.name;
  if (!d.notes.empty()) j["notes"] = d.notes;
  json nodes = json::array();
  for (const auto& n : d.nodes) {
    json jn{{"id", n.id}, {"kind", std::string(to_string(n.kind))}};
    if (n.cluster >= 0) jn["cluster"] = n.cluster;
    if (n.kind == NodeKind::Clinic) jn["patients"] = n.patients;
    nodes.push_back(std::move(jn));
  }
  j["nodes"] = std::move(nodes);
  json links = json::array();
  for (const auto& l : d.links) {
    links.push_back({{"a", l.a}, {"b", l.b}, {"capacity_bps", l.capacity_bps},
                     {"raw_capacity_bps", l.raw_capacity_bps}});
  }
  j["links"] = std::move(links);
  json devices = json::object();
  for (const auto& [k, spec] : d.catalog) devices[std::string(to_string(k))] = device_to_json(spec);
  j["catalog"] = {{"devices", devices},
                  {"radio", {{"per_prb_power", d.radio.per_prb_power}, {"prb_cap", d.radio.prb_cap}}},
                  {"processing_server",
                   {{"max_power", d.server.max_power}, {"idle_power", d.server.idle_power}}}};
  j["adjacency"] = {{"clinic_bs", d.clinic_bs}, {"bs_onu", d.bs_onu}, {"olt_bs", d.olt_bs}};
  j["pue"] = {{"network", d.pue_network}, {"fog_cloud", d.pue_fog_cloud}};
  return j;
}

}  // namespace

NetworkInstance parse_instance(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
  InstanceData data;
  try {
    data = data_from_json(j);
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
  return NetworkInstance(std::move(data));
}

NetworkInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string serialize_instance(const NetworkInstance& inst) {
  return data_to_json(inst.data()).dump(2) + "\n";
}

void save_instance(const NetworkInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << serialize_instance(inst);
}

// ---------------------------------------------------------------------------
// Synthetic generator

NetworkInstance generate_synthetic(int n_clinics, int n_bs, int n_clusters, std::uint64_t seed) {
  if (n_clusters < 1) throw InvalidConfig("need at least one cluster");
  if (n_bs < n_clusters) throw InvalidConfig("need at least one base station per cluster");
  if (n_clinics < 1) throw InvalidConfig("need at least one clinic");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 10.0);
  std::uniform_int_distribution<int> patients(4, 30);

  struct Pt { double x, y; };
  std::vector<Pt> bs_xy(static_cast<std::size_t>(n_bs));
  for (auto& p : bs_xy) p = {coord(rng), coord(rng)};
  // Clusters are contiguous bands along x so each has at least one BS.
  std::vector<int> order(static_cast<std::size_t>(n_bs));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return bs_xy[static_cast<std::size_t>(a)].x < bs_xy[static_cast<std::size_t>(b)].x;
  });
  std::vector<int> bs_cluster(static_cast<std::size_t>(n_bs));
  for (int r = 0; r < n_bs; ++r) {
    bs_cluster[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] =
        static_cast<int>(static_cast<long>(r) * n_clusters / n_bs);
  }

  InstanceData d;
  d.name = "synthetic-" + std::to_string(n_clinics) + "-" + std::to_string(n_bs) + "-" +
           std::to_string(n_clusters) + "-s" + std::to_string(seed);
  d.catalog = default_catalog();
  d.notes.push_back("synthetic coordinates; one ONU per base station");

  auto add_link = [&](const std::string& a, const std::string& b, double raw) {
    d.links.push_back({a, b, raw * kHealthcareShare, raw});
  };
  auto bs_id = [](int i) { return "BS" + std::to_string(i + 1); };

  std::vector<Pt> clinic_xy(static_cast<std::size_t>(n_clinics));
  for (int i = 0; i < n_clinics; ++i) {
    clinic_xy[static_cast<std::size_t>(i)] = {coord(rng), coord(rng)};
    d.nodes.push_back({"CL" + std::to_string(i + 1), NodeKind::Clinic, -1, patients(rng)});
  }
  for (int i = 0; i < n_bs; ++i) {
    d.nodes.push_back({bs_id(i), NodeKind::BaseStation, bs_cluster[static_cast<std::size_t>(i)], 0});
  }
  for (int i = 0; i < n_bs; ++i) {
    d.nodes.push_back({"ONU" + std::to_string(i + 1), NodeKind::ONU, bs_cluster[static_cast<std::size_t>(i)], 0});
  }
  for (int c = 0; c < n_clusters; ++c) {
    d.nodes.push_back({"OLT" + std::to_string(c + 1), NodeKind::OLT, c, 0});
  }
  for (const auto& [id, kind] : std::vector<std::pair<std::string, NodeKind>>{
           {"CAS1", NodeKind::CenterAggSwitch}, {"AR1", NodeKind::AggRouter},
           {"CR1", NodeKind::CoreRouter}, {"CLR1", NodeKind::CloudRouter},
           {"CLS1", NodeKind::CloudSwitch}, {"CS1", NodeKind::ContentServer},
           {"CST1", NodeKind::CloudStorage}}) {
    d.nodes.push_back({id, kind, -1, 0});
  }

  for (int i = 0; i < n_clinics; ++i) {
    const Pt p = clinic_xy[static_cast<std::size_t>(i)];
    const std::string cid = "CL" + std::to_string(i + 1);
    auto dist = [&](int b) {
      return std::hypot(p.x - bs_xy[static_cast<std::size_t>(b)].x, p.y - bs_xy[static_cast<std::size_t>(b)].y);
    };
    std::vector<std::string> chosen;
    for (int c = 0; c < n_clusters; ++c) {
      std::vector<int> members;
      for (int b = 0; b < n_bs; ++b) {
        if (bs_cluster[static_cast<std::size_t>(b)] == c) members.push_back(b);
      }
      std::stable_sort(members.begin(), members.end(), [&](int a, int b) { return dist(a) < dist(b); });
      chosen.push_back(bs_id(members[0]));
      if (members.size() > 1 && dist(members[1]) <= 1.5 * dist(members[0])) chosen.push_back(bs_id(members[1]));
    }
    std::sort(chosen.begin(), chosen.end());
    for (const auto& b : chosen) add_link(cid, b, 100e6);
    d.clinic_bs[cid] = chosen;
  }
  for (int i = 0; i < n_bs; ++i) {
    const std::string onu = "ONU" + std::to_string(i + 1);
    const std::string olt = "OLT" + std::to_string(bs_cluster[static_cast<std::size_t>(i)] + 1);
    add_link(bs_id(i), onu, 1e9);
    add_link(onu, olt, 2.5e9);
    d.bs_onu[bs_id(i)] = onu;
    d.olt_bs[olt].push_back(bs_id(i));
  }
  for (int c = 0; c < n_clusters; ++c) add_link("OLT" + std::to_string(c + 1), "CAS1", 10e9);
  add_link("CAS1", "AR1", 40e9);
  add_link("AR1", "CR1", 100e9);
  add_link("CR1", "CLR1", 100e9);
  add_link("CLR1", "CLS1", 40e9);
  add_link("CLS1", "CS1", 10e9);
  add_link("CS1", "CST1", 10e9);
  return NetworkInstance(std::move(d));
}

}  // namespace fogres
