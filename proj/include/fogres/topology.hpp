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

// Four-layer access/metro/core/cloud network used by the placement models.
//
// Layout invariants enforced by NetworkInstance:
//   clinic -- BS -- ONU -- OLT -- CAS -- AR -- CR -- CLR -- CLS -- CS -- CST
// Every base station hangs off exactly one ONU and one OLT, so the access
// layer is a forest rooted at the OLTs. Candidate fog nodes are the ONUs and
// OLTs.

#ifndef FOGRES_TOPOLOGY_HPP
#define FOGRES_TOPOLOGY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fogres/errors.hpp"

namespace fogres {

enum class NodeKind : std::uint8_t {
  Clinic,
  BaseStation,
  ONU,
  OLT,
  CenterAggSwitch,
  AggRouter,
  CoreRouter,
  CloudRouter,
  CloudSwitch,
  ContentServer,
  CloudStorage,
  EthernetSwitch,
};

std::string_view to_string(NodeKind kind);
NodeKind node_kind_from_string(std::string_view name);

/// Linear idle + load-proportional power profile of one device type.
struct DeviceSpec {
  double max_power = 0.0;   // W
  double idle_power = 0.0;  // W
  double capacity = 0.0;    // bps (bits for cloud storage)
  double idle_fraction = 1.0;
  bool shared = true;

  /// Watts per bps of load.
  double load_coefficient() const { return (max_power - idle_power) / capacity; }

  bool operator==(const DeviceSpec&) const = default;
};

/// LTE radio parameters that do not fit the idle/proportional shape.
struct RadioSpec {
  double per_prb_power = 0.0325;  // W per PRB
  int prb_cap = 360;              // PRBs per BS reserved for healthcare
  bool operator==(const RadioSpec&) const = default;
};

struct ServerSpec {
  double max_power = 180.0;
  double idle_power = 78.0;
  bool operator==(const ServerSpec&) const = default;
};

struct Node {
  std::string id;
  NodeKind kind = NodeKind::Clinic;
  int cluster = -1;  // access-layer nodes only
  int patients = 0;  // clinics only

  bool operator==(const Node&) const = default;
};

struct Link {
  int a = -1;
  int b = -1;
  double capacity_bps = 0.0;      // healthcare share (lambda_ij)
  double raw_capacity_bps = 0.0;  // metadata only

  bool operator==(const Link&) const = default;
};

/// Plain data as read from / written to an instance file. Node references
/// are by string id; NetworkInstance resolves and validates them.
struct InstanceData {
  std::string name;
  std::vector<Node> nodes;
  struct LinkRef {
    std::string a, b;
    double capacity_bps = 0.0;
    double raw_capacity_bps = 0.0;
    bool operator==(const LinkRef&) const = default;
  };
  std::vector<LinkRef> links;
  std::map<NodeKind, DeviceSpec> catalog;
  RadioSpec radio;
  ServerSpec server;
  std::map<std::string, std::vector<std::string>> clinic_bs;
  std::map<std::string, std::string> bs_onu;
  std::map<std::string, std::vector<std::string>> olt_bs;
  double pue_network = 1.5;
  double pue_fog_cloud = 2.5;
  std::vector<std::string> notes;

  bool operator==(const InstanceData&) const = default;
};

/// Validated, immutable network. Node handles are dense indices into nodes().
class NetworkInstance {
 public:
  explicit NetworkInstance(InstanceData data);

  const InstanceData& data() const { return data_; }
  std::size_t node_count() const { return data_.nodes.size(); }
  const Node& node(int idx) const { return data_.nodes.at(static_cast<std::size_t>(idx)); }
  int index_of(std::string_view id) const;
  const std::string& id_of(int idx) const { return node(idx).id; }
  NodeKind kind(int idx) const { return node(idx).kind; }

  std::span<const Link> links() const { return links_; }
  /// Link index for an unordered node pair, or -1.
  int link_between(int i, int j) const;

  /// Sorted by node index.
  std::span<const int> neighbors(int idx) const;

  std::span<const int> clinics() const { return clinics_; }
  std::span<const int> base_stations() const { return base_stations_; }
  std::span<const int> onus() const { return onus_; }
  std::span<const int> olts() const { return olts_; }
  /// Candidate fog nodes: ONUs then OLTs, each in index order.
  std::span<const int> fog_nodes() const { return fog_nodes_; }
  /// Access layer (BSs, ONUs, OLTs).
  bool is_access(int idx) const;
  int cloud_storage() const { return cloud_storage_; }
  int cluster_count() const { return cluster_count_; }

  /// Positions of a node within clinics()/base_stations()/fog_nodes(), or -1.
  int clinic_pos(int idx) const { return clinic_pos_[static_cast<std::size_t>(idx)]; }
  int bs_pos(int idx) const { return bs_pos_[static_cast<std::size_t>(idx)]; }
  int fog_pos(int idx) const { return fog_pos_[static_cast<std::size_t>(idx)]; }

  std::span<const int> bs_of_clinic(int clinic) const;
  int onu_of_bs(int bs) const;
  int olt_of_bs(int bs) const;
  /// OLT that roots the subtree containing an access node.
  int olt_of(int access_node) const;
  /// Number of clinics each BS can serve.
  int bs_degree(int bs) const;

  const DeviceSpec& device(NodeKind kind) const;
  bool has_device(NodeKind kind) const;
  const RadioSpec& radio() const { return data_.radio; }
  const ServerSpec& server() const { return data_.server; }
  double pue_network() const { return data_.pue_network; }
  double pue_fog_cloud() const { return data_.pue_fog_cloud; }

  int total_patients() const;

  bool operator==(const NetworkInstance& other) const { return data_ == other.data_; }

 private:
  void validate_and_index();

  InstanceData data_;
  std::map<std::string, int, std::less<>> index_;
  std::vector<Link> links_;
  std::map<std::pair<int, int>, int> link_lookup_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<int> clinics_, base_stations_, onus_, olts_, fog_nodes_;
  std::vector<int> clinic_pos_, bs_pos_, fog_pos_;
  std::vector<std::vector<int>> clinic_bs_;  // by clinic position
  std::vector<int> onu_of_bs_, olt_of_bs_;   // by BS position
  std::vector<int> olt_root_;                // by node index, -1 outside access
  std::vector<int> bs_degree_;               // by BS position
  int cloud_storage_ = -1;
  int cluster_count_ = 0;
};

/// Default device catalog (healthcare share of link capacities excluded).
std::map<NodeKind, DeviceSpec> default_catalog();

NetworkInstance load_instance(const std::string& path);
NetworkInstance parse_instance(std::string_view json_text);
std::string serialize_instance(const NetworkInstance& inst);
void save_instance(const NetworkInstance& inst, const std::string& path);

/// Deterministic synthetic instance: nearest <=2 BSs per cluster.
NetworkInstance generate_synthetic(int n_clinics, int n_bs, int n_clusters, std::uint64_t seed);

/// Fraction of raw link capacity reserved for healthcare traffic.
inline constexpr double kHealthcareShare = 0.003;

}  // namespace fogres

#endif  // FOGRES_TOPOLOGY_HPP
