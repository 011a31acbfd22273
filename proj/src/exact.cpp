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

#include "fogres/exact.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>

#include "fogres/feasibility.hpp"
#include "fogres/routing.hpp"
#include "mcf.hpp"

namespace fogres {

std::string_view to_string(BoundStatus s) { return s == BoundStatus::Optimal ? "optimal" : "budget_exhausted"; }

double ExactResult::gap() const {
  if (!has_solution || status == BoundStatus::Optimal || energy.total <= 0.0) return 0.0;
  return std::max(0.0, (energy.total - lower_bound) / energy.total);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Clock = std::chrono::steady_clock;

double pue_of(const NetworkInstance& inst, NodeKind k) {
  switch (k) {
    case NodeKind::CloudRouter:
    case NodeKind::ContentServer: return inst.pue_fog_cloud();
    case NodeKind::CloudSwitch:
    case NodeKind::CloudStorage: return 2.0 * inst.pue_fog_cloud();
    default: return inst.pue_network();
  }
}

// Joules (PUE included) for activating a node / per stream counted at it.
struct TaskCoeffs {
  std::vector<double> idle, unit;
};

struct Group {
  int s = 0;    // clinic position
  int cls = 0;
  int d = 0;    // fog position
  long amount = 0;
};

struct TaskPlan {
  double cost = kInf;
  std::vector<StreamAlloc> allocs;
};

// Instance-wide data shared by every search node.
struct Model {
  Model(const NetworkInstance& i, const DerivedParams& pp, Level l, const DemandSet& dem)
      : inst(i), p(pp), level(l), demand(dem) {
    nc = inst.clinics().size();
    nf = inst.fog_nodes().size();
    nb = inst.base_stations().size();
    const auto n = inst.node_count();
    const double delta[3] = {p.delta_a, p.delta_b, p.delta_c};
    const double tau[3] = {p.tau_a, p.tau_b, p.tau_c};
    for (int t = 0; t < 3; ++t) {
      auto& c = co[static_cast<std::size_t>(t)];
      c.idle.assign(n, 0.0);
      c.unit.assign(n, 0.0);
      for (std::size_t v = 0; v < n; ++v) {
        const NodeKind k = inst.kind(static_cast<int>(v));
        if (k == NodeKind::Clinic || !inst.has_device(k)) continue;
        const DeviceSpec& dev = inst.device(k);
        const double pue = pue_of(inst, k);
        c.idle[v] = dev.idle_power * dev.idle_fraction * tau[t] * pue;
        if (k == NodeKind::BaseStation) continue;  // PRB term instead
        c.unit[v] = delta[t] * dev.load_coefficient() * tau[t] * pue;
        if (k == NodeKind::CloudStorage && t == 2) {
          c.unit[v] = delta[t] / 2.0 * tau[t] * dev.load_coefficient() * tau[t] * pue;
        }
      }
    }
    adj.assign(nc, std::vector<char>(nb, 0));
    for (std::size_t s = 0; s < nc; ++s) {
      for (int b : inst.bs_of_clinic(inst.clinics()[s])) adj[s][static_cast<std::size_t>(inst.bs_pos(b))] = 1;
    }
    for (int t = 0; t < 2; ++t) {
      auto& P = path[static_cast<std::size_t>(t)];
      auto& L = linear[static_cast<std::size_t>(t)];
      P.assign(nb, std::vector<std::vector<int>>(nf));
      L.assign(nb, std::vector<double>(nf, kInf));
      for (std::size_t j = 0; j < nb; ++j) {
        for (std::size_t d = 0; d < nf; ++d) {
          const int b = inst.base_stations()[j], f = inst.fog_nodes()[d];
          P[j][d] = t == 0 ? shortest_path(inst, b, f) : shortest_path(inst, f, b);
          if (P[j][d].empty()) continue;
          double sum = 0.0;
          for (int v : P[j][d]) sum += co[static_cast<std::size_t>(t)].unit[static_cast<std::size_t>(v)];
          L[j][d] = sum;
        }
      }
    }
    const int R = inst.radio().prb_cap;
    bs_cap = {p.Rp > 0 ? R / p.Rp : 0, p.Rf > 0 ? R / p.Rf : 0};
    const auto olts = inst.olts();
    trees = static_cast<int>(olts.size());
    auto tree_of = [&](int node) {
      const int root = inst.olt_of(node);
      return static_cast<int>(std::find(olts.begin(), olts.end(), root) - olts.begin());
    };
    for (int f : inst.fog_nodes()) fog_tree.push_back(tree_of(f));
    for (int b : inst.base_stations()) bs_tree.push_back(tree_of(b));
    storage_path.resize(nf);
    storage_linear.assign(nf, kInf);
    for (std::size_t d = 0; d < nf; ++d) {
      storage_path[d] = shortest_path(inst, inst.fog_nodes()[d], inst.cloud_storage());
      if (storage_path[d].empty()) continue;
      double sum = 0.0;
      for (int v : storage_path[d]) sum += co[2].unit[static_cast<std::size_t>(v)];
      storage_linear[d] = sum;
    }
  }

  const NetworkInstance& inst;
  const DerivedParams& p;
  Level level;
  const DemandSet& demand;
  std::size_t nc = 0, nf = 0, nb = 0;
  std::array<TaskCoeffs, 3> co;
  std::vector<std::vector<char>> adj;  // [clinic pos][bs pos]
  // [task][bs pos][fog pos]; raw runs BS -> fog, feedback fog -> BS
  std::array<std::vector<std::vector<std::vector<int>>>, 2> path;
  std::array<std::vector<std::vector<double>>, 2> linear;
  std::array<long, 2> bs_cap{};
  int trees = 0;
  std::vector<int> fog_tree, bs_tree;  // OLT position rooting each node
  std::vector<std::vector<int>> storage_path;
  std::vector<double> storage_linear;
};

// Raw or feedback allocation for a fixed patient assignment.
class TaskSolver {
 public:
  TaskSolver(const Model& m, int task, const std::vector<Group>& groups,
             const std::vector<std::vector<char>>& allowed, std::atomic<bool>& stop, Clock::time_point deadline)
      : m_(m), t_(task), groups_(groups), allowed_(allowed), stop_(stop), deadline_(deadline) {
    const auto& inst = m_.inst;
    const auto& co = m_.co[static_cast<std::size_t>(t_)];
    std::vector<char> host(inst.node_count(), 0);
    for (const auto& g : groups_) {
      total_ += g.amount;
      const int f = inst.fog_nodes()[static_cast<std::size_t>(g.d)];
      if (!host[static_cast<std::size_t>(f)]) base_ += co.idle[static_cast<std::size_t>(f)];
      host[static_cast<std::size_t>(f)] = 1;
    }
    // Usable (group, BS) edges and the relay nodes their paths need.
    std::map<int, int> relay_index;
    edges_.resize(groups_.size());
    double min_lin = kInf;
    for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
      const auto& g = groups_[gi];
      for (std::size_t j = 0; j < m_.nb; ++j) {
        const auto& path = m_.path[static_cast<std::size_t>(t_)][j][static_cast<std::size_t>(g.d)];
        if (!m_.adj[static_cast<std::size_t>(g.s)][j] || !allowed_[static_cast<std::size_t>(g.cls)][j] ||
            path.empty()) {
          continue;
        }
        const int b = inst.base_stations()[j], onu = inst.onu_of_bs(b);
        Edge e{static_cast<int>(j), 0, m_.linear[static_cast<std::size_t>(t_)][j][static_cast<std::size_t>(g.d)]};
        for (int v : path) {
          if (v == b || v == onu || host[static_cast<std::size_t>(v)]) continue;
          auto [it, fresh] = relay_index.emplace(v, static_cast<int>(relay_index.size()));
          if (fresh) relays_.push_back(v);
          e.need |= std::uint64_t{1} << it->second;
        }
        min_lin = std::min(min_lin, e.linear);
        edges_[gi].push_back(e);
        if (std::find(cand_.begin(), cand_.end(), static_cast<int>(j)) == cand_.end()) cand_.push_back(static_cast<int>(j));
      }
    }
    std::sort(cand_.begin(), cand_.end());
    if (relays_.size() > 20) throw InvalidConfig("too many relay nodes for exact search");
    lin_lb_ = total_ > 0 ? static_cast<double>(total_) * min_lin : 0.0;
    host_ = std::move(host);
  }

  /// Minimum-energy allocation; cost excludes terms fixed by the assignment
  /// other than host activation.
  TaskPlan solve() {
    if (total_ == 0) return {0.0, {}};
    open_.assign(m_.nb, 0);
    onu_users_.assign(m_.inst.node_count(), 0);
    if (!transport(all_open_mask(), full_relays(), nullptr)) return {};
    dfs(0, 0.0);
    if (capped_better_ < best_.cost) return exhaustive();
    return best_;
  }

  bool aborted() {
    // the clock is cheap but not free
    if ((++polls_ & 255U) == 0 && Clock::now() > deadline_) stop_.store(true);
    return stop_.load(std::memory_order_relaxed);
  }

 private:
  struct Edge {
    int j;
    std::uint64_t need;  // relay bits
    double linear;
  };

  std::vector<char> all_open_mask() const {
    std::vector<char> o(m_.nb, 0);
    for (int j : cand_) o[static_cast<std::size_t>(j)] = 1;
    return o;
  }
  std::uint64_t full_relays() const { return relays_.empty() ? 0 : (std::uint64_t{1} << relays_.size()) - 1; }

  // Min-cost transport over the open BSs and active relays. Returns false if
  // the load does not fit; otherwise fills cost and allocations.
  bool transport(const std::vector<char>& open, std::uint64_t relay_mask, TaskPlan* out) const {
    const int G = static_cast<int>(groups_.size()), B = static_cast<int>(m_.nb);
    const int src = G + B, sink = src + 1;
    detail::MinCostFlow mcf(G + B + 2);
    std::vector<std::vector<int>> ids(groups_.size());
    for (int g = 0; g < G; ++g) {
      mcf.add_edge(src, g, groups_[static_cast<std::size_t>(g)].amount, 0.0);
      for (const auto& e : edges_[static_cast<std::size_t>(g)]) {
        const bool ok = open[static_cast<std::size_t>(e.j)] && (e.need & ~relay_mask) == 0;
        ids[static_cast<std::size_t>(g)].push_back(ok ? mcf.add_edge(g, G + e.j, total_, e.linear) : -1);
      }
    }
    for (int j : cand_) {
      if (open[static_cast<std::size_t>(j)]) mcf.add_edge(G + j, sink, m_.bs_cap[static_cast<std::size_t>(t_)], 0.0);
    }
    const auto [flow, cost] = mcf.solve(src, sink, total_);
    if (flow < total_) return false;
    if (out != nullptr) {
      out->cost = cost;
      out->allocs.clear();
      for (std::size_t g = 0; g < groups_.size(); ++g) {
        for (std::size_t k = 0; k < edges_[g].size(); ++k) {
          if (ids[g][k] < 0) continue;
          const long f = mcf.flow(ids[g][k]);
          if (f > 0) out->allocs.push_back(alloc(groups_[g], edges_[g][k].j, f));
        }
      }
    }
    return true;
  }

  StreamAlloc alloc(const Group& g, int j, long amount) const {
    const auto& inst = m_.inst;
    return {inst.clinics()[static_cast<std::size_t>(g.s)], inst.base_stations()[static_cast<std::size_t>(j)],
            inst.fog_nodes()[static_cast<std::size_t>(g.d)], g.cls, static_cast<int>(amount)};
  }

  double bs_cost(int j) const {
    const int b = m_.inst.base_stations()[static_cast<std::size_t>(j)];
    return m_.co[static_cast<std::size_t>(t_)].idle[static_cast<std::size_t>(b)];
  }

  // Activation cost added by opening BS j (its ONU is on every path from it).
  double open_cost(int j) {
    const int b = m_.inst.base_stations()[static_cast<std::size_t>(j)];
    const auto onu = static_cast<std::size_t>(m_.inst.onu_of_bs(b));
    double c = bs_cost(j);
    if (onu_users_[onu]++ == 0 && !host_[onu]) c += m_.co[static_cast<std::size_t>(t_)].idle[onu];
    return c;
  }
  void close(int j) {
    const int b = m_.inst.base_stations()[static_cast<std::size_t>(j)];
    --onu_users_[static_cast<std::size_t>(m_.inst.onu_of_bs(b))];
  }

  void dfs(std::size_t k, double fixed) {
    if (aborted()) return;
    if (base_ + fixed + lin_lb_ >= best_.cost) return;
    if (k == cand_.size()) {
      patterns(fixed);
      return;
    }
    const int j = cand_[k];
    // exclude first: cheaper patterns are found early
    open_[static_cast<std::size_t>(j)] = 0;
    std::vector<char> trial = open_;
    for (std::size_t r = k + 1; r < cand_.size(); ++r) trial[static_cast<std::size_t>(cand_[r])] = 1;
    if (transport(trial, full_relays(), nullptr)) dfs(k + 1, fixed);
    open_[static_cast<std::size_t>(j)] = 1;
    const double add = open_cost(j);
    dfs(k + 1, fixed + add);
    close(j);
    open_[static_cast<std::size_t>(j)] = 0;
  }

  void patterns(double fixed) {
    const auto& co = m_.co[static_cast<std::size_t>(t_)];
    const std::uint64_t n = std::uint64_t{1} << relays_.size();
    for (std::uint64_t mask = 0; mask < n && !aborted(); ++mask) {
      double f = base_ + fixed;
      for (std::size_t r = 0; r < relays_.size(); ++r) {
        if (mask >> r & 1) f += co.idle[static_cast<std::size_t>(relays_[r])];
      }
      if (f + lin_lb_ >= best_.cost) continue;
      TaskPlan plan;
      if (!transport(open_, mask, &plan)) continue;
      plan.cost += f;
      if (plan.cost >= best_.cost) continue;
      if (within_link_caps(plan.allocs)) {
        best_ = std::move(plan);
      } else {
        capped_better_ = std::min(capped_better_, plan.cost);
      }
    }
  }

  // Per-direction link loads of this task against lambda.
  bool within_link_caps(const std::vector<StreamAlloc>& allocs) const {
    const auto& inst = m_.inst;
    const double rate = t_ == 0 ? m_.p.delta_a : m_.p.delta_b;
    std::map<int, long> arcs;
    for (const auto& a : allocs) {
      const auto& path =
          m_.path[static_cast<std::size_t>(t_)][static_cast<std::size_t>(inst.bs_pos(a.bs))]
                 [static_cast<std::size_t>(inst.fog_pos(a.fog))];
      std::vector<int> full = path;
      if (t_ == 0) {
        full.insert(full.begin(), a.clinic);
      } else {
        full.push_back(a.clinic);
      }
      for (std::size_t k = 0; k + 1 < full.size(); ++k) {
        const int li = inst.link_between(full[k], full[k + 1]);
        arcs[arc_of(inst.links()[static_cast<std::size_t>(li)], li, full[k])] += a.patients;
      }
    }
    for (const auto& [arc, streams] : arcs) {
      const double cap = inst.links()[static_cast<std::size_t>(arc / 2)].capacity_bps;
      if (static_cast<double>(streams) * rate > cap * (1.0 + 1e-12)) return false;
    }
    return true;
  }

  // Plain enumeration of every split; only used when a link cap binds.
  TaskPlan exhaustive() {
    TaskPlan best;
    std::vector<StreamAlloc> cur;
    std::vector<long> load(m_.nb, 0);
    split(0, 0, groups_.empty() ? 0 : groups_[0].amount, cur, load, best);
    return best;
  }

  void split(std::size_t g, std::size_t k, long left, std::vector<StreamAlloc>& cur, std::vector<long>& load,
             TaskPlan& best) {
    if (aborted()) return;
    if (g == groups_.size()) {
      if (!within_link_caps(cur)) return;
      const double c = allocation_cost(cur);
      if (c < best.cost) best = {c, cur};
      return;
    }
    const auto& es = edges_[g];
    if (k == es.size()) {
      if (left == 0) split(g + 1, 0, g + 1 < groups_.size() ? groups_[g + 1].amount : 0, cur, load, best);
      return;
    }
    const auto j = static_cast<std::size_t>(es[k].j);
    const long room = m_.bs_cap[static_cast<std::size_t>(t_)] - load[j];
    for (long x = std::min(left, room); x >= 0; --x) {
      if (x > 0) cur.push_back(alloc(groups_[g], es[k].j, x));
      load[j] += x;
      split(g, k + 1, left - x, cur, load, best);
      load[j] -= x;
      if (x > 0) cur.pop_back();
    }
  }

  double allocation_cost(const std::vector<StreamAlloc>& allocs) const {
    const auto& inst = m_.inst;
    const auto& co = m_.co[static_cast<std::size_t>(t_)];
    std::vector<char> on = host_;
    double c = 0.0;
    for (const auto& a : allocs) {
      const auto j = static_cast<std::size_t>(inst.bs_pos(a.bs)), d = static_cast<std::size_t>(inst.fog_pos(a.fog));
      for (int v : m_.path[static_cast<std::size_t>(t_)][j][d]) on[static_cast<std::size_t>(v)] = 1;
      c += static_cast<double>(a.patients) * m_.linear[static_cast<std::size_t>(t_)][j][d];
    }
    for (std::size_t v = 0; v < on.size(); ++v) {
      if (on[v]) c += co.idle[v];
    }
    return c;
  }

  const Model& m_;
  int t_;
  const std::vector<Group>& groups_;
  const std::vector<std::vector<char>>& allowed_;
  std::atomic<bool>& stop_;
  Clock::time_point deadline_;
  unsigned polls_ = 0;
  long total_ = 0;
  double base_ = 0.0, lin_lb_ = 0.0;
  std::vector<char> host_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<int> relays_, cand_;
  std::vector<char> open_;
  std::vector<int> onu_users_;
  TaskPlan best_;
  double capped_better_ = kInf;
};

// Fewest BSs among `allowed` that can carry `streams` (by clinic position)
// under the task's PRB cap; -1 if impossible, 0 when too large to enumerate.
int min_cover(const Model& m, int t, const std::vector<long>& streams, const std::vector<char>& allowed) {
  long total = 0;
  for (long v : streams) total += v;
  if (total == 0) return 0;
  std::vector<int> cand;
  for (std::size_t j = 0; j < m.nb; ++j) {
    if (!allowed[j]) continue;
    for (std::size_t s = 0; s < m.nc; ++s) {
      if (streams[s] > 0 && m.adj[s][j]) {
        cand.push_back(static_cast<int>(j));
        break;
      }
    }
  }
  auto fits = [&](const std::vector<char>& pick) {
    const int C = static_cast<int>(m.nc), B = static_cast<int>(cand.size());
    detail::MinCostFlow f(C + B + 2);
    const int src = C + B, sink = src + 1;
    for (int s = 0; s < C; ++s) {
      if (streams[static_cast<std::size_t>(s)] > 0) f.add_edge(src, s, streams[static_cast<std::size_t>(s)], 0.0);
    }
    for (int k = 0; k < B; ++k) {
      if (!pick[static_cast<std::size_t>(k)]) continue;
      const auto j = static_cast<std::size_t>(cand[static_cast<std::size_t>(k)]);
      for (int s = 0; s < C; ++s) {
        if (m.adj[static_cast<std::size_t>(s)][j]) f.add_edge(s, C + k, total, 0.0);
      }
      f.add_edge(C + k, sink, m.bs_cap[static_cast<std::size_t>(t)], 0.0);
    }
    return f.solve(src, sink, total).first == total;
  };
  if (!fits(std::vector<char>(cand.size(), 1))) return -1;
  if (cand.size() > 20) return 0;
  for (std::size_t k = 1; k <= cand.size(); ++k) {
    std::vector<char> pick(cand.size(), 0);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(k), 1);
    do {
      if (fits(pick)) return static_cast<int>(k);
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return -1;
}

int ceil_div(long a, long b) { return static_cast<int>((a + b - 1) / b); }

// Terms of the lower bound that do not depend on the search node.
struct RootBound {
  double constant = 0.0;     // PRB, switch load and server load terms
  double per_server = 0.0;
  double per_host = 0.0;     // Ethernet switch idle
  double cover = 0.0;        // BS idle of the smallest raw/feedback BS sets
  double linear = 0.0;       // cheapest per-stream path energy
  std::vector<char> chain;   // nodes on every storage path
  std::array<long, 2> patients{};  // per class
  bool infeasible = false;
};

RootBound root_bound(const Model& m) {
  RootBound rb;
  const auto& inst = m.inst;
  const auto& p = m.p;
  const int cp = copies(m.level);
  const double eta = inst.pue_network(), cf = inst.pue_fog_cloud();
  long pts = 0;
  std::vector<long> per_clinic(m.nc, 0);
  for (std::size_t s = 0; s < m.nc; ++s) pts += m.demand.patients[s];
  rb.patients = {pts, cp == 2 ? pts : 0};
  const double streams = static_cast<double>(cp * pts);
  const double tsum = p.tau_a + p.tau_b + p.tau_c;
  const ServerSpec& ps = inst.server();
  const double pps = p.eps_proportional_minus_idle ? ps.max_power - ps.idle_power : ps.max_power;
  const double prb = inst.radio().per_prb_power;
  const DeviceSpec& es = inst.device(NodeKind::EthernetSwitch);
  rb.constant = prb * (p.Rp * p.tau_a + p.Rf * p.tau_b) * streams * eta + pps * p.m * streams * cf +
                streams * es.load_coefficient() * (p.delta_a * p.tau_a + p.delta_b * p.tau_b + p.delta_c * p.tau_c) * eta;
  rb.per_server = (ps.idle_power * tsum + pps * p.c_const) * cf;
  rb.per_host = es.idle_power * es.idle_fraction * tsum * eta;

  double lin[2] = {kInf, kInf};
  for (int t = 0; t < 2; ++t) {
    for (const auto& row : m.linear[static_cast<std::size_t>(t)]) {
      for (double v : row) lin[t] = std::min(lin[t], v);
    }
  }
  double st = kInf;
  for (double v : m.storage_linear) st = std::min(st, v);
  rb.linear = pts == 0 ? 0.0 : streams * (lin[0] + lin[1] + st);

  rb.chain.assign(inst.node_count(), 1);
  for (const auto& path : m.storage_path) {
    std::vector<char> on(inst.node_count(), 0);
    for (int v : path) on[static_cast<std::size_t>(v)] = 1;
    for (std::size_t v = 0; v < on.size(); ++v) rb.chain[v] = rb.chain[v] && on[v];
  }

  const double bs_idle[2] = {m.co[0].idle[static_cast<std::size_t>(inst.base_stations()[0])],
                             m.co[1].idle[static_cast<std::size_t>(inst.base_stations()[0])]};
  if (pts == 0) return rb;
  if (m.level != Level::C) {
    for (std::size_t s = 0; s < m.nc; ++s) per_clinic[s] = cp * static_cast<long>(m.demand.patients[s]);
    const std::vector<char> all(m.nb, 1);
    for (int t = 0; t < 2; ++t) {
      const int k = min_cover(m, t, per_clinic, all);
      if (k < 0) rb.infeasible = true;
      rb.cover += std::max(k, 0) * bs_idle[t];
    }
    return rb;
  }
  // Scenario C: every class lives in the OLT subtrees labelled with it.
  for (std::size_t s = 0; s < m.nc; ++s) per_clinic[s] = m.demand.patients[s];
  if (m.trees < 2) {
    rb.infeasible = true;
    return rb;
  }
  if (m.trees > 12) return rb;
  double best = kInf;
  for (int label = 0; label < (1 << m.trees); ++label) {
    double c = 0.0;
    for (int cls = 0; cls < 2 && c < kInf; ++cls) {
      std::vector<char> allowed(m.nb, 0);
      for (std::size_t j = 0; j < m.nb; ++j) allowed[j] = ((label >> m.bs_tree[j]) & 1) == cls;
      for (int t = 0; t < 2; ++t) {
        const int k = min_cover(m, t, per_clinic, allowed);
        if (k < 0) {
          c = kInf;
          break;
        }
        c += k * bs_idle[t];
      }
    }
    best = std::min(best, c);
  }
  if (best == kInf) rb.infeasible = true;
  rb.cover = best == kInf ? 0.0 : best;
  return rb;
}

using Matrix = std::vector<std::vector<int>>;

struct State {
  std::array<Matrix, 2> omega;
  std::array<std::vector<long>, 2> load;     // by fog position
  std::array<std::vector<int>, 2> tree_use;  // fog nodes per OLT subtree hosting the class
};

std::vector<int> lex_key(const Solution& s) {
  std::vector<int> k(s.phi_a);
  k.insert(k.end(), s.phi_b.begin(), s.phi_b.end());
  for (const auto* m : {&s.omega_a, &s.omega_b}) {
    for (const auto& row : *m) k.insert(k.end(), row.begin(), row.end());
  }
  return k;
}

class Search {
 public:
  Search(const Model& m, const ExactOptions& o) : m_(m), opts_(o), rb_(root_bound(m)) {
    deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(o.budget_s));
    const int cp = copies(m.level);
    std::vector<int> order;
    for (std::size_t s = 0; s < m.nc; ++s) {
      if (m.demand.patients[s] > 0) order.push_back(static_cast<int>(s));
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return m.demand.patients[static_cast<std::size_t>(a)] > m.demand.patients[static_cast<std::size_t>(b)];
    });
    for (int c = 0; c < cp; ++c) {
      for (int s : order) decisions_.push_back({c, s});
    }
  }

  ExactResult run() {
    ExactResult res;
    res.lower_bound = lower_bound(empty_state());
    if (rb_.infeasible) throw Infeasible("no assignment fits the base-station PRB caps");
    if (opts_.incumbent) offer_incumbent(*opts_.incumbent);
    if (decisions_.empty()) {
      Solution s = empty_solution(m_.inst, m_.level);
      assemble(m_.inst, m_.p, s);
      const auto e = evaluate(m_.inst, m_.p, s);
      offer(std::move(s), e);
    } else {
      // First branching level fans out as tasks; the rest is depth-first.
      // Tasks are spawned lazily since that level alone can have 10^7 splits.
      State root = empty_state();
      const bool par = opts_.parallel;
#pragma omp parallel if (par)
#pragma omp single
      compose(root, 0, [&](State& s2) {
        if (prune(s2)) return;
        State st = s2;
#pragma omp task firstprivate(st) if (par)
        descend(st, 1);
      });
    }
    res.nodes = nodes_.load();
    res.leaves = leaves_.load();
    const bool complete = !stop_.load();
    if (!best_) {
      if (complete) throw Infeasible("no feasible placement");
      res.status = BoundStatus::BudgetExhausted;
      return res;
    }
    res.has_solution = true;
    res.solution = std::move(best_->first);
    res.energy = best_->second;
    if (complete) {
      res.status = BoundStatus::Optimal;
      res.lower_bound = res.energy.total;
    } else {
      res.status = BoundStatus::BudgetExhausted;
      res.lower_bound = std::min(res.lower_bound, res.energy.total);
    }
    return res;
  }

  double root_lower_bound() {
    if (rb_.infeasible) return kInf;
    return lower_bound(empty_state());
  }

 private:
  struct Decision {
    int cls;
    int s;
  };

  State empty_state() const {
    State st;
    for (int c = 0; c < 2; ++c) {
      st.omega[static_cast<std::size_t>(c)].assign(m_.nc, std::vector<int>(m_.nf, 0));
      st.load[static_cast<std::size_t>(c)].assign(m_.nf, 0);
      st.tree_use[static_cast<std::size_t>(c)].assign(static_cast<std::size_t>(std::max(m_.trees, 1)), 0);
    }
    return st;
  }

  bool can_host(const State& st, int c, std::size_t d, long extra) const {
    const auto C = static_cast<std::size_t>(c), O = static_cast<std::size_t>(1 - c);
    const long Pat = m_.p.Pat;
    if (ceil_div(st.load[C][d] + extra, Pat) + ceil_div(st.load[O][d], Pat) > m_.p.N) return false;
    if (m_.level == Level::B || m_.level == Level::C) {
      if (st.load[O][d] > 0) return false;
    }
    if (m_.level == Level::C && st.tree_use[O][static_cast<std::size_t>(m_.fog_tree[d])] > 0) return false;
    return true;
  }

  void put(State& st, int c, int s, std::size_t d, int x) const {
    const auto C = static_cast<std::size_t>(c);
    if (x == 0) return;
    const auto tr = static_cast<std::size_t>(m_.fog_tree[d]);
    if (st.load[C][d] == 0) ++st.tree_use[C][tr];
    st.omega[C][static_cast<std::size_t>(s)][d] += x;
    st.load[C][d] += x;
    if (st.load[C][d] == 0) --st.tree_use[C][tr];
  }

  void apply(State& st, std::size_t depth, const std::vector<int>& row) const {
    const auto& dc = decisions_[depth];
    for (std::size_t d = 0; d < m_.nf; ++d) put(st, dc.cls, dc.s, d, row[d]);
  }

  // Enumerate every split of the decision's patients over the fog nodes.
  template <class F>
  void compose(State& st, std::size_t depth, F&& visit) {
    const auto& dc = decisions_[depth];
    compose_rec(st, dc, 0, m_.demand.patients[static_cast<std::size_t>(dc.s)], visit);
  }

  bool expired() {
    thread_local unsigned polls = 0;
    if ((++polls & 1023U) == 0 && Clock::now() > deadline_) stop_.store(true);
    return stop_.load(std::memory_order_relaxed);
  }

  template <class F>
  void compose_rec(State& st, const Decision& dc, std::size_t d, int left, F& visit) {
    if (expired()) return;
    if (d + 1 == m_.nf) {
      if (left > 0 && !can_host(st, dc.cls, d, left)) return;
      put(st, dc.cls, dc.s, d, left);
      visit(st);
      put(st, dc.cls, dc.s, d, -left);
      return;
    }
    for (int x = left; x >= 0; --x) {
      if (x > 0 && !can_host(st, dc.cls, d, x)) continue;
      put(st, dc.cls, dc.s, d, x);
      compose_rec(st, dc, d + 1, left - x, visit);
      put(st, dc.cls, dc.s, d, -x);
    }
  }

  void descend(State& st, std::size_t depth) {
    if (Clock::now() > deadline_) stop_.store(true);
    if (stop_.load(std::memory_order_relaxed)) return;
    nodes_.fetch_add(1, std::memory_order_relaxed);
    if (depth == decisions_.size()) {
      leaf(st);
      return;
    }
    compose(st, depth, [&](State& s2) {
      if (!prune(s2)) descend(s2, depth + 1);
    });
  }

  bool prune(const State& st) const {
    const double best = best_energy_.load(std::memory_order_relaxed);
    return lower_bound(st) > best * (1.0 + 1e-9);
  }

  double lower_bound(const State& st) const {
    const auto& inst = m_.inst;
    const long Pat = m_.p.Pat;
    int servers[2] = {0, 0}, hosts[2] = {0, 0}, any_hosts = 0;
    std::vector<char> on = rb_.chain;
    double host_idle = 0.0;
    for (std::size_t d = 0; d < m_.nf; ++d) {
      const bool used = st.load[0][d] > 0 || st.load[1][d] > 0;
      for (int c = 0; c < 2; ++c) {
        servers[c] += ceil_div(st.load[static_cast<std::size_t>(c)][d], Pat);
        hosts[c] += st.load[static_cast<std::size_t>(c)][d] > 0;
      }
      if (!used) continue;
      ++any_hosts;
      const auto f = static_cast<std::size_t>(inst.fog_nodes()[d]);
      host_idle += m_.co[0].idle[f] + m_.co[1].idle[f];
      for (int v : m_.storage_path[d]) on[static_cast<std::size_t>(v)] = 1;
    }
    for (int c = 0; c < 2; ++c) servers[c] = std::max(servers[c], ceil_div(rb_.patients[static_cast<std::size_t>(c)], Pat));
    int H = 0;
    if (m_.level == Level::B || m_.level == Level::C) {
      for (int c = 0; c < 2; ++c) H += std::max(hosts[c], ceil_div(servers[c], m_.p.N));
    } else {
      H = std::max(any_hosts, ceil_div(servers[0] + servers[1], m_.p.N));
    }
    double storage_idle = 0.0;
    if (rb_.patients[0] > 0) {
      for (std::size_t v = 0; v < on.size(); ++v) {
        if (on[v]) storage_idle += m_.co[2].idle[v];
      }
    }
    return rb_.constant + (servers[0] + servers[1]) * rb_.per_server + H * rb_.per_host + host_idle +
           storage_idle + rb_.cover + rb_.linear;
  }

  std::vector<Group> groups(const State& st) const {
    std::vector<Group> g;
    for (int c = 0; c < 2; ++c) {
      for (std::size_t s = 0; s < m_.nc; ++s) {
        for (std::size_t d = 0; d < m_.nf; ++d) {
          const int w = st.omega[static_cast<std::size_t>(c)][s][d];
          if (w > 0) g.push_back({static_cast<int>(s), c, static_cast<int>(d), w});
        }
      }
    }
    return g;
  }

  void leaf(const State& st) {
    leaves_.fetch_add(1, std::memory_order_relaxed);
    const auto g = groups(st);
    TaskPlan raw, fb;
    if (m_.level != Level::C) {
      const std::vector<std::vector<char>> all(2, std::vector<char>(m_.nb, 1));
      raw = TaskSolver(m_, 0, g, all, stop_, deadline_).solve();
      if (raw.cost == kInf) return;
      fb = TaskSolver(m_, 1, g, all, stop_, deadline_).solve();
    } else {
      // Subtrees hosting a class are labelled with it; free ones take either.
      std::vector<int> forced(static_cast<std::size_t>(m_.trees), -1), free;
      for (int t = 0; t < m_.trees; ++t) {
        for (int c = 0; c < 2; ++c) {
          if (st.tree_use[static_cast<std::size_t>(c)][static_cast<std::size_t>(t)] > 0) forced[static_cast<std::size_t>(t)] = c;
        }
        if (forced[static_cast<std::size_t>(t)] < 0) free.push_back(t);
      }
      if (free.size() > 16) throw InvalidConfig("too many OLT subtrees for exact scenario C");
      double best = kInf;
      for (long mask = 0; mask < (1L << free.size()); ++mask) {
        std::vector<int> label = forced;
        for (std::size_t k = 0; k < free.size(); ++k) label[static_cast<std::size_t>(free[k])] = (mask >> k) & 1;
        std::vector<std::vector<char>> allowed(2, std::vector<char>(m_.nb, 0));
        for (std::size_t j = 0; j < m_.nb; ++j) {
          allowed[static_cast<std::size_t>(label[static_cast<std::size_t>(m_.bs_tree[j])])][j] = 1;
        }
        TaskPlan r = TaskSolver(m_, 0, g, allowed, stop_, deadline_).solve();
        if (r.cost == kInf || r.cost >= best) continue;
        TaskPlan f = TaskSolver(m_, 1, g, allowed, stop_, deadline_).solve();
        if (r.cost + f.cost < best) {
          best = r.cost + f.cost;
          raw = std::move(r);
          fb = std::move(f);
        }
      }
    }
    if (raw.cost == kInf || fb.cost == kInf || stop_.load()) return;

    Solution sol = empty_solution(m_.inst, m_.level);
    sol.omega_a = st.omega[0];
    sol.omega_b = st.omega[1];
    for (std::size_t d = 0; d < m_.nf; ++d) {
      sol.phi_a[d] = ceil_div(st.load[0][d], m_.p.Pat);
      sol.phi_b[d] = ceil_div(st.load[1][d], m_.p.Pat);
    }
    sol.raw = std::move(raw.allocs);
    sol.feedback = std::move(fb.allocs);
    std::sort(sol.raw.begin(), sol.raw.end());
    std::sort(sol.feedback.begin(), sol.feedback.end());
    try {
      assemble(m_.inst, m_.p, sol);
      if (!check(m_.inst, m_.p, m_.level, m_.demand, sol).feasible()) return;
      auto e = evaluate(m_.inst, m_.p, sol);
      offer(std::move(sol), e);
    } catch (const Error&) {
      // device capacity exceeded: not a feasible leaf
    }
  }

  void offer_incumbent(Solution s) {
    assemble(m_.inst, m_.p, s);
    const auto r = check(m_.inst, m_.p, m_.level, m_.demand, s);
    if (!r.feasible()) throw InvalidConfig("warm-start solution is infeasible:\n" + r.text(m_.inst));
    const auto e = evaluate(m_.inst, m_.p, s);
    offer(std::move(s), e);
  }

  void offer(Solution s, const EnergyBreakdown& e) {
    std::lock_guard<std::mutex> lock(mu_);
    if (best_) {
      const double b = best_->second.total;
      const double tol = 1e-12 * std::max(1.0, b);
      if (e.total > b + tol) return;
      if (e.total >= b - tol && !(lex_key(s) < lex_key(best_->first))) return;
    }
    best_energy_.store(e.total);
    best_.emplace(std::move(s), e);
  }

  const Model& m_;
  const ExactOptions& opts_;
  RootBound rb_;
  std::vector<Decision> decisions_;
  Clock::time_point deadline_;
  std::atomic<bool> stop_{false};
  std::atomic<long> nodes_{0}, leaves_{0};
  std::atomic<double> best_energy_{kInf};
  std::mutex mu_;
  std::optional<std::pair<Solution, EnergyBreakdown>> best_;
};

}  // namespace

ExactResult solve_exact(const NetworkInstance& inst, const DerivedParams& params, Level level,
                        const DemandSet& demand, const ExactOptions& opts) {
  if (demand.patients.size() != inst.clinics().size()) throw InvalidConfig("demand does not match the instance");
  if (!(opts.budget_s > 0.0)) throw InvalidConfig("exact search needs a positive budget");
  const Model m(inst, params, level, demand);
  return Search(m, opts).run();
}

ExactResult solve_exact(const NetworkInstance& inst, const DerivedParams& params, const ScenarioSpec& spec,
                        double budget_s) {
  const DemandSet base = base_demand(inst);
  const DemandSet demand = spec.demand_fraction == 1.0 ? base : scale_demand(base, spec.demand_fraction);
  ExactOptions o;
  o.budget_s = budget_s;
  return solve_exact(inst, params, spec.level, demand, o);
}

double energy_lower_bound(const NetworkInstance& inst, const DerivedParams& params, Level level,
                          const DemandSet& demand) {
  const Model m(inst, params, level, demand);
  ExactOptions o;
  return Search(m, o).root_lower_bound();
}

}  // namespace fogres
