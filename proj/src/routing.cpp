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

#include "fogres/routing.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace fogres {

long FlowSet::arc_total(Task t, int arc) const {
  long s = 0;
  for (int c = 0; c < kClasses; ++c) {
    const auto& v = arc_streams[c][static_cast<int>(t)];
    if (!v.empty()) s += v[static_cast<std::size_t>(arc)];
  }
  return s;
}

long FlowSet::node_total(Task t, int node) const {
  long s = 0;
  for (int c = 0; c < kClasses; ++c) {
    const auto& v = node_streams[c][static_cast<int>(t)];
    if (!v.empty()) s += v[static_cast<std::size_t>(node)];
  }
  return s;
}

namespace {

std::vector<int> bfs_from(const NetworkInstance& inst, int dst, int src, const std::set<int>& forbidden_nodes,
                          const std::set<int>& forbidden_links) {
  const auto n = inst.node_count();
  std::vector<int> dist(n, -1);
  if (forbidden_nodes.contains(dst)) return dist;
  std::deque<int> q{dst};
  dist[static_cast<std::size_t>(dst)] = 0;
  while (!q.empty()) {
    const int u = q.front();
    q.pop_front();
    if (u != dst && inst.kind(u) == NodeKind::Clinic) continue;
    for (int v : inst.neighbors(u)) {
      if (dist[static_cast<std::size_t>(v)] != -1 || forbidden_nodes.contains(v)) continue;
      if (forbidden_links.contains(inst.link_between(u, v))) continue;
      if (inst.kind(v) == NodeKind::Clinic && v != src && src != -2) continue;
      dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
      q.push_back(v);
    }
  }
  return dist;
}

}  // namespace

std::vector<int> hop_distances(const NetworkInstance& inst, int dst) { return bfs_from(inst, dst, -2, {}, {}); }

std::vector<int> shortest_path(const NetworkInstance& inst, int src, int dst, const std::set<int>& forbidden_nodes,
                               const std::set<int>& forbidden_links) {
  if (forbidden_nodes.contains(src)) return {};
  const auto dist = bfs_from(inst, dst, src, forbidden_nodes, forbidden_links);
  if (dist[static_cast<std::size_t>(src)] < 0) return {};
  std::vector<int> path{src};
  int cur = src;
  while (cur != dst) {
    const int want = dist[static_cast<std::size_t>(cur)] - 1;
    int next = -1;
    for (int v : inst.neighbors(cur)) {  // sorted, so the first hit is smallest
      if (dist[static_cast<std::size_t>(v)] != want || forbidden_nodes.contains(v)) continue;
      if (forbidden_links.contains(inst.link_between(cur, v))) continue;
      if (v != dst && inst.kind(v) == NodeKind::Clinic) continue;
      next = v;
      break;
    }
    if (next < 0) return {};
    path.push_back(next);
    cur = next;
  }
  return path;
}

FlowSet route(const NetworkInstance& inst, const std::vector<Demand>& demands, const RouteOptions& opts) {
  const auto n = inst.node_count();
  const auto arcs = 2 * inst.links().size();
  FlowSet fs;
  for (auto& per_class : fs.arc_streams) {
    for (auto& v : per_class) v.assign(arcs, 0);
  }
  for (auto& per_class : fs.node_streams) {
    for (auto& v : per_class) v.assign(n, 0);
  }
  fs.zeta_a.assign(n, 0);
  fs.zeta_b.assign(n, 0);
  fs.theta.assign(n, 0);
  fs.vartheta.assign(n, 0);
  fs.zeta_c.assign(n, 0);

  for (const auto& d : demands) {
    if (d.streams == 0) continue;
    if (d.streams < 0) throw InvalidConfig("negative stream count in demand");
    if (d.cls < 0 || d.cls >= kClasses) throw InvalidConfig("demand class out of range");
    if (opts.forbidden_nodes.contains(d.src) || opts.forbidden_nodes.contains(d.dst)) {
      throw InvalidConfig("demand endpoint is forbidden");
    }
    std::vector<int> path;
    if (d.via >= 0) {
      const bool up = inst.kind(d.src) == NodeKind::Clinic;
      const int clinic = up ? d.src : d.dst;
      const int other = up ? d.dst : d.src;
      const int l = inst.link_between(clinic, d.via);
      if (l < 0) {
        throw NoPath("no access link " + inst.id_of(clinic) + "-" + inst.id_of(d.via));
      }
      if (opts.forbidden_links.contains(l) || opts.forbidden_nodes.contains(d.via)) {
        throw NoPath("access link " + inst.id_of(clinic) + "-" + inst.id_of(d.via) + " is forbidden");
      }
      path = up ? shortest_path(inst, d.via, other, opts.forbidden_nodes, opts.forbidden_links)
                : shortest_path(inst, other, d.via, opts.forbidden_nodes, opts.forbidden_links);
      if (!path.empty()) {
        if (up) {
          path.insert(path.begin(), clinic);
        } else {
          path.push_back(clinic);
        }
      }
    } else {
      path = shortest_path(inst, d.src, d.dst, opts.forbidden_nodes, opts.forbidden_links);
    }
    if (path.empty()) throw NoPath("no path " + inst.id_of(d.src) + " -> " + inst.id_of(d.dst));

    const int t = static_cast<int>(d.task);
    auto& arc = fs.arc_streams[d.cls][t];
    auto& node = fs.node_streams[d.cls][t];
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const int li = inst.link_between(path[k], path[k + 1]);
      arc[static_cast<std::size_t>(arc_of(inst.links()[static_cast<std::size_t>(li)], li, path[k]))] += d.streams;
    }
    for (std::size_t k = 0; k < path.size(); ++k) {
      const auto u = static_cast<std::size_t>(path[k]);
      const bool first = k == 0, last = k + 1 == path.size();
      switch (d.task) {
        case Task::Processing:
          if (!first) node[u] += d.streams, fs.zeta_a[u] = 1;
          break;
        case Task::Feedback:
          if (!last) node[u] += d.streams, fs.zeta_b[u] = 1;
          break;
        case Task::Storage:
          node[u] += d.streams;
          if (!last) fs.theta[u] = 1;
          if (!first) fs.vartheta[u] = 1;
          fs.zeta_c[u] = 1;
          break;
      }
    }
    fs.routes.push_back({d, std::move(path)});
  }

  if (opts.rates != nullptr) {
    const auto v = capacity_violations(inst, fs, *opts.rates);
    if (!v.empty()) {
      const auto& l = inst.links()[static_cast<std::size_t>(v.front().link)];
      const int to = v.front().from == l.a ? l.b : l.a;
      throw CapacityExceeded("link " + inst.id_of(v.front().from) + "->" + inst.id_of(to) + " carries " +
                             std::to_string(v.front().load_bps) + " bps > " + std::to_string(l.capacity_bps));
    }
  }
  return fs;
}

std::vector<CapacityViolation> capacity_violations(const NetworkInstance& inst, const FlowSet& flows,
                                                   const TaskRates& rates) {
  std::vector<CapacityViolation> out;
  const auto links = inst.links();
  for (std::size_t li = 0; li < links.size(); ++li) {
    for (int dir = 0; dir < 2; ++dir) {
      const int arc = static_cast<int>(2 * li) + dir;
      for (int t = 0; t < kTasks; ++t) {
        const long s = flows.arc_total(static_cast<Task>(t), arc);
        if (s == 0) continue;
        const double load = static_cast<double>(s) * rates[static_cast<std::size_t>(t)];
        if (load > links[li].capacity_bps * (1.0 + 1e-12)) {
          out.push_back({static_cast<int>(li), dir == 0 ? links[li].a : links[li].b, static_cast<Task>(t), load,
                         links[li].capacity_bps});
        }
      }
    }
  }
  return out;
}

std::vector<char> class_link_usage(const NetworkInstance& inst, const FlowSet& flows, int cls) {
  const auto nl = inst.links().size();
  std::vector<char> used(nl, 0);
  for (int t = 0; t < kTasks; ++t) {
    const auto& v = flows.arc_streams[static_cast<std::size_t>(cls)][static_cast<std::size_t>(t)];
    if (v.empty()) continue;
    for (std::size_t li = 0; li < nl; ++li) {
      if (v[2 * li] > 0 || v[2 * li + 1] > 0) used[li] = 1;
    }
  }
  return used;
}

std::vector<char> class_node_usage(const NetworkInstance& inst, const FlowSet& flows, int cls) {
  const auto links = class_link_usage(inst, flows, cls);
  std::vector<char> used(inst.node_count(), 0);
  for (std::size_t li = 0; li < links.size(); ++li) {
    if (!links[li]) continue;
    used[static_cast<std::size_t>(inst.links()[li].a)] = 1;
    used[static_cast<std::size_t>(inst.links()[li].b)] = 1;
  }
  return used;
}

namespace {

DisjointReport compare_usage(const NetworkInstance& inst, const std::vector<char>& la, const std::vector<char>& lb) {
  DisjointReport r;
  std::vector<char> na(inst.node_count(), 0), nb(inst.node_count(), 0);
  const auto links = inst.links();
  for (std::size_t li = 0; li < links.size(); ++li) {
    const auto& l = links[li];
    if (la[li]) na[static_cast<std::size_t>(l.a)] = na[static_cast<std::size_t>(l.b)] = 1;
    if (lb[li]) nb[static_cast<std::size_t>(l.a)] = nb[static_cast<std::size_t>(l.b)] = 1;
    if (la[li] && lb[li] && inst.is_access(l.a) && inst.is_access(l.b)) r.shared_links.push_back(static_cast<int>(li));
  }
  for (std::size_t i = 0; i < na.size(); ++i) {
    if (na[i] && nb[i] && inst.is_access(static_cast<int>(i))) r.shared_nodes.push_back(static_cast<int>(i));
  }
  return r;
}

std::vector<char> any_class_usage(const NetworkInstance& inst, const FlowSet& f) {
  auto u = class_link_usage(inst, f, 0);
  const auto u1 = class_link_usage(inst, f, 1);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = static_cast<char>(u[i] | u1[i]);
  return u;
}

}  // namespace

DisjointReport check_disjoint(const NetworkInstance& inst, const FlowSet& primary, const FlowSet& secondary) {
  return compare_usage(inst, any_class_usage(inst, primary), any_class_usage(inst, secondary));
}

DisjointReport check_disjoint(const NetworkInstance& inst, const FlowSet& flows) {
  return compare_usage(inst, class_link_usage(inst, flows, 0), class_link_usage(inst, flows, 1));
}

std::string flows_to_csv(const NetworkInstance& inst, const FlowSet& flows) {
  static constexpr const char* kTaskNames[] = {"processing", "feedback", "storage"};
  std::ostringstream os;
  os << "class,task,from,to,streams\n";
  const auto links = inst.links();
  for (int c = 0; c < kClasses; ++c) {
    for (int t = 0; t < kTasks; ++t) {
      const auto& v = flows.arc_streams[static_cast<std::size_t>(c)][static_cast<std::size_t>(t)];
      for (std::size_t a = 0; a < v.size(); ++a) {
        if (v[a] == 0) continue;
        const auto& l = links[a / 2];
        const int from = a % 2 == 0 ? l.a : l.b, to = a % 2 == 0 ? l.b : l.a;
        os << (c == 0 ? "primary" : "secondary") << ',' << kTaskNames[t] << ',' << inst.id_of(from) << ','
           << inst.id_of(to) << ',' << v[a] << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace fogres
