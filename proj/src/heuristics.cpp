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


#include "fogres/heuristics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "fogres/errors.hpp"
#include "fogres/feasibility.hpp"
#include "fogres/routing.hpp"

namespace fogres {

std::string HeuristicTrace::text() const {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

HeuristicTrace HeuristicTrace::parse(std::string_view text) {
  HeuristicTrace t;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) t.lines.push_back(line);
  }
  return t;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kComboCap = 1e6;
constexpr std::size_t kTopCandidates = 20;

enum class Err { Assignment, Nodes, Route };

[[noreturn]] void raise(Err e, const std::string& msg) {
  switch (e) {
    case Err::Nodes: throw NoDisjointNodes(msg);
    case Err::Route: throw NoDisjointRoute(msg);
    default: throw NoFeasibleAssignment(msg);
  }
}

std::string fmt(double e) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", e);
  return buf;
}

const char* cls_name(int c) { return c == 0 ? "a" : "b"; }

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// Streams of one clinic carried by one base station (node index).
struct Share {
  int bs;
  int streams;
};

// Raw streams of one class from one clinic through one BS.
struct Unit {
  int clinic;  // position
  int bs;      // node index
  int cls;
  int streams;
};

// Decision part of a possibly partial placement.
struct Placement {
  std::array<std::vector<std::vector<int>>, 2> omega;
  std::array<std::vector<int>, 2> phi;
  // (clinic, bs, fog, cls) node indices -> patients
  std::map<std::tuple<int, int, int, int>, int> raw, fb;
};

struct Stage {
  std::string pre;  // trace prefix
  std::vector<int> classes;
  bool separate_hosts = false;  // later classes skip earlier hosts
  std::array<std::vector<Unit>, 2> units;
  std::vector<std::vector<Share>> fb;  // by clinic position
  std::array<int, 2> budget{0, 0};     // servers per class
  std::vector<int> candidates;         // fog positions, ascending
  int k0 = 1;
  bool final_stage = true;
  Err err = Err::Assignment;
};

class Engine {
 public:
  Engine(const NetworkInstance& inst, const DerivedParams& p, const DemandSet& demand, Level level,
         const HeuristicOptions& opts)
      : inst_(inst), p_(p), demand_(demand), level_(level), opts_(opts) {
    nc_ = inst.clinics().size();
    nf_ = inst.fog_nodes().size();
    if (demand.patients.size() != nc_) throw InvalidConfig("demand does not match the instance clinics");
    if (p.N <= 0 || p.Pat <= 0) throw InvalidConfig("N and Pat must be positive");
    hops_.resize(nf_);
    for (std::size_t d = 0; d < nf_; ++d) hops_[d] = hop_distances(inst, inst.fog_nodes()[d]);
    const int R = inst.radio().prb_cap;
    cap_[0] = p.Rp > 0 ? R / p.Rp : 0;
    cap_[1] = p.Rf > 0 ? R / p.Rf : 0;
    for (int b : inst.base_stations()) clusters_.insert(inst.node(b).cluster);
  }

  HeuristicTrace& trace() { return trace_; }
  const std::set<int>& clusters() const { return clusters_; }
  int servers_needed() const { return (demand_.total() + p_.Pat - 1) / p_.Pat; }

  bool bs_in(int b, int cluster) const { return inst_.node(b).cluster == cluster; }

  // Clinics grouped by BSs reachable in `cluster`, groups ascending; inside
  // a group by total BS count or by patients.
  std::vector<int> order_clinics(int cluster, bool by_patients, const std::vector<char>& allowed,
                                 const std::string& pre) {
    struct Key {
      int group, second, pos;
    };
    std::vector<Key> keys;
    for (std::size_t s = 0; s < nc_; ++s) {
      const int c = inst_.clinics()[s];
      int in = 0, all = 0;
      for (int b : inst_.bs_of_clinic(c)) {
        if (!allowed[static_cast<std::size_t>(inst_.bs_pos(b))]) continue;
        ++all;
        if (bs_in(b, cluster)) ++in;
      }
      keys.push_back({in, by_patients ? demand_.patients[s] : all, static_cast<int>(s)});
    }
    std::sort(keys.begin(), keys.end(), [](const Key& x, const Key& y) {
      return std::tie(x.group, x.second, x.pos) < std::tie(y.group, y.second, y.pos);
    });
    std::vector<int> order;
    std::string line;
    int cur = -1;
    for (const auto& k : keys) {
      if (k.group != cur) {
        if (!line.empty()) trace_.lines.push_back(line);
        line = pre + "group " + std::to_string(k.group);
        cur = k.group;
      }
      line += " " + inst_.id_of(inst_.clinics()[static_cast<std::size_t>(k.pos)]);
      order.push_back(k.pos);
    }
    if (!line.empty()) trace_.lines.push_back(line);
    return order;
  }

  // Packs copies * patients streams per clinic into base stations.
  std::vector<std::vector<Share>> pack(int task, const std::vector<int>& order, const std::vector<char>& allowed,
                                       int copies, int first_cluster, const std::string& pre, Err err) {
    const std::size_t nb = inst_.base_stations().size();
    std::vector<int> left(nb, cap_[static_cast<std::size_t>(task)]);
    std::vector<char> used(nb, 0);
    std::vector<std::vector<Share>> out(nc_);
    for (int s : order) {
      int need = copies * demand_.patients[static_cast<std::size_t>(s)];
      if (need == 0) continue;
      const int clinic = inst_.clinics()[static_cast<std::size_t>(s)];
      std::vector<int> active, fresh;
      for (int b : inst_.bs_of_clinic(clinic)) {
        const auto j = static_cast<std::size_t>(inst_.bs_pos(b));
        if (!allowed[j]) continue;
        if (used[j]) {
          if (left[j] > 0) active.push_back(b);
        } else {
          fresh.push_back(b);
        }
      }
      std::sort(active.begin(), active.end(), [&](int x, int y) {
        return std::pair(inst_.bs_degree(x), x) < std::pair(inst_.bs_degree(y), y);
      });
      // the first cluster ranks ahead of the others, then by cluster id
      auto rank = [&](int b) {
        const int c = inst_.node(b).cluster;
        return std::pair(c == first_cluster ? 0 : 1, c);
      };
      std::sort(fresh.begin(), fresh.end(), [&](int x, int y) {
        if (rank(x) != rank(y)) return rank(x) < rank(y);
        if (inst_.bs_degree(x) != inst_.bs_degree(y)) return inst_.bs_degree(x) > inst_.bs_degree(y);
        return x < y;
      });
      active.insert(active.end(), fresh.begin(), fresh.end());
      std::string line = pre + "bs " + (task == 0 ? "raw " : "fb ") + inst_.id_of(clinic);
      for (int b : active) {
        if (need == 0) break;
        const auto j = static_cast<std::size_t>(inst_.bs_pos(b));
        const int x = std::min(need, left[j]);
        if (x <= 0) continue;
        left[j] -= x;
        used[j] = 1;
        need -= x;
        out[static_cast<std::size_t>(s)].push_back({b, x});
        line += " " + inst_.id_of(b) + ":" + std::to_string(x);
      }
      trace_.lines.push_back(line);
      if (need > 0) {
        raise(err, "base stations of " + inst_.id_of(clinic) + " lack " + std::string(task == 0 ? "raw" : "feedback") +
                       " PRBs for " + std::to_string(need) + " streams");
      }
    }
    return out;
  }

  // Splits each clinic's raw shares into classes (first copy primary) and
  // orders units by BS load, heaviest first.
  std::array<std::vector<Unit>, 2> units(const std::vector<std::vector<Share>>& raw,
                                         const std::vector<int>& classes) const {
    std::array<std::vector<Unit>, 2> out;
    std::map<int, int> bs_load;
    for (std::size_t s = 0; s < nc_; ++s) {
      const int P = demand_.patients[s];
      std::size_t ci = 0;
      int room = P;
      for (const auto& sh : raw[s]) {
        bs_load[sh.bs] += sh.streams;
        int left = sh.streams;
        while (left > 0 && ci < classes.size()) {
          const int x = std::min(left, room);
          out[static_cast<std::size_t>(classes[ci])].push_back({static_cast<int>(s), sh.bs, classes[ci], x});
          left -= x;
          room -= x;
          if (room == 0) {
            ++ci;
            room = P;
          }
        }
      }
    }
    for (auto& v : out) {
      std::stable_sort(v.begin(), v.end(), [&](const Unit& x, const Unit& y) {
        const int lx = bs_load[x.bs], ly = bs_load[y.bs];
        if (lx != ly) return lx > ly;
        if (x.bs != y.bs) return x.bs < y.bs;
        return x.clinic < y.clinic;
      });
    }
    return out;
  }

  /// ONUs of the packed BSs plus the given OLTs, as fog positions.
  std::vector<int> candidates(const std::vector<std::vector<Share>>& raw, const std::vector<std::vector<Share>>& fb,
                              const std::vector<int>& olts, const std::vector<char>& forbidden) const {
    std::set<int> pos;
    for (const auto* side : {&raw, &fb}) {
      for (const auto& v : *side) {
        for (const auto& sh : v) pos.insert(inst_.fog_pos(inst_.onu_of_bs(sh.bs)));
      }
    }
    for (int o : olts) pos.insert(inst_.fog_pos(o));
    std::vector<int> out;
    for (int d : pos) {
      if (!forbidden.empty() && forbidden[static_cast<std::size_t>(inst_.fog_nodes()[static_cast<std::size_t>(d)])]) {
        continue;
      }
      out.push_back(d);
    }
    return out;
  }

  Placement empty_placement() const {
    Placement pl;
    for (int c = 0; c < 2; ++c) {
      pl.omega[static_cast<std::size_t>(c)].assign(nc_, std::vector<int>(nf_, 0));
      pl.phi[static_cast<std::size_t>(c)].assign(nf_, 0);
    }
    return pl;
  }

  int hop(std::size_t d, int node) const { return hops_[d][static_cast<std::size_t>(node)]; }

  // Raw assignment to the nearest node with capacity, then feedback
  // matching. False if some stream finds no node.
  bool place(const Stage& st, const std::vector<int>& combo, Placement& pl) const {
    const long Pat = p_.Pat;
    std::vector<char> banned(nf_, 0);
    for (int c : st.classes) {
      const auto cu = static_cast<std::size_t>(c);
      std::vector<long> load(nf_, 0);
      for (std::size_t s = 0; s < nc_; ++s) {
        for (std::size_t d = 0; d < nf_; ++d) load[d] += pl.omega[cu][s][d];
      }
      std::vector<int> nodes;
      for (int d : combo) {
        if (!banned[static_cast<std::size_t>(d)]) nodes.push_back(d);
      }
      int opened = 0;
      for (const auto& u : st.units[cu]) {
        std::sort(nodes.begin(), nodes.end(), [&](int x, int y) {
          const int hx = hop(static_cast<std::size_t>(x), u.bs), hy = hop(static_cast<std::size_t>(y), u.bs);
          if (hx != hy) return hx < hy;
          return inst_.fog_nodes()[static_cast<std::size_t>(x)] < inst_.fog_nodes()[static_cast<std::size_t>(y)];
        });
        long left = u.streams;
        while (left > 0) {
          int pick = -1;
          long free = 0;
          for (int d : nodes) {
            const auto du = static_cast<std::size_t>(d);
            if (hop(du, u.bs) < 0) continue;
            free = pl.phi[cu][du] * Pat - load[du];
            if (free > 0 || (pl.phi[0][du] + pl.phi[1][du] < p_.N && opened < st.budget[cu])) {
              pick = d;
              break;
            }
          }
          if (pick < 0) return false;
          const auto du = static_cast<std::size_t>(pick);
          if (free <= 0) {
            ++pl.phi[cu][du];
            ++opened;
            free = Pat;
          }
          const long x = std::min(left, free);
          load[du] += x;
          pl.omega[cu][static_cast<std::size_t>(u.clinic)][du] += static_cast<int>(x);
          pl.raw[{inst_.clinics()[static_cast<std::size_t>(u.clinic)], u.bs, inst_.fog_nodes()[du], c}] +=
              static_cast<int>(x);
          left -= x;
        }
      }
      if (st.separate_hosts) {
        for (std::size_t d = 0; d < nf_; ++d) {
          if (load[d] > 0) banned[d] = 1;
        }
      }
    }
    // Feedback: each (class, host) source takes the closest of the clinic's
    // feedback BSs that still has streams.
    for (std::size_t s = 0; s < nc_; ++s) {
      auto sinks = st.fb[s];
      for (int c : st.classes) {
        for (std::size_t d = 0; d < nf_; ++d) {
          int cnt = pl.omega[static_cast<std::size_t>(c)][s][d];
          while (cnt > 0) {
            Share* best = nullptr;
            for (auto& sk : sinks) {
              if (sk.streams <= 0 || hop(d, sk.bs) < 0) continue;
              if (!best || std::pair(hop(d, sk.bs), sk.bs) < std::pair(hop(d, best->bs), best->bs)) best = &sk;
            }
            if (!best) return false;
            const int x = std::min(cnt, best->streams);
            best->streams -= x;
            cnt -= x;
            pl.fb[{inst_.clinics()[s], best->bs, inst_.fog_nodes()[d], c}] += x;
          }
        }
      }
    }
    return true;
  }

  Solution to_solution(const Placement& pl) const {
    Solution s = empty_solution(inst_, level_);
    s.omega_a = pl.omega[0];
    s.omega_b = pl.omega[1];
    s.phi_a = pl.phi[0];
    s.phi_b = pl.phi[1];
    for (const auto& [k, v] : pl.raw) {
      const auto& [clinic, bs, fog, c] = k;
      s.raw.push_back({clinic, bs, fog, c, v});
    }
    for (const auto& [k, v] : pl.fb) {
      const auto& [clinic, bs, fog, c] = k;
      s.feedback.push_back({clinic, bs, fog, c, v});
    }
    assemble(inst_, p_, s);
    return s;
  }

  // Energy of a combination, +inf when it does not yield a valid placement.
  double score(const Stage& st, const Placement& fixed, const std::vector<int>& combo) const {
    try {
      Placement pl = fixed;
      if (!place(st, combo, pl)) return kInf;
      const Solution s = to_solution(pl);
      if (st.final_stage) {
        if (!check(inst_, p_, level_, demand_, s).feasible()) return kInf;
      } else if (!capacity_violations(inst_, s.flows, task_rates(p_)).empty()) {
        return kInf;
      }
      return evaluate(inst_, p_, s).total;
    } catch (const Error&) {
      return kInf;
    }
  }

  std::string combo_ids(const std::vector<int>& combo) const {
    std::string out;
    for (int d : combo) {
      if (!out.empty()) out += ",";
      out += inst_.id_of(inst_.fog_nodes()[static_cast<std::size_t>(d)]);
    }
    return out;
  }

  // Increasing-size combination search; returns the chosen placement.
  Placement search(const Stage& st, const Placement& fixed) {
    std::vector<int> cand = st.candidates;
    const std::string& pre = st.pre;
    std::optional<std::pair<double, std::vector<int>>> best;
    int k = std::max(1, st.k0);
    for (; k <= static_cast<int>(st.candidates.size()); ++k) {
      std::vector<int> pool = cand;
      if (binomial(pool.size(), static_cast<std::size_t>(k)) > kComboCap) {
        pool = top_candidates(st, cand);
        trace_.lines.push_back(pre + "prune " + std::to_string(k) + " " + combo_ids(pool));
      }
      const auto combos = combinations(pool, static_cast<std::size_t>(k));
      std::vector<double> e(combos.size(), kInf);
      const long n = static_cast<long>(combos.size());
#pragma omp parallel for schedule(dynamic, 4) if (opts_.parallel)
      for (long i = 0; i < n; ++i) e[static_cast<std::size_t>(i)] = score(st, fixed, combos[static_cast<std::size_t>(i)]);
      std::size_t arg = combos.size();
      for (std::size_t i = 0; i < combos.size(); ++i) {
        trace_.lines.push_back(pre + "combo " + std::to_string(k) + " " + combo_ids(combos[i]) + " " +
                               (e[i] == kInf ? std::string("infeasible") : fmt(e[i])));
        if (e[i] < kInf && (arg == combos.size() || e[i] < e[arg])) arg = i;
      }
      if (arg == combos.size()) {
        if (best) {
          trace_.lines.push_back(pre + "stop " + std::to_string(k) + " infeasible");
          break;
        }
        continue;
      }
      if (best && !(e[arg] < best->first)) {
        trace_.lines.push_back(pre + "stop " + std::to_string(k) + " no-improvement");
        break;
      }
      best = std::pair(e[arg], combos[arg]);
      trace_.lines.push_back(pre + "best " + std::to_string(k) + " " + combo_ids(combos[arg]) + " " + fmt(e[arg]));
    }
    if (k > static_cast<int>(st.candidates.size())) trace_.lines.push_back(pre + "stop " + std::to_string(k) + " exhausted");
    if (!best) raise(st.err, "no node combination yields a feasible placement");
    Placement pl = fixed;
    place(st, best->second, pl);
    return pl;
  }

  // Candidates nearest to the stage's raw traffic.
  std::vector<int> top_candidates(const Stage& st, const std::vector<int>& cand) const {
    std::vector<std::pair<long, int>> ranked;
    for (int d : cand) {
      long agg = 0;
      for (int c : st.classes) {
        for (const auto& u : st.units[static_cast<std::size_t>(c)]) {
          const int h = hop(static_cast<std::size_t>(d), u.bs);
          agg += static_cast<long>(u.streams) * (h < 0 ? 1000 : h);
        }
      }
      ranked.emplace_back(agg, inst_.fog_nodes()[static_cast<std::size_t>(d)]);
    }
    std::sort(ranked.begin(), ranked.end());
    ranked.resize(std::min(ranked.size(), kTopCandidates));
    std::vector<int> out;
    for (const auto& r : ranked) out.push_back(inst_.fog_pos(r.second));
    std::sort(out.begin(), out.end());
    return out;
  }

  static std::vector<std::vector<int>> combinations(const std::vector<int>& pool, std::size_t k) {
    std::vector<std::vector<int>> out;
    if (k > pool.size()) return out;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::vector<int> c(k);
      for (std::size_t i = 0; i < k; ++i) c[i] = pool[idx[i]];
      out.push_back(std::move(c));
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == pool.size() - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
  }

  HeuristicResult finish(const Placement& pl) {
    HeuristicResult r;
    r.solution = to_solution(pl);
    r.energy = evaluate(inst_, p_, r.solution);
    for (const auto& a : r.solution.raw) alloc_line("raw", a);
    for (const auto& a : r.solution.feedback) alloc_line("fb", a);
    for (int c = 0; c < 2; ++c) {
      for (std::size_t d = 0; d < nf_; ++d) {
        const int n = pl.phi[static_cast<std::size_t>(c)][d];
        if (n > 0) trace_.lines.push_back("phi " + inst_.id_of(inst_.fog_nodes()[d]) + " " + cls_name(c) + " " + std::to_string(n));
      }
    }
    r.trace = trace_;
    return r;
  }

  HeuristicResult empty_result() {
    trace_.lines.push_back("stop 0 no-demand");
    return finish(empty_placement());
  }

  const NetworkInstance& inst_;
  const DerivedParams& p_;
  const DemandSet& demand_;
  Level level_;
  HeuristicOptions opts_;

 private:
  void alloc_line(const char* task, const StreamAlloc& a) {
    trace_.lines.push_back(std::string("alloc ") + task + " " + inst_.id_of(a.clinic) + " " + inst_.id_of(a.bs) + " " +
                           inst_.id_of(a.fog) + " " + cls_name(a.cls) + " " + std::to_string(a.patients));
  }

  std::size_t nc_ = 0, nf_ = 0;
  std::vector<std::vector<int>> hops_;  // [fog position][node]
  std::array<int, 2> cap_{0, 0};        // streams per BS, raw / feedback
  std::set<int> clusters_;
  HeuristicTrace trace_;
};

int ceil_div(int a, int b) { return (a + b - 1) / b; }

// EORIWG and EORIG share everything but the host separation.
HeuristicResult shared_pipeline(const NetworkInstance& inst, const DerivedParams& p, const DemandSet& demand,
                                Level level, const HeuristicOptions& opts) {
  Engine en(inst, p, demand, level, opts);
  if (demand.total() == 0) return en.empty_result();
  const int copies = fogres::copies(level);
  const int first = en.clusters().empty() ? 0 : *en.clusters().begin();
  const std::vector<char> all(inst.base_stations().size(), 1);
  const auto order = en.order_clinics(first, false, all, "");
  const auto raw = en.pack(0, order, all, copies, first, "", Err::Assignment);
  const auto fb = en.pack(1, order, all, copies, first, "", Err::Assignment);

  Stage st;
  st.classes = copies == 2 ? std::vector<int>{0, 1} : std::vector<int>{0};
  st.separate_hosts = level == Level::B;
  st.err = st.separate_hosts ? Err::Nodes : Err::Assignment;
  st.units = en.units(raw, st.classes);
  st.fb = fb;
  const int S = en.servers_needed();
  for (int c : st.classes) st.budget[static_cast<std::size_t>(c)] = S;
  st.k0 = st.separate_hosts ? 2 * ceil_div(S, p.N) : ceil_div(copies * S, p.N);
  st.candidates = en.candidates(raw, fb, {inst.olts().begin(), inst.olts().end()}, {});
  if (st.separate_hosts && st.candidates.size() < 2) throw NoDisjointNodes("fewer than two candidate nodes");
  return en.finish(en.search(st, en.empty_placement()));
}

}  // namespace

HeuristicResult eoriwg(const NetworkInstance& inst, const DerivedParams& params, const DemandSet& demand,
                       const HeuristicOptions& opts) {
  return shared_pipeline(inst, params, demand, Level::A, opts);
}

HeuristicResult eorig(const NetworkInstance& inst, const DerivedParams& params, const DemandSet& demand,
                      const HeuristicOptions& opts) {
  return shared_pipeline(inst, params, demand, Level::B, opts);
}

namespace {

HeuristicResult one_orientation(const NetworkInstance& inst, const DerivedParams& p, const DemandSet& demand,
                                const HeuristicOptions& opts, int X, int Y) {
  Engine en(inst, p, demand, Level::C, opts);
  const auto nb = inst.base_stations().size();
  auto cluster_bs = [&](int cl, const std::vector<char>& banned) {
    std::vector<char> ok(nb, 0);
    for (std::size_t j = 0; j < nb; ++j) {
      const int b = inst.base_stations()[j];
      ok[j] = static_cast<char>(inst.node(b).cluster == cl && (banned.empty() || !banned[static_cast<std::size_t>(b)]));
    }
    return ok;
  };
  auto cluster_olts = [&](const std::vector<char>& ok, const std::vector<char>& banned) {
    std::set<int> olts;
    for (std::size_t j = 0; j < nb; ++j) {
      const int o = inst.olt_of_bs(inst.base_stations()[j]);
      if (ok[j] && (banned.empty() || !banned[static_cast<std::size_t>(o)])) olts.insert(o);
    }
    return std::vector<int>(olts.begin(), olts.end());
  };
  const int S = en.servers_needed();

  auto stage = [&](int cls, int cl, const std::vector<char>& banned) {
    const std::string pre = cls == 0 ? "a:" : "b:";
    const auto ok = cluster_bs(cl, banned);
    const auto order = en.order_clinics(cl, true, ok, pre);
    const auto raw = en.pack(0, order, ok, 1, cl, pre, Err::Route);
    const auto fb = en.pack(1, order, ok, 1, cl, pre, Err::Route);
    Stage st;
    st.pre = pre;
    st.classes = {cls};
    st.units = en.units(raw, st.classes);
    st.fb = fb;
    st.budget[static_cast<std::size_t>(cls)] = S;
    st.k0 = ceil_div(S, p.N);
    st.candidates = en.candidates(raw, fb, cluster_olts(ok, banned), banned);
    st.final_stage = cls == 1;
    st.err = cls == 1 ? Err::Route : Err::Assignment;
    return st;
  };

  const Placement primary = en.search(stage(0, X, {}), en.empty_placement());
  // Everything the primary traffic touches in the access layer is off limits.
  const Solution partial = en.to_solution(primary);
  std::vector<char> banned = class_node_usage(inst, partial.flows, 0);
  for (std::size_t i = 0; i < banned.size(); ++i) {
    if (!inst.is_access(static_cast<int>(i))) banned[i] = 0;
  }
  return en.finish(en.search(stage(1, Y, banned), primary));
}

bool replay_record(const std::string& line) { return line.rfind("alloc ", 0) == 0 || line.rfind("phi ", 0) == 0; }

}  // namespace

HeuristicResult eorign(const NetworkInstance& inst, const DerivedParams& params, const DemandSet& demand,
                       const HeuristicOptions& opts) {
  if (demand.total() == 0) {
    Engine en(inst, params, demand, Level::C, opts);
    return en.empty_result();
  }
  std::set<int> clusters;
  for (int b : inst.base_stations()) clusters.insert(inst.node(b).cluster);
  if (clusters.size() < 2) throw NoDisjointRoute("scenario C needs base stations in two clusters");

  HeuristicTrace log;
  std::optional<HeuristicResult> best;
  std::optional<NoDisjointRoute> route_err;
  std::optional<NoFeasibleAssignment> assign_err;
  for (int X : clusters) {
    for (int Y : clusters) {
      if (X == Y) continue;
      const std::string tag = "orient " + std::to_string(X) + " " + std::to_string(Y) + " ";
      try {
        auto r = one_orientation(inst, params, demand, opts, X, Y);
        for (const auto& l : r.trace.lines) {
          if (!replay_record(l)) log.lines.push_back(l);
        }
        log.lines.push_back(tag + fmt(r.energy.total));
        if (!best || r.energy.total < best->energy.total) best = std::move(r);
      } catch (const NoDisjointRoute& e) {
        log.lines.push_back(tag + "error NoDisjointRoute");
        if (!route_err) route_err = e;
      } catch (const NoFeasibleAssignment& e) {
        log.lines.push_back(tag + "error NoFeasibleAssignment");
        if (!assign_err) assign_err = e;
      }
    }
  }
  if (!best) {
    if (route_err) throw *route_err;
    throw *assign_err;
  }
  for (const auto& l : best->trace.lines) {
    if (replay_record(l)) log.lines.push_back(l);
  }
  best->trace = std::move(log);
  return std::move(*best);
}

HeuristicResult run_heuristic(const NetworkInstance& inst, const DerivedParams& params, Level level,
                              const DemandSet& demand, const HeuristicOptions& opts) {
  switch (level) {
    case Level::C: return eorign(inst, params, demand, opts);
    default: return shared_pipeline(inst, params, demand, level, opts);
  }
}

Solution replay(const NetworkInstance& inst, const DerivedParams& params, Level level, const HeuristicTrace& trace) {
  Solution s = empty_solution(inst, level);
  for (const auto& line : trace.lines) {
    if (!replay_record(line)) continue;
    std::istringstream in(line);
    std::string kind;
    in >> kind;
    auto cls_of = [&](const std::string& c) {
      if (c != "a" && c != "b") throw ParseError("bad class in trace: " + line);
      return c == "a" ? 0 : 1;
    };
    if (kind == "phi") {
      std::string fog, c;
      int n = 0;
      if (!(in >> fog >> c >> n)) throw ParseError("bad trace line: " + line);
      const int d = inst.fog_pos(inst.index_of(fog));
      if (d < 0) throw ParseError("not a fog node: " + fog);
      (cls_of(c) == 0 ? s.phi_a : s.phi_b)[static_cast<std::size_t>(d)] = n;
      continue;
    }
    std::string task, clinic, bs, fog, c;
    int n = 0;
    if (!(in >> task >> clinic >> bs >> fog >> c >> n)) throw ParseError("bad trace line: " + line);
    const StreamAlloc a{inst.index_of(clinic), inst.index_of(bs), inst.index_of(fog), cls_of(c), n};
    if (task == "raw") {
      s.raw.push_back(a);
      const int sp = inst.clinic_pos(a.clinic), d = inst.fog_pos(a.fog);
      if (sp < 0 || d < 0) throw ParseError("bad trace line: " + line);
      (a.cls == 0 ? s.omega_a : s.omega_b)[static_cast<std::size_t>(sp)][static_cast<std::size_t>(d)] += n;
    } else if (task == "fb") {
      s.feedback.push_back(a);
    } else {
      throw ParseError("bad trace line: " + line);
    }
  }
  assemble(inst, params, s);
  return s;
}

}  // namespace fogres
