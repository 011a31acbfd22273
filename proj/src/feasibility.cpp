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

#include "fogres/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace fogres {

bool FeasibilityReport::has(std::string_view tag) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.tag == tag; });
}

std::string FeasibilityReport::text(const NetworkInstance& inst) const {
  std::ostringstream os;
  for (const auto& v : violations) {
    os << "VIOLATION eq=" << v.tag << " node=" << (v.node >= 0 ? inst.id_of(v.node) : std::string("-"))
       << " detail=" << v.detail << '\n';
  }
  return os.str();
}

int server_lower_bound(int total_patients, int pat, bool resilient) {
  if (pat <= 0) throw InvalidConfig("patients per server must be positive");
  const int one = (total_patients + pat - 1) / pat;
  return resilient ? 2 * one : one;
}

namespace {

class Checker {
 public:
  Checker(const NetworkInstance& inst, const DerivedParams& p, Level level, const DemandSet& demand,
          const Solution& sol)
      : inst_(inst), p_(p), level_(level), demand_(demand), sol_(sol) {}

  FeasibilityReport run() {
    if (!structure_ok()) return std::move(report_);
    loads();
    assignment();
    traffic_definitions();
    conservation();
    aggregates_and_activation();
    capacities();
    hosts();
    radio();
    servers();
    if (level_ == Level::C) disjointness();
    return std::move(report_);
  }

 private:
  void add(std::string tag, int node, std::string detail) {
    report_.violations.push_back({std::move(tag), node, std::move(detail)});
  }
  const char* tag(const char* merged, const char* cls_a, const char* cls_b, int cls) const {
    if (level_ != Level::C) return merged;
    return cls == 0 ? cls_a : cls_b;
  }
  int clinic(std::size_t s) const { return inst_.clinics()[s]; }
  int fog(std::size_t d) const { return inst_.fog_nodes()[d]; }
  int bs(std::size_t j) const { return inst_.base_stations()[j]; }
  const std::vector<std::vector<int>>& omega(int cls) const { return cls == 0 ? sol_.omega_a : sol_.omega_b; }

  bool structure_ok() {
    const auto nc = inst_.clinics().size(), nf = inst_.fog_nodes().size(), nb = inst_.base_stations().size();
    const auto n = inst_.node_count();
    bool ok = sol_.omega_a.size() == nc && sol_.omega_b.size() == nc && sol_.phi_a.size() == nf &&
              sol_.phi_b.size() == nf && sol_.y_a.size() == nf && sol_.y_b.size() == nf && sol_.y.size() == nf &&
              sol_.pp.size() == nc && sol_.pf.size() == nc && sol_.beta_a.size() == nb && sol_.beta_b.size() == nb &&
              sol_.tau_pa.size() == nf && sol_.tau_pb.size() == nf && sol_.flows.zeta_a.size() == n &&
              demand_.patients.size() == nc;
    for (std::size_t s = 0; ok && s < nc; ++s) {
      ok = sol_.omega_a[s].size() == nf && sol_.omega_b[s].size() == nf && sol_.pp[s].size() == nb &&
           sol_.pf[s].size() == nb;
    }
    if (!ok) add("structure", -1, "solution is not assembled for this instance");
    return ok;
  }

  void loads() {
    const auto nf = inst_.fog_nodes().size();
    load_.assign(kClasses, std::vector<long>(nf, 0));
    for (int c = 0; c < kClasses; ++c) {
      for (const auto& row : omega(c)) {
        for (std::size_t d = 0; d < nf; ++d) load_[static_cast<std::size_t>(c)][d] += row[d];
      }
    }
  }

  // (32)-(35)
  void assignment() {
    const bool res = level_ != Level::NonRes;
    for (std::size_t s = 0; s < inst_.clinics().size(); ++s) {
      long ta = 0, tb = 0;
      for (std::size_t d = 0; d < inst_.fog_nodes().size(); ++d) {
        const int wa = sol_.omega_a[s][d], wb = sol_.omega_b[s][d];
        ta += wa, tb += wb;
        if (wa < 0 || (wa > 0 && !sol_.y_a[d])) {
          add("Eq.32", fog(d), "omega_a=" + std::to_string(wa) + " from " + inst_.id_of(clinic(s)) + " with Ya=" +
                                   std::to_string(int(sol_.y_a[d])));
        }
        if (wb < 0 || (wb > 0 && !sol_.y_b[d])) {
          add("Eq.33", fog(d), "omega_b=" + std::to_string(wb) + " from " + inst_.id_of(clinic(s)) + " with Yb=" +
                                   std::to_string(int(sol_.y_b[d])));
        }
      }
      const int pt = demand_.patients[s];
      if (ta != pt) add("Eq.34", clinic(s), "sum omega_a=" + std::to_string(ta) + " != " + std::to_string(pt));
      if (tb != (res ? pt : 0)) {
        add("Eq.35", clinic(s), "sum omega_b=" + std::to_string(tb) + " != " + std::to_string(res ? pt : 0));
      }
    }
  }

  // (36)-(38) / (73)-(78): the allocations must carry exactly omega.
  void traffic_definitions() {
    const auto nc = inst_.clinics().size(), nf = inst_.fog_nodes().size();
    for (int task = 0; task < 2; ++task) {
      std::vector<std::vector<std::vector<long>>> carried(
          kClasses, std::vector<std::vector<long>>(nc, std::vector<long>(nf, 0)));
      const auto& allocs = task == 0 ? sol_.raw : sol_.feedback;
      for (const auto& a : allocs) {
        const int cp = inst_.clinic_pos(a.clinic), fp = inst_.fog_pos(a.fog);
        if (cp < 0 || fp < 0 || a.cls < 0 || a.cls >= kClasses) continue;
        carried[static_cast<std::size_t>(a.cls)][static_cast<std::size_t>(cp)][static_cast<std::size_t>(fp)] +=
            a.patients;
      }
      for (int c = 0; c < kClasses; ++c) {
        for (std::size_t s = 0; s < nc; ++s) {
          for (std::size_t d = 0; d < nf; ++d) {
            const long want = omega(c)[s][d];
            const long got = carried[static_cast<std::size_t>(c)][s][d];
            if (want == got) continue;
            const char* t = task == 0 ? tag("Eq.36", "Eq.73", "Eq.74", c) : tag("Eq.37", "Eq.75", "Eq.76", c);
            add(t, fog(d), std::string(task == 0 ? "raw" : "feedback") + " streams " + inst_.id_of(clinic(s)) +
                               " carry " + std::to_string(got) + " != omega " + std::to_string(want));
          }
        }
      }
    }
    // Storage: the stream count leaving each fog node towards the cloud.
    for (int c = 0; c < kClasses; ++c) {
      std::vector<long> sent(inst_.fog_nodes().size(), 0);
      for (const auto& r : sol_.flows.routes) {
        if (r.demand.task != Task::Storage || r.demand.cls != c) continue;
        const int fp = inst_.fog_pos(r.demand.src);
        if (fp >= 0 && r.demand.dst == inst_.cloud_storage()) sent[static_cast<std::size_t>(fp)] += r.demand.streams;
      }
      for (std::size_t d = 0; d < sent.size(); ++d) {
        if (sent[d] != load_[static_cast<std::size_t>(c)][d]) {
          add(tag("Eq.38", "Eq.77", "Eq.78", c), fog(d),
              "storage streams " + std::to_string(sent[d]) + " != hosted " +
                  std::to_string(load_[static_cast<std::size_t>(c)][d]));
        }
      }
    }
  }

  // Net outflow per node computed from the arcs.
  std::vector<long> net_out(int cls, Task t) const {
    const auto& arc = sol_.flows.arc_streams[static_cast<std::size_t>(cls)][static_cast<std::size_t>(t)];
    std::vector<long> net(inst_.node_count(), 0);
    for (std::size_t li = 0; li < inst_.links().size(); ++li) {
      const auto& l = inst_.links()[li];
      net[static_cast<std::size_t>(l.a)] += arc[2 * li] - arc[2 * li + 1];
      net[static_cast<std::size_t>(l.b)] += arc[2 * li + 1] - arc[2 * li];
    }
    return net;
  }

  // (39)-(41) / (79)-(84)
  void conservation() {
    const auto nc = inst_.clinics().size(), nf = inst_.fog_nodes().size();
    for (int c = 0; c < kClasses; ++c) {
      const auto& w = omega(c);
      for (int t = 0; t < kTasks; ++t) {
        std::vector<long> expect(inst_.node_count(), 0);
        if (t == static_cast<int>(Task::Storage)) {
          for (std::size_t d = 0; d < nf; ++d) {
            expect[static_cast<std::size_t>(fog(d))] += load_[static_cast<std::size_t>(c)][d];
            expect[static_cast<std::size_t>(inst_.cloud_storage())] -= load_[static_cast<std::size_t>(c)][d];
          }
        } else {
          const long sign = t == static_cast<int>(Task::Processing) ? 1 : -1;
          for (std::size_t s = 0; s < nc; ++s) {
            for (std::size_t d = 0; d < nf; ++d) {
              expect[static_cast<std::size_t>(clinic(s))] += sign * w[s][d];
              expect[static_cast<std::size_t>(fog(d))] -= sign * w[s][d];
            }
          }
        }
        const auto net = net_out(c, static_cast<Task>(t));
        static const char* kMerged[] = {"Eq.39", "Eq.40", "Eq.41"};
        static const char* kA[] = {"Eq.79", "Eq.81", "Eq.83"};
        static const char* kB[] = {"Eq.80", "Eq.82", "Eq.84"};
        for (std::size_t i = 0; i < net.size(); ++i) {
          if (net[i] != expect[i]) {
            add(tag(kMerged[t], kA[t], kB[t], c), static_cast<int>(i),
                "net outflow " + std::to_string(net[i]) + " != " + std::to_string(expect[i]));
          }
        }
      }
    }
  }

  // (42)-(44) and the activation families (49b)-(57).
  void aggregates_and_activation() {
    const auto n = inst_.node_count();
    std::vector<long> tot_in(n * kTasks, 0), tot_out(n * kTasks, 0);
    for (int c = 0; c < kClasses; ++c) {
      for (int t = 0; t < kTasks; ++t) {
        const auto& arc = sol_.flows.arc_streams[static_cast<std::size_t>(c)][static_cast<std::size_t>(t)];
        std::vector<long> in(n, 0), out(n, 0);
        for (std::size_t li = 0; li < inst_.links().size(); ++li) {
          const auto& l = inst_.links()[li];
          out[static_cast<std::size_t>(l.a)] += arc[2 * li];
          in[static_cast<std::size_t>(l.b)] += arc[2 * li];
          out[static_cast<std::size_t>(l.b)] += arc[2 * li + 1];
          in[static_cast<std::size_t>(l.a)] += arc[2 * li + 1];
        }
        const auto& node = sol_.flows.node_streams[static_cast<std::size_t>(c)][static_cast<std::size_t>(t)];
        for (std::size_t i = 0; i < n; ++i) {
          tot_in[i * kTasks + static_cast<std::size_t>(t)] += in[i];
          tot_out[i * kTasks + static_cast<std::size_t>(t)] += out[i];
          long want = 0;
          switch (static_cast<Task>(t)) {
            case Task::Processing: want = in[i]; break;
            case Task::Feedback: want = out[i]; break;
            case Task::Storage: {
              want = in[i];
              const int fp = inst_.fog_pos(static_cast<int>(i));
              if (fp >= 0) want += load_[static_cast<std::size_t>(c)][static_cast<std::size_t>(fp)];
              break;
            }
          }
          if (node[i] != want) {
            static const char* kTag[] = {"Eq.42", "Eq.43", "Eq.44"};
            add(kTag[t], static_cast<int>(i),
                "aggregate " + std::to_string(node[i]) + " != link sum " + std::to_string(want));
          }
        }
      }
    }
    const auto& f = sol_.flows;
    auto flag = [&](char z, long traffic, const char* lower, const char* upper, int i, const char* name) {
      if (z && traffic == 0) add(lower, i, std::string(name) + "=1 without traffic");
      if (!z && traffic > 0) add(upper, i, std::string(name) + "=0 with " + std::to_string(traffic) + " streams");
    };
    const auto P = static_cast<std::size_t>(Task::Processing), F = static_cast<std::size_t>(Task::Feedback),
               S = static_cast<std::size_t>(Task::Storage);
    for (std::size_t i = 0; i < n; ++i) {
      const int node = static_cast<int>(i);
      flag(f.zeta_a[i], tot_in[i * kTasks + P], "Eq.49b", "Eq.50", node, "zeta_a");
      flag(f.zeta_b[i], tot_out[i * kTasks + F], "Eq.51", "Eq.52", node, "zeta_b");
      flag(f.theta[i], tot_out[i * kTasks + S], "Eq.53", "Eq.54", node, "theta");
      flag(f.vartheta[i], tot_in[i * kTasks + S], "Eq.55", "Eq.56", node, "vartheta");
      if (static_cast<bool>(f.zeta_c[i]) != (f.theta[i] || f.vartheta[i])) {
        add("Eq.57", node, "zeta_c is not theta OR vartheta");
      }
    }
  }

  // (45)-(47)
  void capacities() {
    for (const auto& v : capacity_violations(inst_, sol_.flows, task_rates(p_))) {
      static const char* kTag[] = {"Eq.45", "Eq.46", "Eq.47"};
      const auto& l = inst_.links()[static_cast<std::size_t>(v.link)];
      const int to = v.from == l.a ? l.b : l.a;
      add(kTag[static_cast<int>(v.task)], v.from,
          "link to " + inst_.id_of(to) + " load " + std::to_string(v.load_bps) + " > " +
              std::to_string(v.capacity_bps));
    }
  }

  // (48) / (72), (49)
  void hosts() {
    for (std::size_t d = 0; d < inst_.fog_nodes().size(); ++d) {
      const int ya = sol_.y_a[d], yb = sol_.y_b[d], y = sol_.y[d];
      if (level_ == Level::B || level_ == Level::C) {
        if (ya + yb != y || y > 1) add("Eq.72", fog(d), "Ya+Yb=" + std::to_string(ya + yb) + ", Y=" + std::to_string(y));
      } else {
        const int z = 2 * y - ya - yb;
        if (z < 0 || z > 1 || y < 0 || y > 1) {
          add("Eq.48", fog(d), "Ya=" + std::to_string(ya) + " Yb=" + std::to_string(yb) + " Y=" + std::to_string(y));
        }
      }
      if (sol_.phi_a[d] > 0 && !ya) add("Eq.32", fog(d), "primary servers with Ya=0");
      if (sol_.phi_b[d] > 0 && !yb) add("Eq.33", fog(d), "secondary servers with Yb=0");
      if (sol_.phi_a[d] < 0 || sol_.phi_b[d] < 0 || sol_.phi_a[d] + sol_.phi_b[d] > p_.N) {
        add("Eq.49", fog(d), "phi_a+phi_b=" + std::to_string(sol_.phi_a[d] + sol_.phi_b[d]) + " > N=" +
                                 std::to_string(p_.N));
      }
      if (level_ == Level::NonRes && sol_.phi_b[d] != 0) add("Eq.67", fog(d), "secondary servers without protection");
    }
  }

  // (58)-(65)
  void radio() {
    const auto nc = inst_.clinics().size(), nb = inst_.base_stations().size();
    const int copies_needed = copies(level_);
    const auto& f = sol_.flows;
    std::vector<long> sum_pp(nb, 0), sum_pf(nb, 0);
    for (std::size_t s = 0; s < nc; ++s) {
      long tp = 0, tf = 0;
      for (std::size_t j = 0; j < nb; ++j) {
        const int l = inst_.link_between(clinic(s), bs(j));
        long up = 0, down = 0;
        if (l >= 0) {
          const auto& link = inst_.links()[static_cast<std::size_t>(l)];
          up = f.arc_total(Task::Processing, arc_of(link, l, clinic(s)));
          down = f.arc_total(Task::Feedback, arc_of(link, l, bs(j)));
        }
        if (sol_.pp[s][j] != up) {
          add("Eq.58", bs(j), "Pp[" + inst_.id_of(clinic(s)) + "]=" + std::to_string(sol_.pp[s][j]) +
                                  " but link carries " + std::to_string(up));
        }
        if (sol_.pf[s][j] != down) {
          add("Eq.62", bs(j), "Pf[" + inst_.id_of(clinic(s)) + "]=" + std::to_string(sol_.pf[s][j]) +
                                  " but link carries " + std::to_string(down));
        }
        tp += sol_.pp[s][j];
        tf += sol_.pf[s][j];
        sum_pp[j] += sol_.pp[s][j];
        sum_pf[j] += sol_.pf[s][j];
      }
      const long want = static_cast<long>(copies_needed) * demand_.patients[s];
      if (tp != want) add("Eq.59", clinic(s), "raw streams " + std::to_string(tp) + " != " + std::to_string(want));
      if (tf != want) add("Eq.63", clinic(s), "feedback streams " + std::to_string(tf) + " != " + std::to_string(want));
    }
    const int R = inst_.radio().prb_cap;
    for (std::size_t j = 0; j < nb; ++j) {
      if (sol_.beta_a[j] != p_.Rp * sum_pp[j]) {
        add("Eq.60", bs(j), "beta_a=" + std::to_string(sol_.beta_a[j]) + " != Rp*Pp=" + std::to_string(p_.Rp * sum_pp[j]));
      }
      if (sol_.beta_a[j] > R) add("Eq.61", bs(j), "beta_a=" + std::to_string(sol_.beta_a[j]) + " > R=" + std::to_string(R));
      if (sol_.beta_b[j] != p_.Rf * sum_pf[j]) {
        add("Eq.64", bs(j), "beta_b=" + std::to_string(sol_.beta_b[j]) + " != Rf*Pf=" + std::to_string(p_.Rf * sum_pf[j]));
      }
      if (sol_.beta_b[j] > R) add("Eq.65", bs(j), "beta_b=" + std::to_string(sol_.beta_b[j]) + " > R=" + std::to_string(R));
    }
  }

  // (66)-(71)
  void servers() {
    for (std::size_t d = 0; d < inst_.fog_nodes().size(); ++d) {
      const long la = load_[0][d], lb = load_[1][d];
      const int pa = sol_.phi_a[d], pb = sol_.phi_b[d];
      if (la > static_cast<long>(p_.omega_max()) * pa) {
        add("Eq.66", fog(d), std::to_string(la) + " primary patients on " + std::to_string(pa) + " servers");
      }
      if (lb > static_cast<long>(p_.omega_max()) * pb) {
        add("Eq.67", fog(d), std::to_string(lb) + " secondary patients on " + std::to_string(pb) + " servers");
      }
      const double ta = p_.m * static_cast<double>(la) + p_.c_const * pa;
      const double tb = p_.m * static_cast<double>(lb) + p_.c_const * pb;
      if (std::fabs(sol_.tau_pa[d] - ta) > 1e-9 * std::max(1.0, ta)) {
        add("Eq.68", fog(d), "tau_pa=" + std::to_string(sol_.tau_pa[d]) + " != " + std::to_string(ta));
      }
      if (std::fabs(sol_.tau_pb[d] - tb) > 1e-9 * std::max(1.0, tb)) {
        add("Eq.69", fog(d), "tau_pb=" + std::to_string(sol_.tau_pb[d]) + " != " + std::to_string(tb));
      }
      const double cap = p_.lambda_max();
      if (static_cast<double>(la) * p_.analysed_bits > cap * pa * (1.0 + 1e-12)) {
        add("Eq.70", fog(d), "primary storage exceeds server capacity");
      }
      if (static_cast<double>(lb) * p_.analysed_bits > cap * pb * (1.0 + 1e-12)) {
        add("Eq.71", fog(d), "secondary storage exceeds server capacity");
      }
    }
  }

  // (89)-(96)
  void disjointness() {
    const auto& f = sol_.flows;
    auto used = [&](int cls, std::size_t arc) {
      for (int t = 0; t < kTasks; ++t) {
        if (f.arc_streams[static_cast<std::size_t>(cls)][static_cast<std::size_t>(t)][arc] > 0) return true;
      }
      return false;
    };
    for (std::size_t li = 0; li < inst_.links().size(); ++li) {
      const auto& l = inst_.links()[li];
      if (!inst_.is_access(l.a) || !inst_.is_access(l.b)) continue;
      const bool a0 = used(0, 2 * li), a1 = used(0, 2 * li + 1), b0 = used(1, 2 * li), b1 = used(1, 2 * li + 1);
      const std::string name = inst_.id_of(l.a) + "-" + inst_.id_of(l.b);
      if ((a0 && b0) || (a1 && b1)) add("Eq.89", l.a, "link " + name + " used by both classes");
      if (a0 && b1) add("Eq.90", l.a, "link " + name + " used anti-parallel by both classes");
      if (a1 && b0) add("Eq.91", l.b, "link " + name + " used anti-parallel by both classes");
    }
    const auto ra = class_node_usage(inst_, f, 0), rb = class_node_usage(inst_, f, 1);
    for (std::size_t i = 0; i < ra.size(); ++i) {
      if (ra[i] && rb[i] && inst_.is_access(static_cast<int>(i))) {
        add("Eq.96", static_cast<int>(i), "node relays both classes");
      }
    }
  }

  const NetworkInstance& inst_;
  const DerivedParams& p_;
  Level level_;
  const DemandSet& demand_;
  const Solution& sol_;
  std::vector<std::vector<long>> load_;
  FeasibilityReport report_;
};

}  // namespace

FeasibilityReport check(const NetworkInstance& inst, const DerivedParams& params, Level level,
                        const DemandSet& demand, const Solution& sol) {
  return Checker(inst, params, level, demand, sol).run();
}

FeasibilityReport check(const NetworkInstance& inst, const DerivedParams& params, const ScenarioSpec& spec,
                        const Solution& sol) {
  const DemandSet base = base_demand(inst);
  const DemandSet demand = spec.demand_fraction == 1.0 ? base : scale_demand(base, spec.demand_fraction);
  return check(inst, params, spec.level, demand, sol);
}

}  // namespace fogres
