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


#include "fogres/milp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "fogres/energy.hpp"

namespace fogres {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string clean(std::string_view id) {
  std::string out(id);
  for (char& ch : out) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9');
    if (!ok) ch = '_';
  }
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Term {
  int var;
  double coef;
};

struct Row {
  std::string name;
  std::vector<Term> terms;
  char sense;  // '<', '>', '='
  double rhs;
};

struct Family {
  std::string tag;
  std::vector<Row> rows;
};

// Variable registry plus row families, built once per export/import.
class Model {
 public:
  // Semantic handles; -1 where a variable does not exist.
  int K = 1;      // server classes
  int slots = 1;  // commodity classes (2 only when split)
  std::vector<std::vector<std::vector<int>>> w;  // [class][clinic pos][fog pos]
  std::vector<std::vector<int>> ph, Yc, tp;      // [class][fog pos]
  std::vector<int> Y, z;                         // [fog pos]
  // flow[slot][task] -> [commodity] -> [arc]; commodity = s*nf+d for
  // raw/feedback (clinic pos, fog pos), d for storage.
  std::vector<std::vector<std::vector<std::vector<int>>>> flow;
  std::vector<std::vector<std::vector<int>>> dem;  // [slot][task][commodity]
  std::vector<int> Pn, Fn, Sn, za, zb, th, vt, zc, v;  // [node]
  std::vector<std::vector<int>> Pp, Pf;               // [clinic pos][bs pos]
  std::vector<int> ba, bb;                            // [bs pos]
  std::vector<int> La, Lb;                            // [arc]
  std::vector<int> ra, rb;                            // [node]

  std::vector<std::string> names;
  std::vector<char> types;  // 'C', 'I', 'B'
  std::vector<double> upper;
  std::unordered_map<std::string, int> index;
  std::vector<Family> families;
  std::vector<Term> objective;

  int add_var(std::string name, char type, double ub = kInf) {
    const int id = static_cast<int>(names.size());
    if (!index.emplace(name, id).second) throw InvalidConfig("node ids collide in MILP variable name '" + name + "'");
    names.push_back(std::move(name));
    types.push_back(type);
    upper.push_back(type == 'B' ? 1.0 : ub);
    return id;
  }

  void add_row(const std::string& tag, std::string name, std::vector<Term> terms, char sense, double rhs) {
    std::erase_if(terms, [](const Term& t) { return t.var < 0 || t.coef == 0.0; });
    if (terms.empty()) return;
    if (families.empty() || families.back().tag != tag) families.push_back({tag, {}});
    families.back().rows.push_back({std::move(name), std::move(terms), sense, rhs});
  }

  void obj(int var, double coef) {
    if (var >= 0 && coef != 0.0) objective.push_back({var, coef});
  }
};

class Builder {
 public:
  Builder(const NetworkInstance& inst, const DerivedParams& p, Level level, const DemandSet& demand)
      : inst_(inst), p_(p), level_(level), demand_(demand) {
    if (demand.patients.size() != inst.clinics().size()) throw InvalidConfig("demand does not match the instance");
    nc_ = inst.clinics().size();
    nf_ = inst.fog_nodes().size();
    nb_ = inst.base_stations().size();
    nn_ = inst.node_count();
    na_ = 2 * inst.links().size();
    m_.K = copies(level);
    m_.slots = level == Level::C ? 2 : 1;
    rate_ = {p.delta_a, p.delta_b, p.delta_c};
    const double maxd = std::max({p.delta_a, p.delta_b, p.delta_c});
    int maxdeg = 0;
    for (std::size_t i = 0; i < nn_; ++i) maxdeg = std::max(maxdeg, static_cast<int>(inst.neighbors(static_cast<int>(i)).size()));
    bigm_ = std::max(static_cast<double>(m_.K) * std::max(demand.total(), 1) * maxd, 2.0 * maxdeg) + 1.0;
  }

  Model build() {
    variables();
    rows();
    objective();
    return std::move(m_);
  }

 private:
  int from(int arc) const {
    const Link& l = inst_.links()[static_cast<std::size_t>(arc / 2)];
    return arc % 2 == 0 ? l.a : l.b;
  }
  int to(int arc) const {
    const Link& l = inst_.links()[static_cast<std::size_t>(arc / 2)];
    return arc % 2 == 0 ? l.b : l.a;
  }
  bool clinic(int n) const { return inst_.kind(n) == NodeKind::Clinic; }
  const std::string& id(int n) const { return inst_.id_of(n); }
  std::string cid(int n) const { return clean(id(n)); }
  int fog(std::size_t d) const { return inst_.fog_nodes()[d]; }
  int cl(std::size_t s) const { return inst_.clinics()[s]; }
  int bs(std::size_t j) const { return inst_.base_stations()[j]; }

  // Arc usable by commodity `c` of task t (clinics are never transit).
  bool usable(Task t, std::size_t c, int arc) const {
    const int a = from(arc), b = to(arc);
    if (!clinic(a) && !clinic(b)) return true;
    if (t == Task::Storage) return false;
    const int s = cl(c / nf_);
    return t == Task::Processing ? a == s : b == s;
  }
  std::size_t commodities(Task t) const { return t == Task::Storage ? nf_ : nc_ * nf_; }
  // Source and sink node of a commodity.
  int source(Task t, std::size_t c) const {
    if (t == Task::Processing) return cl(c / nf_);
    return fog(t == Task::Storage ? c : c % nf_);
  }
  int sink(Task t, std::size_t c) const {
    if (t == Task::Processing) return fog(c % nf_);
    return t == Task::Feedback ? cl(c / nf_) : inst_.cloud_storage();
  }

  void variables() {
    static const char* kCls[] = {"a", "b"};
    m_.w.assign(static_cast<std::size_t>(m_.K), std::vector<std::vector<int>>(nc_, std::vector<int>(nf_, -1)));
    m_.ph.assign(static_cast<std::size_t>(m_.K), std::vector<int>(nf_, -1));
    m_.Yc = m_.tp = m_.ph;
    for (int k = 0; k < m_.K; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      for (std::size_t s = 0; s < nc_; ++s) {
        for (std::size_t d = 0; d < nf_; ++d) {
          m_.w[kk][s][d] = m_.add_var(std::string("w") + kCls[k] + "_" + cid(cl(s)) + "_" + cid(fog(d)), 'I');
        }
      }
      for (std::size_t d = 0; d < nf_; ++d) {
        m_.ph[kk][d] = m_.add_var(std::string("ph") + kCls[k] + "_" + cid(fog(d)), 'I', p_.N);
        m_.Yc[kk][d] = m_.add_var(std::string("Y") + kCls[k] + "_" + cid(fog(d)), 'B');
        m_.tp[kk][d] = m_.add_var(std::string("tp") + kCls[k] + "_" + cid(fog(d)), 'C');
      }
    }
    m_.Y.assign(nf_, -1);
    m_.z.assign(nf_, -1);
    const bool has_z = level_ == Level::NonRes || level_ == Level::A;
    for (std::size_t d = 0; d < nf_; ++d) {
      m_.Y[d] = m_.add_var("Y_" + cid(fog(d)), 'B');
      if (has_z) m_.z[d] = m_.add_var("z_" + cid(fog(d)), 'B');
    }

    static const char* kDem[] = {"P", "F", "S"};
    static const char* kFlow[] = {"p", "f", "s"};
    m_.dem.assign(static_cast<std::size_t>(m_.slots), std::vector<std::vector<int>>(kTasks));
    m_.flow.assign(static_cast<std::size_t>(m_.slots), std::vector<std::vector<std::vector<int>>>(kTasks));
    for (int sl = 0; sl < m_.slots; ++sl) {
      const std::string suffix = m_.slots == 2 ? kCls[sl] : "";
      for (int ti = 0; ti < kTasks; ++ti) {
        const auto t = static_cast<Task>(ti);
        const std::size_t nco = commodities(t);
        auto& dv = m_.dem[static_cast<std::size_t>(sl)][static_cast<std::size_t>(ti)];
        auto& fv = m_.flow[static_cast<std::size_t>(sl)][static_cast<std::size_t>(ti)];
        dv.assign(nco, -1);
        fv.assign(nco, std::vector<int>(na_, -1));
        for (std::size_t c = 0; c < nco; ++c) {
          const std::string key = cid(source(t, c)) + "_" + cid(sink(t, c));
          dv[c] = m_.add_var(kDem[ti] + suffix + "_" + key, 'C');
          for (std::size_t arc = 0; arc < na_; ++arc) {
            const int a = static_cast<int>(arc);
            if (!usable(t, c, a)) continue;
            fv[c][arc] = m_.add_var(kFlow[ti] + suffix + "_" + key + "_" + cid(from(a)) + "_" + cid(to(a)), 'C');
          }
        }
      }
    }

    m_.Pn.assign(nn_, -1);
    m_.Fn = m_.Sn = m_.za = m_.zb = m_.th = m_.vt = m_.zc = m_.v = m_.ra = m_.rb = m_.Pn;
    for (std::size_t i = 0; i < nn_; ++i) {
      const int n = static_cast<int>(i);
      if (clinic(n)) continue;
      const std::string s = cid(n);
      m_.Pn[i] = m_.add_var("Pn_" + s, 'C');
      m_.Fn[i] = m_.add_var("Fn_" + s, 'C');
      m_.Sn[i] = m_.add_var("Sn_" + s, 'C');
      m_.za[i] = m_.add_var("za_" + s, 'B');
      m_.zb[i] = m_.add_var("zb_" + s, 'B');
      m_.th[i] = m_.add_var("th_" + s, 'B');
      m_.vt[i] = m_.add_var("vt_" + s, 'B');
      m_.zc[i] = m_.add_var("zc_" + s, 'B');
      m_.v[i] = m_.add_var("v_" + s, 'B');
    }
    m_.Pp.assign(nc_, std::vector<int>(nb_, -1));
    m_.Pf = m_.Pp;
    for (std::size_t s = 0; s < nc_; ++s) {
      for (std::size_t j = 0; j < nb_; ++j) {
        m_.Pp[s][j] = m_.add_var("Pp_" + cid(cl(s)) + "_" + cid(bs(j)), 'I');
        m_.Pf[s][j] = m_.add_var("Pf_" + cid(bs(j)) + "_" + cid(cl(s)), 'I');
      }
    }
    m_.ba.assign(nb_, -1);
    m_.bb.assign(nb_, -1);
    for (std::size_t j = 0; j < nb_; ++j) {
      m_.ba[j] = m_.add_var("ba_" + cid(bs(j)), 'C');
      m_.bb[j] = m_.add_var("bb_" + cid(bs(j)), 'C');
    }
    m_.La.assign(na_, -1);
    m_.Lb.assign(na_, -1);
    if (level_ == Level::C) {
      for (std::size_t arc = 0; arc < na_; ++arc) {
        const int a = static_cast<int>(arc);
        if (!access_arc(a)) continue;
        m_.La[arc] = m_.add_var("La_" + cid(from(a)) + "_" + cid(to(a)), 'B');
        m_.Lb[arc] = m_.add_var("Lb_" + cid(from(a)) + "_" + cid(to(a)), 'B');
      }
      for (std::size_t i = 0; i < nn_; ++i) {
        if (!inst_.is_access(static_cast<int>(i))) continue;
        m_.ra[i] = m_.add_var("ra_" + cid(static_cast<int>(i)), 'B');
        m_.rb[i] = m_.add_var("rb_" + cid(static_cast<int>(i)), 'B');
      }
    }
  }

  bool access_arc(int arc) const { return inst_.is_access(from(arc)) && inst_.is_access(to(arc)); }

  // Flow terms of task t on one arc, all commodities of the given slots.
  void arc_terms(std::vector<Term>& out, Task t, int arc, int slot_lo, int slot_hi, double coef) const {
    for (int sl = slot_lo; sl < slot_hi; ++sl) {
      const auto& fv = m_.flow[static_cast<std::size_t>(sl)][static_cast<std::size_t>(t)];
      for (const auto& c : fv) {
        const int v = c[static_cast<std::size_t>(arc)];
        if (v >= 0) out.push_back({v, coef});
      }
    }
  }
  std::vector<Term> arc_all(Task t, int arc, double coef = 1.0) const {
    std::vector<Term> out;
    arc_terms(out, t, arc, 0, m_.slots, coef);
    return out;
  }
  // Arcs leaving / entering node n.
  std::vector<int> arcs_out(int n) const {
    std::vector<int> out;
    for (int nb : inst_.neighbors(n)) out.push_back(arc_of(inst_.links()[static_cast<std::size_t>(inst_.link_between(n, nb))], inst_.link_between(n, nb), n));
    return out;
  }
  std::vector<int> arcs_in(int n) const {
    std::vector<int> out;
    for (int nb : inst_.neighbors(n)) out.push_back(arc_of(inst_.links()[static_cast<std::size_t>(inst_.link_between(n, nb))], inst_.link_between(n, nb), nb));
    return out;
  }
  std::vector<Term> node_flow(Task t, int n, bool incoming, int slot_lo, int slot_hi) const {
    std::vector<Term> out;
    for (int arc : incoming ? arcs_in(n) : arcs_out(n)) arc_terms(out, t, arc, slot_lo, slot_hi, 1.0);
    return out;
  }

  static std::string rname(const std::string& tag, std::initializer_list<std::string> parts) {
    std::string out = "e" + tag.substr(3);
    for (const auto& s : parts) out += "_" + s;
    return out;
  }

  void rows() {
    const std::size_t K = static_cast<std::size_t>(m_.K);
    const char* tag_assign[] = {"Eq.32", "Eq.33"};
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t d = 0; d < nf_; ++d) {
        for (std::size_t s = 0; s < nc_; ++s) {
          m_.add_row(tag_assign[k], rname(tag_assign[k], {cid(cl(s)), cid(fog(d))}),
                     {{m_.w[k][s][d], 1.0}, {m_.Yc[k][d], -static_cast<double>(demand_.patients[s])}}, '<', 0.0);
        }
        // Servers only where the class is placed.
        m_.add_row(tag_assign[k], rname(tag_assign[k], {cid(fog(d))}),
                   {{m_.ph[k][d], 1.0}, {m_.Yc[k][d], -static_cast<double>(p_.N)}}, '<', 0.0);
      }
    }
    const char* tag_cover[] = {"Eq.34", "Eq.35"};
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t s = 0; s < nc_; ++s) {
        std::vector<Term> t;
        for (std::size_t d = 0; d < nf_; ++d) t.push_back({m_.w[k][s][d], 1.0});
        add_always(tag_cover[k], rname(tag_cover[k], {cid(cl(s))}), std::move(t), '=', demand_.patients[s]);
      }
    }

    // Commodity demand definitions.
    const bool split = m_.slots == 2;
    static const char* kDefMerged[] = {"Eq.36", "Eq.37", "Eq.38"};
    static const char* kDefSplit[][2] = {{"Eq.73", "Eq.74"}, {"Eq.75", "Eq.76"}, {"Eq.77", "Eq.78"}};
    for (int ti = 0; ti < kTasks; ++ti) {
      const auto t = static_cast<Task>(ti);
      for (int sl = 0; sl < m_.slots; ++sl) {
        const std::string tag = split ? kDefSplit[ti][sl] : kDefMerged[ti];
        const auto& dv = m_.dem[static_cast<std::size_t>(sl)][static_cast<std::size_t>(ti)];
        for (std::size_t c = 0; c < dv.size(); ++c) {
          std::vector<Term> terms{{dv[c], 1.0}};
          for (std::size_t k = 0; k < K; ++k) {
            if (split && k != static_cast<std::size_t>(sl)) continue;
            if (t == Task::Storage) {
              for (std::size_t s = 0; s < nc_; ++s) terms.push_back({m_.w[k][s][c], -rate_[2]});
            } else {
              terms.push_back({m_.w[k][c / nf_][c % nf_], -rate_[static_cast<std::size_t>(ti)]});
            }
          }
          m_.add_row(tag, rname(tag, {cid(source(t, c)), cid(sink(t, c))}), std::move(terms), '=', 0.0);
        }
      }
    }

    // Flow conservation.
    static const char* kConsMerged[] = {"Eq.39", "Eq.40", "Eq.41"};
    static const char* kConsSplit[][2] = {{"Eq.79", "Eq.80"}, {"Eq.81", "Eq.82"}, {"Eq.83", "Eq.84"}};
    for (int ti = 0; ti < kTasks; ++ti) {
      const auto t = static_cast<Task>(ti);
      for (int sl = 0; sl < m_.slots; ++sl) {
        const std::string tag = split ? kConsSplit[ti][sl] : kConsMerged[ti];
        const auto& fv = m_.flow[static_cast<std::size_t>(sl)][static_cast<std::size_t>(ti)];
        const auto& dv = m_.dem[static_cast<std::size_t>(sl)][static_cast<std::size_t>(ti)];
        for (std::size_t c = 0; c < fv.size(); ++c) {
          const int src = source(t, c), dst = sink(t, c);
          for (std::size_t i = 0; i < nn_; ++i) {
            const int n = static_cast<int>(i);
            if (clinic(n) && n != src && n != dst) continue;
            std::vector<Term> terms;
            for (int arc : arcs_out(n)) terms.push_back({fv[c][static_cast<std::size_t>(arc)], 1.0});
            for (int arc : arcs_in(n)) terms.push_back({fv[c][static_cast<std::size_t>(arc)], -1.0});
            if (n == src) terms.push_back({dv[c], -1.0});
            if (n == dst) terms.push_back({dv[c], 1.0});
            add_always(tag, rname(tag, {cid(src), cid(dst), cid(n)}), std::move(terms), '=', 0.0);
          }
        }
      }
    }

    // Node aggregates (both classes).
    for (std::size_t i = 0; i < nn_; ++i) {
      const int n = static_cast<int>(i);
      if (clinic(n)) continue;
      auto terms = negate(node_flow(Task::Processing, n, true, 0, m_.slots));
      terms.push_back({m_.Pn[i], 1.0});
      add_always("Eq.42", rname("Eq.42", {cid(n)}), std::move(terms), '=', 0.0);
    }
    for (std::size_t i = 0; i < nn_; ++i) {
      const int n = static_cast<int>(i);
      if (clinic(n)) continue;
      auto terms = negate(node_flow(Task::Feedback, n, false, 0, m_.slots));
      terms.push_back({m_.Fn[i], 1.0});
      add_always("Eq.43", rname("Eq.43", {cid(n)}), std::move(terms), '=', 0.0);
    }
    for (std::size_t i = 0; i < nn_; ++i) {
      const int n = static_cast<int>(i);
      if (clinic(n)) continue;
      auto terms = negate(node_flow(Task::Storage, n, true, 0, m_.slots));
      const int d = inst_.fog_pos(n);
      if (d >= 0) {
        for (int sl = 0; sl < m_.slots; ++sl) {
          terms.push_back({m_.dem[static_cast<std::size_t>(sl)][2][static_cast<std::size_t>(d)], -1.0});
        }
      }
      terms.push_back({m_.Sn[i], 1.0});
      add_always("Eq.44", rname("Eq.44", {cid(n)}), std::move(terms), '=', 0.0);
    }

    // Link capacities per task and direction.
    static const char* kCap[] = {"Eq.45", "Eq.46", "Eq.47"};
    for (int ti = 0; ti < kTasks; ++ti) {
      for (std::size_t arc = 0; arc < na_; ++arc) {
        const int a = static_cast<int>(arc);
        const double cap = inst_.links()[arc / 2].capacity_bps;
        m_.add_row(kCap[ti], rname(kCap[ti], {cid(from(a)), cid(to(a))}), arc_all(static_cast<Task>(ti), a), '<', cap);
      }
    }

    // Placement indicators and node capacity.
    for (std::size_t d = 0; d < nf_; ++d) {
      std::vector<Term> terms;
      for (std::size_t k = 0; k < K; ++k) terms.push_back({m_.Yc[k][d], 1.0});
      terms.push_back({m_.Y[d], m_.z[d] >= 0 ? -2.0 : -1.0});
      if (m_.z[d] >= 0) {
        terms.push_back({m_.z[d], 1.0});
        add_always("Eq.48", rname("Eq.48", {cid(fog(d))}), std::move(terms), '=', 0.0);
      } else {
        add_always("Eq.72", rname("Eq.72", {cid(fog(d))}), std::move(terms), '=', 0.0);
      }
    }
    for (std::size_t d = 0; d < nf_; ++d) {
      std::vector<Term> terms;
      for (std::size_t k = 0; k < K; ++k) terms.push_back({m_.ph[k][d], 1.0});
      add_always("Eq.49", rname("Eq.49", {cid(fog(d))}), std::move(terms), '<', p_.N);
    }

    // Activation of network devices.
    struct Act {
      const char* lo;
      const char* hi;
      Task task;
      bool incoming;
      const std::vector<int>* var;
    };
    const Act acts[] = {{"Eq.49b", "Eq.50", Task::Processing, true, &m_.za},
                        {"Eq.51", "Eq.52", Task::Feedback, false, &m_.zb},
                        {"Eq.53", "Eq.54", Task::Storage, false, &m_.th},
                        {"Eq.55", "Eq.56", Task::Storage, true, &m_.vt}};
    for (const auto& act : acts) {
      for (const char* tag : {act.lo, act.hi}) {
        const bool lower = tag == act.lo;
        for (std::size_t i = 0; i < nn_; ++i) {
          const int n = static_cast<int>(i);
          if (clinic(n)) continue;
          auto terms = node_flow(act.task, n, act.incoming, 0, m_.slots);
          terms.push_back({(*act.var)[i], lower ? -1.0 : -bigm_});
          add_always(tag, rname(tag, {cid(n)}), std::move(terms), lower ? '>' : '<', 0.0);
        }
      }
    }
    for (std::size_t i = 0; i < nn_; ++i) {
      const int n = static_cast<int>(i);
      if (clinic(n)) continue;
      add_always("Eq.57", rname("Eq.57", {cid(n)}),
                 {{m_.th[i], 1.0}, {m_.vt[i], 1.0}, {m_.zc[i], -2.0}, {m_.v[i], 1.0}}, '=', 0.0);
    }

    // Radio resources.
    for (std::size_t s = 0; s < nc_; ++s) {
      for (std::size_t j = 0; j < nb_; ++j) {
        std::vector<Term> terms{{m_.Pp[s][j], 1.0}};
        const int li = inst_.link_between(cl(s), bs(j));
        if (li >= 0) {
          const int arc = arc_of(inst_.links()[static_cast<std::size_t>(li)], li, cl(s));
          arc_terms(terms, Task::Processing, arc, 0, m_.slots, -1.0 / p_.delta_a);
        }
        add_always("Eq.58", rname("Eq.58", {cid(cl(s)), cid(bs(j))}), std::move(terms), '=', 0.0);
      }
    }
    const double cps = static_cast<double>(m_.K);
    for (std::size_t s = 0; s < nc_; ++s) {
      std::vector<Term> terms;
      for (std::size_t j = 0; j < nb_; ++j) terms.push_back({m_.Pp[s][j], 1.0});
      add_always("Eq.59", rname("Eq.59", {cid(cl(s))}), std::move(terms), '=', cps * demand_.patients[s]);
    }
    for (std::size_t j = 0; j < nb_; ++j) {
      std::vector<Term> terms{{m_.ba[j], 1.0}};
      for (std::size_t s = 0; s < nc_; ++s) terms.push_back({m_.Pp[s][j], -static_cast<double>(p_.Rp)});
      add_always("Eq.60", rname("Eq.60", {cid(bs(j))}), std::move(terms), '=', 0.0);
    }
    for (std::size_t j = 0; j < nb_; ++j) {
      add_always("Eq.61", rname("Eq.61", {cid(bs(j))}), {{m_.ba[j], 1.0}}, '<', inst_.radio().prb_cap);
    }
    for (std::size_t j = 0; j < nb_; ++j) {
      for (std::size_t s = 0; s < nc_; ++s) {
        std::vector<Term> terms{{m_.Pf[s][j], 1.0}};
        const int li = inst_.link_between(cl(s), bs(j));
        if (li >= 0) {
          const int arc = arc_of(inst_.links()[static_cast<std::size_t>(li)], li, bs(j));
          arc_terms(terms, Task::Feedback, arc, 0, m_.slots, -1.0 / p_.delta_b);
        }
        add_always("Eq.62", rname("Eq.62", {cid(bs(j)), cid(cl(s))}), std::move(terms), '=', 0.0);
      }
    }
    for (std::size_t s = 0; s < nc_; ++s) {
      std::vector<Term> terms;
      for (std::size_t j = 0; j < nb_; ++j) terms.push_back({m_.Pf[s][j], 1.0});
      add_always("Eq.63", rname("Eq.63", {cid(cl(s))}), std::move(terms), '=', cps * demand_.patients[s]);
    }
    for (std::size_t j = 0; j < nb_; ++j) {
      std::vector<Term> terms{{m_.bb[j], 1.0}};
      for (std::size_t s = 0; s < nc_; ++s) terms.push_back({m_.Pf[s][j], -static_cast<double>(p_.Rf)});
      add_always("Eq.64", rname("Eq.64", {cid(bs(j))}), std::move(terms), '=', 0.0);
    }
    for (std::size_t j = 0; j < nb_; ++j) {
      add_always("Eq.65", rname("Eq.65", {cid(bs(j))}), {{m_.bb[j], 1.0}}, '<', inst_.radio().prb_cap);
    }

    // Servers.
    static const char* kCapSrv[] = {"Eq.66", "Eq.67"};
    static const char* kTime[] = {"Eq.68", "Eq.69"};
    static const char* kStore[] = {"Eq.70", "Eq.71"};
    for (const auto* tags : {kCapSrv, kTime, kStore}) {
      for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t d = 0; d < nf_; ++d) {
          std::vector<Term> terms;
          char sense = '<';
          if (tags == kCapSrv) {
            for (std::size_t s = 0; s < nc_; ++s) terms.push_back({m_.w[k][s][d], 1.0});
            terms.push_back({m_.ph[k][d], -static_cast<double>(p_.omega_max())});
          } else if (tags == kTime) {
            terms.push_back({m_.tp[k][d], 1.0});
            for (std::size_t s = 0; s < nc_; ++s) terms.push_back({m_.w[k][s][d], -p_.m});
            terms.push_back({m_.ph[k][d], -p_.c_const});
            sense = '=';
          } else {
            for (std::size_t s = 0; s < nc_; ++s) terms.push_back({m_.w[k][s][d], p_.analysed_bits});
            terms.push_back({m_.ph[k][d], -p_.lambda_max()});
          }
          add_always(tags[k], rname(tags[k], {cid(fog(d))}), std::move(terms), sense, 0.0);
        }
      }
    }

    if (level_ != Level::C) return;
    // Access-layer link and node separation.
    static const char* kLink[][2] = {{"Eq.85", "Eq.86"}, {"Eq.87", "Eq.88"}};
    for (int sl = 0; sl < 2; ++sl) {
      const auto& L = sl == 0 ? m_.La : m_.Lb;
      for (const char* tag : kLink[sl]) {
        const bool lower = tag == kLink[sl][0];
        for (std::size_t arc = 0; arc < na_; ++arc) {
          if (L[arc] < 0) continue;
          const int a = static_cast<int>(arc);
          std::vector<Term> terms;
          for (int ti = 0; ti < kTasks; ++ti) arc_terms(terms, static_cast<Task>(ti), a, sl, sl + 1, 1.0);
          terms.push_back({L[arc], lower ? -1.0 : -bigm_});
          add_always(tag, rname(tag, {cid(from(a)), cid(to(a))}), std::move(terms), lower ? '>' : '<', 0.0);
        }
      }
    }
    const auto links = inst_.links();
    for (const char* tag : {"Eq.89", "Eq.90", "Eq.91"}) {
      for (std::size_t li = 0; li < links.size(); ++li) {
        const int ab = static_cast<int>(2 * li), ba = ab + 1;
        if (m_.La[static_cast<std::size_t>(ab)] < 0) continue;
        auto pair = [&](int x, int y) {
          add_always(tag, rname(tag, {cid(from(x)), cid(to(x)), cid(from(y)), cid(to(y))}),
                     {{m_.La[static_cast<std::size_t>(x)], 1.0}, {m_.Lb[static_cast<std::size_t>(y)], 1.0}}, '<', 1.0);
        };
        if (std::string_view(tag) == "Eq.89") {
          pair(ab, ab);
          pair(ba, ba);
        } else if (std::string_view(tag) == "Eq.90") {
          pair(ab, ba);
        } else {
          pair(ba, ab);
        }
      }
    }
    static const char* kRho[][2] = {{"Eq.92", "Eq.93"}, {"Eq.94", "Eq.95"}};
    for (int sl = 0; sl < 2; ++sl) {
      const auto& L = sl == 0 ? m_.La : m_.Lb;
      const auto& R = sl == 0 ? m_.ra : m_.rb;
      for (const char* tag : kRho[sl]) {
        const bool lower = tag == kRho[sl][0];
        for (std::size_t i = 0; i < nn_; ++i) {
          if (R[i] < 0) continue;
          const int n = static_cast<int>(i);
          std::vector<Term> terms;
          for (int arc : arcs_out(n)) terms.push_back({L[static_cast<std::size_t>(arc)], 1.0});
          for (int arc : arcs_in(n)) terms.push_back({L[static_cast<std::size_t>(arc)], 1.0});
          terms.push_back({R[i], lower ? -1.0 : -bigm_});
          add_always(tag, rname(tag, {cid(n)}), std::move(terms), lower ? '>' : '<', 0.0);
        }
      }
    }
    for (std::size_t i = 0; i < nn_; ++i) {
      if (m_.ra[i] < 0) continue;
      add_always("Eq.96", rname("Eq.96", {cid(static_cast<int>(i))}), {{m_.ra[i], 1.0}, {m_.rb[i], 1.0}}, '<', 1.0);
    }
  }

  // Rows whose terms are structurally non-empty.
  void add_always(const std::string& tag, std::string name, std::vector<Term> terms, char sense, double rhs) {
    m_.add_row(tag, std::move(name), std::move(terms), sense, rhs);
  }

  static std::vector<Term> negate(std::vector<Term> t) {
    for (auto& x : t) x.coef = -x.coef;
    return t;
  }

  // Same terms and PUE grouping as evaluate().
  void objective() {
    const double ta = p_.tau_a, tb = p_.tau_b, tc = p_.tau_c;
    const double eta = inst_.pue_network(), c = inst_.pue_fog_cloud();
    for (std::size_t i = 0; i < nn_; ++i) {
      const int n = static_cast<int>(i);
      const NodeKind k = inst_.kind(n);
      if (k == NodeKind::Clinic) continue;
      const DeviceSpec& dev = inst_.device(k);
      const double idle = dev.idle_power * dev.idle_fraction;
      if (k == NodeKind::BaseStation) {
        const auto j = static_cast<std::size_t>(inst_.bs_pos(n));
        const double ppp = inst_.radio().per_prb_power;
        m_.obj(m_.za[i], eta * idle * ta);
        m_.obj(m_.ba[j], eta * ppp * ta);
        m_.obj(m_.zb[i], eta * idle * tb);
        m_.obj(m_.bb[j], eta * ppp * tb);
        continue;
      }
      double mult = eta;
      switch (k) {
        case NodeKind::CloudRouter:
        case NodeKind::ContentServer: mult = c; break;
        case NodeKind::CloudSwitch:
        case NodeKind::CloudStorage: mult = 2.0 * c; break;
        default: break;
      }
      const double coef = dev.load_coefficient();
      m_.obj(m_.za[i], mult * idle * ta);
      m_.obj(m_.Pn[i], mult * coef * ta);
      m_.obj(m_.zb[i], mult * idle * tb);
      m_.obj(m_.Fn[i], mult * coef * tb);
      m_.obj(m_.zc[i], mult * idle * tc);
      // Cloud storage holds half the storage rate for tau_c.
      m_.obj(m_.Sn[i], k == NodeKind::CloudStorage ? mult * coef * tc / 2.0 * tc : mult * coef * tc);
    }
    const DeviceSpec& es = inst_.device(NodeKind::EthernetSwitch);
    const ServerSpec& ps = inst_.server();
    const double pps = p_.eps_proportional_minus_idle ? ps.max_power - ps.idle_power : ps.max_power;
    const double es_load = eta * es.load_coefficient() * (p_.delta_a * ta + p_.delta_b * tb + p_.delta_c * tc);
    for (std::size_t d = 0; d < nf_; ++d) {
      m_.obj(m_.Y[d], eta * es.idle_power * es.idle_fraction * (ta + tb + tc));
      for (std::size_t k = 0; k < static_cast<std::size_t>(m_.K); ++k) {
        for (std::size_t s = 0; s < nc_; ++s) m_.obj(m_.w[k][s][d], es_load);
        m_.obj(m_.ph[k][d], c * ps.idle_power * (ta + tb + tc));
        m_.obj(m_.tp[k][d], c * pps);
      }
    }
  }

  const NetworkInstance& inst_;
  const DerivedParams& p_;
  Level level_;
  const DemandSet& demand_;
  std::size_t nc_ = 0, nf_ = 0, nb_ = 0, nn_ = 0, na_ = 0;
  std::array<double, 3> rate_{};
  double bigm_ = 1.0;
  Model m_;
};

void write_terms(std::string& out, const Model& m, const std::vector<Term>& terms) {
  std::size_t line_start = out.size();
  bool first = true;
  for (const auto& t : terms) {
    if (out.size() - line_start > 200) {
      out += "\n   ";
      line_start = out.size();
    }
    const double a = std::fabs(t.coef);
    out += t.coef < 0 ? (first ? "- " : " - ") : (first ? "" : " + ");
    if (a != 1.0) out += num(a) + " ";
    out += m.names[static_cast<std::size_t>(t.var)];
    first = false;
  }
}

std::string write_lp(const Model& m, const NetworkInstance& inst, Level level, int N, MilpStats* stats) {
  std::string out;
  out.reserve(1 << 20);
  out += "\\* fogres placement model, scenario " + std::string(to_string(level)) + ", N=" + std::to_string(N) +
         ", instance " + (inst.data().name.empty() ? std::string("unnamed") : clean(inst.data().name)) + " *\\\n";
  out += "Minimize\n obj: ";
  write_terms(out, m, m.objective);
  out += "\nSubject To\n";
  MilpStats st;
  for (const auto& fam : m.families) {
    out += "\\* " + fam.tag + " *\\\n";
    for (const auto& r : fam.rows) {
      out += " " + r.name + ": ";
      write_terms(out, m, r.terms);
      out += r.sense == '<' ? " <= " : r.sense == '>' ? " >= " : " = ";
      out += num(r.rhs) + "\n";
    }
    st.rows_by_tag[fam.tag] += static_cast<long>(fam.rows.size());
    st.rows += static_cast<long>(fam.rows.size());
  }
  out += "Bounds\n";
  for (std::size_t v = 0; v < m.names.size(); ++v) {
    if (m.types[v] != 'B' && m.upper[v] != kInf) out += " 0 <= " + m.names[v] + " <= " + num(m.upper[v]) + "\n";
  }
  for (char kind : {'I', 'B'}) {
    out += kind == 'I' ? "Generals\n" : "Binaries\n";
    std::size_t col = 0;
    for (std::size_t v = 0; v < m.names.size(); ++v) {
      if (m.types[v] != kind) continue;
      out += " " + m.names[v];
      if (++col % 8 == 0) out += "\n";
    }
    if (col % 8 != 0) out += "\n";
    (kind == 'I' ? st.generals : st.binaries) = static_cast<long>(col);
  }
  out += "End\n";
  st.variables = static_cast<long>(m.names.size());
  if (stats) *stats = st;
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

// Variable values at an assembled solution.
std::vector<double> values_of(const Model& m, const NetworkInstance& inst, const DerivedParams& p, const Solution& sol) {
  if (sol.flows.zeta_a.size() != inst.node_count() || sol.y.size() != inst.fog_nodes().size()) {
    throw InconsistentSolution("solution has not been assembled");
  }
  std::vector<double> val(m.names.size(), 0.0);
  auto set = [&](int var, double x) {
    if (var >= 0) val[static_cast<std::size_t>(var)] = x;
  };
  const auto nc = inst.clinics().size(), nf = inst.fog_nodes().size(), nb = inst.base_stations().size();
  const TaskRates rate = task_rates(p);
  for (std::size_t d = 0; d < nf; ++d) {
    for (std::size_t s = 0; s < nc; ++s) {
      set(m.w[0][s][d], sol.omega_a[s][d]);
      if (m.K == 2) set(m.w[1][s][d], sol.omega_b[s][d]);
    }
    set(m.ph[0][d], sol.phi_a[d]);
    set(m.Yc[0][d], sol.y_a[d]);
    set(m.tp[0][d], sol.tau_pa[d]);
    if (m.K == 2) {
      set(m.ph[1][d], sol.phi_b[d]);
      set(m.Yc[1][d], sol.y_b[d]);
      set(m.tp[1][d], sol.tau_pb[d]);
    }
    set(m.Y[d], sol.y[d]);
    set(m.z[d], 2 * sol.y[d] - sol.y_a[d] - sol.y_b[d]);
  }

  // Commodity demands and flows from the routed streams.
  for (const auto& r : sol.flows.routes) {
    const Demand& dm = r.demand;
    if (dm.streams == 0) continue;
    const auto ti = static_cast<std::size_t>(dm.task);
    const std::size_t slot = m.slots == 2 ? static_cast<std::size_t>(dm.cls) : 0;
    std::size_t c = 0;
    if (dm.task == Task::Processing) {
      c = static_cast<std::size_t>(inst.clinic_pos(dm.src)) * nf + static_cast<std::size_t>(inst.fog_pos(dm.dst));
    } else if (dm.task == Task::Feedback) {
      c = static_cast<std::size_t>(inst.clinic_pos(dm.dst)) * nf + static_cast<std::size_t>(inst.fog_pos(dm.src));
    } else {
      c = static_cast<std::size_t>(inst.fog_pos(dm.src));
    }
    const double bps = static_cast<double>(dm.streams) * rate[ti];
    val[static_cast<std::size_t>(m.dem[slot][ti][c])] += bps;
    for (std::size_t h = 0; h + 1 < r.path.size(); ++h) {
      const int li = inst.link_between(r.path[h], r.path[h + 1]);
      const int arc = arc_of(inst.links()[static_cast<std::size_t>(li)], li, r.path[h]);
      const int var = m.flow[slot][ti][c][static_cast<std::size_t>(arc)];
      if (var < 0) throw InconsistentSolution("route uses a link the model has no flow variable for");
      val[static_cast<std::size_t>(var)] += bps;
    }
  }

  const auto& f = sol.flows;
  for (std::size_t i = 0; i < inst.node_count(); ++i) {
    const int n = static_cast<int>(i);
    if (m.Pn[i] < 0) continue;
    set(m.Pn[i], static_cast<double>(f.node_total(Task::Processing, n)) * p.delta_a);
    set(m.Fn[i], static_cast<double>(f.node_total(Task::Feedback, n)) * p.delta_b);
    set(m.Sn[i], static_cast<double>(f.node_total(Task::Storage, n)) * p.delta_c);
    set(m.za[i], f.zeta_a[i]);
    set(m.zb[i], f.zeta_b[i]);
    bool out = false, in = false;
    for (int nbh : inst.neighbors(n)) {
      const int li = inst.link_between(n, nbh);
      const Link& l = inst.links()[static_cast<std::size_t>(li)];
      const auto ao = static_cast<std::size_t>(arc_of(l, li, n)), ai = static_cast<std::size_t>(arc_of(l, li, nbh));
      out = out || f.arc_total(Task::Storage, static_cast<int>(ao)) > 0;
      in = in || f.arc_total(Task::Storage, static_cast<int>(ai)) > 0;
    }
    const int zc = f.zeta_c[i];
    set(m.th[i], out);
    set(m.vt[i], in);
    set(m.zc[i], zc);
    set(m.v[i], 2 * zc - static_cast<int>(out) - static_cast<int>(in));
  }
  for (std::size_t s = 0; s < nc; ++s) {
    for (std::size_t j = 0; j < nb; ++j) {
      set(m.Pp[s][j], sol.pp[s][j]);
      set(m.Pf[s][j], sol.pf[s][j]);
    }
  }
  for (std::size_t j = 0; j < nb; ++j) {
    set(m.ba[j], sol.beta_a[j]);
    set(m.bb[j], sol.beta_b[j]);
  }
  for (std::size_t arc = 0; arc < m.La.size(); ++arc) {
    if (m.La[arc] < 0) continue;
    for (int cls = 0; cls < kClasses; ++cls) {
      long streams = 0;
      for (int t = 0; t < kTasks; ++t) {
        const auto& v = f.arc_streams[static_cast<std::size_t>(cls)][static_cast<std::size_t>(t)];
        if (!v.empty()) streams += v[arc];
      }
      set(cls == 0 ? m.La[arc] : m.Lb[arc], streams > 0);
    }
  }
  for (int cls = 0; cls < kClasses; ++cls) {
    const auto used = class_node_usage(inst, f, cls);
    const auto& R = cls == 0 ? m.ra : m.rb;
    for (std::size_t i = 0; i < R.size(); ++i) set(R[i], used[i]);
  }
  return val;
}

int as_int(double x, const std::string& name) {
  const double r = std::round(x);
  if (std::fabs(x - r) > 1e-6) throw ParseError("variable '" + name + "' is not integral: " + num(x));
  return static_cast<int>(r);
}

}  // namespace

std::string milp_text(const NetworkInstance& inst, const DerivedParams& params, Level level, const DemandSet& demand,
                      MilpStats* stats) {
  const Model m = Builder(inst, params, level, demand).build();
  return write_lp(m, inst, level, params.N, stats);
}

MilpStats export_milp(const NetworkInstance& inst, const DerivedParams& params, Level level, const DemandSet& demand,
                      const std::string& path) {
  MilpStats st;
  write_file(path, milp_text(inst, params, level, demand, &st));
  return st;
}

MilpStats export_milp(const NetworkInstance& inst, const DerivedParams& params, const ScenarioSpec& spec,
                      const std::string& path) {
  return export_milp(inst, params, spec.level, scale_demand(base_demand(inst), spec.demand_fraction), path);
}

std::string milp_values(const NetworkInstance& inst, const DerivedParams& params, Level level, const DemandSet& demand,
                        const Solution& sol) {
  const Model m = Builder(inst, params, level, demand).build();
  const auto val = values_of(m, inst, params, sol);
  std::string out;
  for (std::size_t v = 0; v < val.size(); ++v) out += m.names[v] + " " + num(val[v]) + "\n";
  return out;
}

Solution import_milp_values(const NetworkInstance& inst, const DerivedParams& params, Level level,
                            const DemandSet& demand, std::string_view text) {
  const Model m = Builder(inst, params, level, demand).build();
  std::vector<double> val(m.names.size(), 0.0);
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name) || name[0] == '#' || name[0] == '\\') continue;
    double x = 0;
    if (!(ls >> x)) throw ParseError("line " + std::to_string(lineno) + ": expected '<name> <value>'");
    const auto it = m.index.find(name);
    if (it == m.index.end()) throw ParseError("line " + std::to_string(lineno) + ": unknown variable '" + name + "'");
    val[static_cast<std::size_t>(it->second)] = x;
  }
  auto get = [&](int var) { return var < 0 ? 0 : as_int(val[static_cast<std::size_t>(var)], m.names[static_cast<std::size_t>(var)]); };

  Solution sol = empty_solution(inst, level);
  const auto nc = inst.clinics().size(), nf = inst.fog_nodes().size();
  for (std::size_t d = 0; d < nf; ++d) {
    for (std::size_t s = 0; s < nc; ++s) {
      sol.omega_a[s][d] = get(m.w[0][s][d]);
      if (m.K == 2) sol.omega_b[s][d] = get(m.w[1][s][d]);
    }
    sol.phi_a[d] = get(m.ph[0][d]);
    if (m.K == 2) sol.phi_b[d] = get(m.ph[1][d]);
  }
  // Streams on the clinic's own links; merged commodities hand the first
  // omega_a of them (in BS order) to the primary class.
  for (int ti = 0; ti < 2; ++ti) {
    const auto t = static_cast<Task>(ti);
    const double rate = t == Task::Processing ? params.delta_a : params.delta_b;
    auto& allocs = t == Task::Processing ? sol.raw : sol.feedback;
    for (std::size_t s = 0; s < nc; ++s) {
      const int clinic = inst.clinics()[s];
      for (std::size_t d = 0; d < nf; ++d) {
        int left_a = sol.omega_a[s][d];
        for (int bs : inst.bs_of_clinic(clinic)) {
          const int li = inst.link_between(clinic, bs);
          const Link& l = inst.links()[static_cast<std::size_t>(li)];
          const auto arc = static_cast<std::size_t>(arc_of(l, li, t == Task::Processing ? clinic : bs));
          for (int sl = 0; sl < m.slots; ++sl) {
            const int var = m.flow[static_cast<std::size_t>(sl)][static_cast<std::size_t>(ti)][s * nf + d][arc];
            if (var < 0) continue;
            const double x = val[static_cast<std::size_t>(var)] / rate;
            const int streams = as_int(x, m.names[static_cast<std::size_t>(var)]);
            if (streams == 0) continue;
            const int fogn = inst.fog_nodes()[d];
            if (m.slots == 2) {
              allocs.push_back({clinic, bs, fogn, sl, streams});
            } else {
              const int a = std::min(left_a, streams);
              left_a -= a;
              if (a > 0) allocs.push_back({clinic, bs, fogn, 0, a});
              if (streams > a) allocs.push_back({clinic, bs, fogn, 1, streams - a});
            }
          }
        }
      }
    }
  }
  assemble(inst, params, sol);
  return sol;
}

}  // namespace fogres
