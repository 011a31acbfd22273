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


// Minimal reader for the LP files the exporter writes, and an evaluator that
// checks a `name value` assignment against every row. Kept independent of
// the library so it can serve as an oracle.

#ifndef FOGRES_TEST_LP_ORACLE_HPP
#define FOGRES_TEST_LP_ORACLE_HPP

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace fogres::test {

struct LpRow {
  std::string name, tag;
  std::vector<std::pair<std::string, double>> terms;
  std::string sense;
  double rhs = 0;
};

struct Lp {
  std::vector<std::pair<std::string, double>> objective;
  std::vector<LpRow> rows;
  std::map<std::string, std::pair<double, double>> bounds;
  std::set<std::string> generals, binaries, columns;
  std::map<std::string, long> rows_by_tag;
};

namespace lp_detail {

inline bool is_number(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return *end == '\0';
}

// Reads "[+|-] [coef] var ..." tokens until a comparison operator.
inline std::size_t terms(const std::vector<std::string>& tok, std::size_t i,
                         std::vector<std::pair<std::string, double>>& out) {
  double sign = 1.0, coef = 1.0;
  bool have_coef = false;
  for (; i < tok.size(); ++i) {
    const auto& t = tok[i];
    if (t == "<=" || t == ">=" || t == "=" || t == "<" || t == ">" || t == "=<" || t == "=>") return i;
    if (t == "+") continue;
    if (t == "-") {
      sign = -sign;
      continue;
    }
    if (is_number(t)) {
      coef = std::stod(t);
      have_coef = true;
      continue;
    }
    out.emplace_back(t, sign * (have_coef ? coef : 1.0));
    sign = 1.0, coef = 1.0, have_coef = false;
  }
  return i;
}

}  // namespace lp_detail

inline Lp parse_lp(const std::string& text) {
  Lp lp;
  std::istringstream in(text);
  std::string line, section, tag;
  std::vector<std::string> obj_tok, bound_lines;
  std::vector<std::pair<std::string, std::vector<std::string>>> row_tok;  // tag, tokens
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '\\') {
      const auto p = line.find("Eq.");
      if (p != std::string::npos) tag = line.substr(p, line.find(' ', p) - p);
      continue;
    }
    const std::string head = line.substr(first);
    if (head == "Minimize" || head == "Subject To" || head == "Bounds" || head == "Generals" ||
        head == "Binaries" || head == "End") {
      section = head;
      continue;
    }
    std::istringstream ls(head);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (section == "Minimize") {
      obj_tok.insert(obj_tok.end(), tok.begin(), tok.end());
    } else if (section == "Subject To") {
      if (!tok.empty() && tok[0].back() == ':') {
        row_tok.push_back({tag, tok});
      } else {
        if (row_tok.empty()) throw std::runtime_error("continuation before any row");
        row_tok.back().second.insert(row_tok.back().second.end(), tok.begin(), tok.end());
      }
    } else if (section == "Bounds") {
      bound_lines.push_back(head);
    } else if (section == "Generals") {
      lp.generals.insert(tok.begin(), tok.end());
    } else if (section == "Binaries") {
      lp.binaries.insert(tok.begin(), tok.end());
    }
  }
  if (!obj_tok.empty() && obj_tok[0].back() == ':') obj_tok.erase(obj_tok.begin());
  lp_detail::terms(obj_tok, 0, lp.objective);
  for (auto& [t, tok] : row_tok) {
    LpRow r;
    r.tag = t;
    r.name = tok[0].substr(0, tok[0].size() - 1);
    const std::size_t op = lp_detail::terms(tok, 1, r.terms);
    if (op + 2 != tok.size()) throw std::runtime_error("malformed row " + r.name);
    r.sense = tok[op];
    r.rhs = std::stod(tok[op + 1]);
    ++lp.rows_by_tag[r.tag];
    lp.rows.push_back(std::move(r));
  }
  for (const auto& b : bound_lines) {
    std::istringstream ls(b);
    double lo = 0, hi = 0;
    std::string op1, name, op2;
    ls >> lo >> op1 >> name >> op2 >> hi;
    lp.bounds[name] = {lo, hi};
  }
  for (const auto& [v, c] : lp.objective) lp.columns.insert(v);
  for (const auto& r : lp.rows) {
    for (const auto& [v, c] : r.terms) lp.columns.insert(v);
  }
  return lp;
}

inline std::unordered_map<std::string, double> parse_values(const std::string& text) {
  std::unordered_map<std::string, double> out;
  std::istringstream in(text);
  std::string name;
  double v = 0;
  while (in >> name >> v) out[name] = v;
  return out;
}

struct LpCheck {
  double objective = 0;
  std::vector<std::string> failures;  // row or column names
};

/// Rows hold to 1e-9 relative to their term magnitude; integers and binaries
/// are integral; every value is within its bounds (lower bound 0).
inline LpCheck evaluate_lp(const Lp& lp, const std::unordered_map<std::string, double>& val) {
  LpCheck out;
  auto get = [&](const std::string& v) {
    const auto it = val.find(v);
    return it == val.end() ? 0.0 : it->second;
  };
  for (const auto& [v, c] : lp.objective) out.objective += c * get(v);
  for (const auto& r : lp.rows) {
    double lhs = 0, mag = std::fabs(r.rhs);
    for (const auto& [v, c] : r.terms) {
      lhs += c * get(v);
      mag += std::fabs(c * get(v));
    }
    const double tol = 1e-9 * std::max(1.0, mag);
    const bool ok = r.sense[0] == '<' || r.sense == "=<" ? lhs <= r.rhs + tol
                    : r.sense[0] == '>' || r.sense == "=>" ? lhs >= r.rhs - tol
                                                           : std::fabs(lhs - r.rhs) <= tol;
    if (!ok) out.failures.push_back(r.name);
  }
  for (const auto& [v, x] : val) {
    if (x < -1e-9) out.failures.push_back(v);
    if ((lp.generals.count(v) || lp.binaries.count(v)) && std::fabs(x - std::round(x)) > 1e-9) {
      out.failures.push_back(v);
    }
    if (lp.binaries.count(v) && (x > 1 + 1e-9)) out.failures.push_back(v);
    const auto b = lp.bounds.find(v);
    if (b != lp.bounds.end() && (x < b->second.first - 1e-9 || x > b->second.second + 1e-9)) {
      out.failures.push_back(v);
    }
  }
  return out;
}

}  // namespace fogres::test

#endif  // FOGRES_TEST_LP_ORACLE_HPP
