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

// Small successive-shortest-path min-cost flow (Bellman-Ford on the
// residual graph). Internal helper; graphs here have at most a few hundred
// arcs.

#ifndef FOGRES_SRC_MCF_HPP
#define FOGRES_SRC_MCF_HPP

#include <limits>
#include <utility>
#include <vector>

namespace fogres::detail {

class MinCostFlow {
 public:
  explicit MinCostFlow(int n) : head_(static_cast<std::size_t>(n), -1) {}

  int add_edge(int u, int v, long cap, double cost) {
    const int id = static_cast<int>(to_.size());
    push(u, v, cap, cost);
    push(v, u, 0, -cost);
    return id;
  }

  /// Sends up to `need` units s -> t at minimum cost. Returns (flow, cost).
  std::pair<long, double> solve(int s, int t, long need) {
    long flow = 0;
    double cost = 0.0;
    const auto n = head_.size();
    std::vector<double> dist(n);
    std::vector<int> in_edge(n);
    std::vector<char> in_queue(n);
    while (flow < need) {
      std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
      std::fill(in_edge.begin(), in_edge.end(), -1);
      dist[static_cast<std::size_t>(s)] = 0.0;
      // SPFA; ties resolved by arc order, so results are deterministic.
      std::vector<int> queue{s};
      std::fill(in_queue.begin(), in_queue.end(), 0);
      in_queue[static_cast<std::size_t>(s)] = 1;
      for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const int u = queue[qi];
        in_queue[static_cast<std::size_t>(u)] = 0;
        for (int e = head_[static_cast<std::size_t>(u)]; e != -1; e = next_[static_cast<std::size_t>(e)]) {
          const auto ue = static_cast<std::size_t>(e);
          if (cap_[ue] <= 0) continue;
          const int v = to_[ue];
          const double nd = dist[static_cast<std::size_t>(u)] + cost_[ue];
          if (nd < dist[static_cast<std::size_t>(v)] - 1e-15) {
            dist[static_cast<std::size_t>(v)] = nd;
            in_edge[static_cast<std::size_t>(v)] = e;
            if (!in_queue[static_cast<std::size_t>(v)]) {
              in_queue[static_cast<std::size_t>(v)] = 1;
              queue.push_back(v);
            }
          }
        }
      }
      if (in_edge[static_cast<std::size_t>(t)] == -1) break;
      long push_amt = need - flow;
      for (int v = t; v != s;) {
        const auto e = static_cast<std::size_t>(in_edge[static_cast<std::size_t>(v)]);
        push_amt = std::min(push_amt, cap_[e]);
        v = to_[e ^ 1];
      }
      for (int v = t; v != s;) {
        const auto e = static_cast<std::size_t>(in_edge[static_cast<std::size_t>(v)]);
        cap_[e] -= push_amt;
        cap_[e ^ 1] += push_amt;
        cost += static_cast<double>(push_amt) * cost_[e];
        v = to_[e ^ 1];
      }
      flow += push_amt;
    }
    return {flow, cost};
  }

  /// Flow currently on an edge returned by add_edge.
  long flow(int edge) const { return cap_[static_cast<std::size_t>(edge) ^ 1]; }

 private:
  void push(int u, int v, long cap, double cost) {
    to_.push_back(v);
    cap_.push_back(cap);
    cost_.push_back(cost);
    next_.push_back(head_[static_cast<std::size_t>(u)]);
    head_[static_cast<std::size_t>(u)] = static_cast<int>(to_.size()) - 1;
  }

  std::vector<int> head_, to_, next_;
  std::vector<long> cap_;
  std::vector<double> cost_;
};

}  // namespace fogres::detail

#endif  // FOGRES_SRC_MCF_HPP
