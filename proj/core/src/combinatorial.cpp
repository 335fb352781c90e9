// Copyright 2026 The lossyflow Authors.
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

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>

#include "lossyflow/exactflow.hpp"

namespace lossyflow {
namespace {

void require_standard(const FlowNetwork& net, const char* who) {
  net.validate();
  for (const Edge& e : net.edges)
    if (e.gamma.num != e.gamma.den)
      throw InvalidInput(std::string(who) + ": every gamma must be 1");
}

// Residual graph with paired arcs; arc 2e is edge e, arc 2e+1 its reverse.
struct Residual {
  std::vector<std::vector<int>> out;
  std::vector<int> to;
  std::vector<std::int64_t> cap;
  std::vector<std::int64_t> cost;

  explicit Residual(const FlowNetwork& net) : out(net.n) {
    for (int e = 0; e < net.m(); ++e) {
      const Edge& ed = net.edges[e];
      std::int64_t q = ed.cost.value_or(0);
      add(ed.tail, ed.head, ed.capacity, q);
    }
  }
  void add(int a, int b, std::int64_t c, std::int64_t q) {
    out[a].push_back(static_cast<int>(to.size()));
    to.push_back(b), cap.push_back(c), cost.push_back(q);
    out[b].push_back(static_cast<int>(to.size()));
    to.push_back(a), cap.push_back(0), cost.push_back(-q);
  }
  IntFlow edge_flow(const FlowNetwork& net) const {
    IntFlow f(net.m());
    for (int e = 0; e < net.m(); ++e) f[e] = cap[2 * e + 1];
    return f;
  }
};

}  // namespace

std::int64_t oracle_max_flow_value(const FlowNetwork& net) {
  require_standard(net, "oracle_max_flow_value");
  Residual g(net);
  const int n = net.n;
  std::vector<int> level(n), it(n);
  auto bfs = [&] {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[net.s] = 0;
    q.push(net.s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int a : g.out[v])
        if (g.cap[a] > 0 && level[g.to[a]] < 0) {
          level[g.to[a]] = level[v] + 1;
          q.push(g.to[a]);
        }
    }
    return level[net.t] >= 0;
  };
  std::function<std::int64_t(int, std::int64_t)> dfs = [&](int v, std::int64_t push) {
    if (v == net.t) return push;
    for (int& i = it[v]; i < static_cast<int>(g.out[v].size()); ++i) {
      int a = g.out[v][i], w = g.to[a];
      if (g.cap[a] <= 0 || level[w] != level[v] + 1) continue;
      std::int64_t got = dfs(w, std::min(push, g.cap[a]));
      if (got > 0) {
        g.cap[a] -= got;
        g.cap[a ^ 1] += got;
        return got;
      }
    }
    return std::int64_t{0};
  };
  if (net.s == net.t) return 0;
  std::int64_t total = 0;
  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    while (std::int64_t got = dfs(net.s, std::numeric_limits<std::int64_t>::max())) total += got;
  }
  return total;
}

IntegerFlowResult oracle_min_cost_flow(const FlowNetwork& net, std::int64_t f) {
  require_standard(net, "oracle_min_cost_flow");
  if (!net.has_costs()) throw InvalidInput("oracle_min_cost_flow: every edge needs a cost");
  if (f < 0) throw InvalidInput("oracle_min_cost_flow: negative target");
  Residual g(net);
  const int n = net.n;
  constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  // Bellman-Ford seeds the potentials; costs are nonnegative on valid input
  // but this keeps the routine correct without that assumption.
  std::vector<std::int64_t> h(n, 0);
  for (int round = 0; round < n; ++round) {
    bool changed = false;
    for (int v = 0; v < n; ++v)
      for (int a : g.out[v])
        if (g.cap[a] > 0 && h[v] + g.cost[a] < h[g.to[a]]) {
          h[g.to[a]] = h[v] + g.cost[a];
          changed = true;
        }
    if (!changed) break;
  }
  std::int64_t sent = 0;
  std::vector<std::int64_t> dist(n);
  std::vector<int> via(n);
  while (sent < f) {
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(via.begin(), via.end(), -1);
    using Item = std::pair<std::int64_t, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[net.s] = 0;
    pq.push({0, net.s});
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d > dist[v]) continue;
      for (int a : g.out[v]) {
        if (g.cap[a] <= 0) continue;
        int w = g.to[a];
        std::int64_t nd = d + g.cost[a] + h[v] - h[w];
        if (nd < dist[w]) {
          dist[w] = nd;
          via[w] = a;
          pq.push({nd, w});
        }
      }
    }
    if (dist[net.t] >= inf)
      throw InfeasibleTarget("oracle_min_cost_flow: target " + std::to_string(f) +
                             " exceeds the max flow " + std::to_string(sent));
    for (int v = 0; v < n; ++v)
      if (dist[v] < inf) h[v] += dist[v];
    std::int64_t push = f - sent;
    for (int v = net.t; v != net.s; v = g.to[via[v] ^ 1]) push = std::min(push, g.cap[via[v]]);
    for (int v = net.t; v != net.s; v = g.to[via[v] ^ 1]) {
      g.cap[via[v]] -= push;
      g.cap[via[v] ^ 1] += push;
    }
    sent += push;
  }
  IntegerFlowResult out;
  out.flow = g.edge_flow(net);
  out.value = flow_value(net, out.flow);
  out.cost = flow_cost(net, out.flow);
  return out;
}

bool is_feasible(const FlowNetwork& net, const IntFlow& flow) {
  if (static_cast<int>(flow.size()) != net.m()) return false;
  std::vector<std::int64_t> bal(net.n, 0);
  for (int e = 0; e < net.m(); ++e) {
    const Edge& ed = net.edges[e];
    if (flow[e] < 0 || flow[e] > ed.capacity) return false;
    // gamma = num/den; integer flows stay exact only when den divides.
    if ((flow[e] * ed.gamma.num) % ed.gamma.den != 0) return false;
    bal[ed.tail] -= flow[e];
    bal[ed.head] += flow[e] * ed.gamma.num / ed.gamma.den;
  }
  for (int v = 0; v < net.n; ++v)
    if (v != net.s && v != net.t && bal[v] != 0) return false;
  return true;
}

std::int64_t flow_value(const FlowNetwork& net, const IntFlow& flow) {
  std::int64_t v = 0;
  for (int e = 0; e < net.m(); ++e) {
    const Edge& ed = net.edges[e];
    if (ed.head == net.t) v += flow[e] * ed.gamma.num / ed.gamma.den;
    if (ed.tail == net.t) v -= flow[e];
  }
  return v;
}

std::int64_t flow_cost(const FlowNetwork& net, const IntFlow& flow) {
  std::int64_t c = 0;
  for (int e = 0; e < net.m(); ++e) c += flow[e] * net.edges[e].cost.value_or(0);
  return c;
}

}  // namespace lossyflow
