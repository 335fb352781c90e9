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
#include <numeric>
#include <queue>
#include <string>

#include "lossyflow/errors.hpp"
#include "lossyflow/genflow.hpp"

namespace lossyflow {
namespace {

// Out-edge of every vertex on a BFS tree toward t over reversed edges,
// smallest edge id first.
std::vector<int> tree_toward_sink(const FlowNetwork& net, std::vector<int>& depth) {
  std::vector<std::vector<int>> in(net.n);
  for (int j = 0; j < net.m(); ++j) in[net.edges[j].head].push_back(j);
  std::vector<int> out_edge(net.n, -1);
  depth.assign(net.n, -1);
  std::queue<int> q;
  q.push(net.t);
  depth[net.t] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int j : in[v]) {
      int w = net.edges[j].tail;
      if (depth[w] >= 0) continue;
      depth[w] = depth[v] + 1;
      out_edge[w] = j;
      q.push(w);
    }
  }
  return out_edge;
}

std::vector<int> deepest_first(const std::vector<int>& depth) {
  std::vector<int> order(depth.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return depth[a] > depth[b]; });
  return order;
}

}  // namespace

Flow repair_flow(const FlowNetwork& net, std::span<const double> flow, double epsilon,
                 double eps_flow) {
  if (static_cast<int>(flow.size()) != net.m()) throw DimensionError("repair_flow: flow length mismatch");
  if (!(epsilon > 0.0)) throw InvalidInput("repair_flow: epsilon must be positive");
  FlowReport in_rep = report(net, flow);
  // Small slack for round-off in the incoming violations.
  double allowed = eps_flow * (1.0 + 1e-6) + 1e-12;
  if (in_rep.capacity_violation > allowed || in_rep.conservation_violation > allowed)
    throw RepairRejected("repair_flow: input violations exceed eps_flow (capacity " +
                             std::to_string(in_rep.capacity_violation) + ", conservation " +
                             std::to_string(in_rep.conservation_violation) + ")",
                         in_rep);

  Flow f(flow.begin(), flow.end());
  for (double& x : f) x = std::max(0.0, x);
  // balance[v] = gamma-weighted inflow - outflow.
  std::vector<long double> balance(net.n, 0.0L);
  for (int j = 0; j < net.m(); ++j) {
    const Edge& e = net.edges[j];
    balance[e.head] += static_cast<long double>(f[j]) * e.gamma.num / e.gamma.den;
    balance[e.tail] -= f[j];
  }
  auto add = [&](int j, long double amount) {
    const Edge& e = net.edges[j];
    f[j] = static_cast<double>(f[j] + amount);
    balance[e.head] += amount * e.gamma.num / e.gamma.den;
    balance[e.tail] -= amount;
  };

  // Deficits: leaf-to-root on the least-lossy tree.
  LossyTree tree = least_lossy_tree(net);
  for (int v : deepest_first(tree.depth)) {
    if (v == net.s || v == net.t || balance[v] >= 0.0L) continue;
    int j = tree.parent_edge[v];
    if (j < 0) throw InvalidInput("repair_flow: vertex " + std::to_string(v) + " unreachable from s");
    const Edge& e = net.edges[j];
    add(j, -balance[v] * e.gamma.den / e.gamma.num);
    balance[v] = 0.0L;
  }

  // Excesses: leaf-to-root on a tree directed toward t.
  std::vector<int> depth;
  std::vector<int> out_edge = tree_toward_sink(net, depth);
  for (int v : deepest_first(depth)) {
    if (v == net.s || v == net.t || balance[v] <= 0.0L) continue;
    int j = out_edge[v];
    if (j < 0) throw InvalidInput("repair_flow: vertex " + std::to_string(v) + " cannot reach t");
    add(j, balance[v]);
    balance[v] = 0.0L;
  }

  // Scale back inside the capacities; conservation is scale invariant.
  double factor = 1.0 / (1.0 + epsilon / (4.0 * static_cast<double>(net.u)));
  for (int j = 0; j < net.m(); ++j)
    if (f[j] * factor > static_cast<double>(net.edges[j].capacity))
      factor = std::min(factor, static_cast<double>(net.edges[j].capacity) / f[j]);
  for (double& x : f) x *= factor;
  return f;
}

}  // namespace lossyflow
