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

#include <cmath>
#include <limits>
#include <queue>
#include <utility>

#include "lossyflow/errors.hpp"
#include "lossyflow/genflow.hpp"

namespace lossyflow {

LossyTree least_lossy_tree(const FlowNetwork& net) {
  const int n = net.n;
  std::vector<std::vector<int>> out(n);
  for (int j = 0; j < net.m(); ++j) out[net.edges[j].tail].push_back(j);
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  LossyTree tree{std::vector<int>(n, -1), std::vector<double>(n, 0.0), std::vector<int>(n, -1)};
  std::vector<char> done(n, 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[net.s] = 0.0;
  tree.gain[net.s] = 1.0;
  tree.depth[net.s] = 0;
  pq.push({0.0, net.s});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (done[v]) continue;
    done[v] = 1;
    if (v != net.s) {
      const Edge& e = net.edges[tree.parent_edge[v]];
      tree.gain[v] = tree.gain[e.tail] * e.gamma.value();
      tree.depth[v] = tree.depth[e.tail] + 1;
    }
    for (int j : out[v]) {
      const Edge& e = net.edges[j];
      if (done[e.head]) continue;
      double nd = d - std::log(e.gamma.value());
      if (nd < dist[e.head]) {
        dist[e.head] = nd;
        tree.parent_edge[e.head] = j;
        pq.push({nd, e.head});
      }
    }
  }
  return tree;
}

PrunedNetwork prune(const FlowNetwork& net, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidInput("prune: epsilon must be positive");
  const int n = net.n;
  const double threshold =
      epsilon / (2.0 * std::max(1, net.m()) * n * static_cast<double>(net.u));
  LossyTree tree = least_lossy_tree(net);
  std::vector<char> keep(n, 0);
  for (int v = 0; v < n; ++v)
    keep[v] = (v == net.s || v == net.t || tree.gain[v] >= threshold) ? 1 : 0;

  auto usable = [&](const Edge& e) {
    return keep[e.tail] && keep[e.head] && e.tail != e.head && e.head != net.s;
  };
  // Backward reachability to t through kept vertices.
  std::vector<std::vector<int>> in(n);
  for (const Edge& e : net.edges)
    if (usable(e)) in[e.head].push_back(e.tail);
  std::vector<char> to_t(n, 0);
  std::queue<int> q;
  q.push(net.t);
  to_t[net.t] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : in[v])
      if (!to_t[w]) {
        to_t[w] = 1;
        q.push(w);
      }
  }
  PrunedNetwork out;
  if (!to_t[net.s] || tree.gain[net.t] == 0.0) {
    out.sink_pruned = true;
    out.net = FlowNetwork{2, {}, 0, 1, net.u};
    out.vertex_origin = {net.s, net.t};
    return out;
  }
  for (int v = 0; v < n; ++v)
    if (v != net.s && v != net.t && !to_t[v]) keep[v] = 0;

  std::vector<int> new_id(n, -1);
  for (int v = 0; v < n; ++v)
    if (keep[v]) {
      new_id[v] = static_cast<int>(out.vertex_origin.size());
      out.vertex_origin.push_back(v);
    }
  out.net.n = static_cast<int>(out.vertex_origin.size());
  out.net.s = new_id[net.s];
  out.net.t = new_id[net.t];
  out.net.u = net.u;
  for (int j = 0; j < net.m(); ++j) {
    const Edge& e = net.edges[j];
    if (!usable(e)) continue;
    Edge ne = e;
    ne.tail = new_id[e.tail];
    ne.head = new_id[e.head];
    out.net.edges.push_back(ne);
    out.edge_origin.push_back(j);
  }
  return out;
}

double epsilon_flow(const FlowNetwork& net, double epsilon, ParameterMode mode) {
  double m = std::max(1, net.m()), n = net.n, u = static_cast<double>(net.u);
  if (mode == ParameterMode::paper_exact)
    return epsilon * epsilon / (64.0 * m * m * n * n * u * u * u);
  return epsilon / (16.0 * m * u);
}

}  // namespace lossyflow
