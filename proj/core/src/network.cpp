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
#include <cmath>
#include <queue>
#include <string>

#include "lossyflow/errors.hpp"
#include "lossyflow/genflow.hpp"

namespace lossyflow {

bool FlowNetwork::has_costs() const {
  return std::all_of(edges.begin(), edges.end(), [](const Edge& e) { return e.cost.has_value(); });
}

std::int64_t FlowNetwork::implied_u() const {
  std::int64_t v = 1;
  for (const Edge& e : edges) {
    v = std::max({v, e.capacity, e.gamma.num, e.gamma.den});
    if (e.cost) v = std::max(v, *e.cost);
  }
  return v;
}

void FlowNetwork::validate() const {
  if (n < 2) throw InvalidInput("network needs at least two vertices");
  if (s < 0 || s >= n || t < 0 || t >= n) throw InvalidInput("source or sink out of range");
  if (s == t) throw InvalidInput("source and sink must differ");
  if (u < 1) throw InvalidInput("U must be >= 1");
  for (std::size_t j = 0; j < edges.size(); ++j) {
    const Edge& e = edges[j];
    std::string id = "edge " + std::to_string(j) + ": ";
    if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n)
      throw InvalidInput(id + "endpoint out of range");
    if (e.capacity < 1 || e.capacity > u) throw InvalidInput(id + "capacity outside [1, U]");
    if (e.gamma.num < 1 || e.gamma.den < 1 || e.gamma.num > u || e.gamma.den > u)
      throw InvalidInput(id + "gain terms outside [1, U]");
    if (e.gamma.num > e.gamma.den) throw InvalidInput(id + "gain exceeds 1");
    if (e.cost && (*e.cost < 0 || *e.cost > u)) throw InvalidInput(id + "cost outside [0, U]");
  }
}

FlowReport report(const FlowNetwork& net, std::span<const double> flow) {
  if (static_cast<int>(flow.size()) != net.m()) throw DimensionError("report: flow length mismatch");
  std::vector<long double> in(net.n, 0.0L), out(net.n, 0.0L);
  FlowReport r;
  long double cost = 0.0L;
  for (int j = 0; j < net.m(); ++j) {
    const Edge& e = net.edges[j];
    double f = flow[j];
    in[e.head] += static_cast<long double>(f) * e.gamma.num / e.gamma.den;
    out[e.tail] += f;
    if (e.cost) cost += static_cast<long double>(f) * *e.cost;
    r.capacity_violation = std::max(r.capacity_violation, f - static_cast<double>(e.capacity));
  }
  for (int v = 0; v < net.n; ++v) {
    if (v == net.s || v == net.t) continue;
    r.conservation_violation =
        std::max(r.conservation_violation, static_cast<double>(std::abs(in[v] - out[v])));
  }
  r.value = static_cast<double>(in[net.t] - out[net.t]);
  r.cost = static_cast<double>(cost);
  return r;
}

bool needs_sink_normalization(const FlowNetwork& net) {
  int in = 0;
  for (const Edge& e : net.edges) {
    if (e.tail == net.t) return true;
    if (e.head == net.t) ++in;
  }
  return in != 1;
}

FlowNetwork normalize_sink(const FlowNetwork& net) {
  net.validate();
  if (!needs_sink_normalization(net)) return net;
  FlowNetwork out = net;
  // Non-binding: at most this much can ever arrive at t.
  long double inflow = 0.0L;
  for (const Edge& e : net.edges)
    if (e.head == net.t) inflow += static_cast<long double>(e.capacity) * e.gamma.num / e.gamma.den;
  std::int64_t cap = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(inflow)));
  Edge sink_edge{net.t, net.n, cap, Rational{1, 1}, std::nullopt};
  if (net.has_costs()) sink_edge.cost = 0;
  out.edges.push_back(sink_edge);
  out.t = net.n;
  out.n = net.n + 1;
  out.u = std::max(net.u, cap);
  return out;
}

bool reaches(const FlowNetwork& net, int from, int to) {
  std::vector<std::vector<int>> adj(net.n);
  for (const Edge& e : net.edges) adj[e.tail].push_back(e.head);
  std::vector<char> seen(net.n, 0);
  std::queue<int> q;
  q.push(from);
  seen[from] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    if (v == to) return true;
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        q.push(w);
      }
  }
  return false;
}

}  // namespace lossyflow
