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

#include "lossyflow/errors.hpp"
#include "lossyflow/genflow.hpp"

namespace lossyflow {
namespace {

// Shared assembly of [[A,0,0,I,-I],[I,I,-I,0,0]]; vertex rows for every
// vertex except those listed in `skip`.
FlowLP assemble(const FlowNetwork& net, std::initializer_list<int> skip) {
  FlowLP out;
  const int m = net.m();
  out.edges = m;
  out.vertex_row.assign(net.n, -1);
  int rows = 0;
  for (int v = 0; v < net.n; ++v)
    if (std::find(skip.begin(), skip.end(), v) == skip.end()) out.vertex_row[v] = rows++;
  out.vertex_rows = rows;
  const int nv = rows;
  std::vector<Triplet> block, t;
  for (int j = 0; j < m; ++j) {
    const Edge& e = net.edges[j];
    if (out.vertex_row[e.tail] >= 0) block.push_back({out.vertex_row[e.tail], j, -1.0});
    if (out.vertex_row[e.head] >= 0) block.push_back({out.vertex_row[e.head], j, e.gamma.value()});
    if (e.head == net.t) out.sink_edge = j;
  }
  out.flow_block = SparseMatrix::from_triplets(nv, m, block);
  t = block;
  for (int j = 0; j < m; ++j) {
    t.push_back({nv + j, j, 1.0});
    t.push_back({nv + j, m + j, 1.0});
    t.push_back({nv + j, 2 * m + j, -1.0});
  }
  for (int i = 0; i < nv; ++i) {
    t.push_back({i, 3 * m + i, 1.0});
    t.push_back({i, 3 * m + nv + i, -1.0});
  }
  out.lp.a = SparseMatrix::from_triplets(nv + m, 3 * m + 2 * nv, t);
  out.lp.lambda_min = 2.0;
  return out;
}

void check_flow_net(const FlowNetwork& net) {
  net.validate();
  if (needs_sink_normalization(net))
    throw InvalidInput("flow LP: sink must have exactly one in-edge and no out-edges");
}

}  // namespace

double FlowLP::max_penalty_variable(std::span<const double> x) const {
  double v = 0.0;
  for (std::size_t j = 2 * static_cast<std::size_t>(edges); j < x.size(); ++j) v = std::max(v, x[j]);
  return v;
}

FlowLP build_maxflow_lp(const FlowNetwork& net, double eps_flow) {
  check_flow_net(net);
  if (!(eps_flow > 0.0)) throw InvalidInput("build_maxflow_lp: eps_flow must be positive");
  FlowLP out = assemble(net, {net.s, net.t});
  const int m = net.m(), nv = out.vertex_rows;
  const double u = static_cast<double>(net.u);
  out.eps_flow = eps_flow;
  out.penalty = 4.0 * u / eps_flow;
  CanonicalLP& lp = out.lp;
  lp.b.assign(nv + m, 0.0);
  for (int j = 0; j < m; ++j) lp.b[nv + j] = static_cast<double>(net.edges[j].capacity);
  lp.c.assign(3 * m + 2 * nv, out.penalty);
  for (int j = 0; j < 2 * m; ++j) lp.c[j] = 0.0;
  lp.c[out.sink_edge] = -net.edges[out.sink_edge].gamma.value();
  lp.t = (net.n * u + 1.0) * out.penalty + 1.0;
  lp.y0.assign(nv + m, 0.0);
  for (int j = 0; j < m; ++j) lp.y0[nv + j] = -2.0 * u / eps_flow;
  return out;
}

FlowLP build_mincost_lp(const FlowNetwork& net, double f, double eps_flow,
                        std::span<const double> costs) {
  check_flow_net(net);
  if (!(eps_flow > 0.0)) throw InvalidInput("build_mincost_lp: eps_flow must be positive");
  if (f < 0.0) throw InvalidInput("build_mincost_lp: target value must be nonnegative");
  if (costs.empty() && !net.has_costs())
    throw InvalidInput("build_mincost_lp: every edge needs a cost");
  if (!costs.empty() && static_cast<int>(costs.size()) != net.m())
    throw DimensionError("build_mincost_lp: cost vector length mismatch");
  FlowLP out = assemble(net, {net.s});
  out.min_cost = true;
  const int m = net.m(), nv = out.vertex_rows;
  const double u = static_cast<double>(net.u);
  out.eps_flow = eps_flow;
  out.penalty = 4.0 * m * u * u / eps_flow;
  CanonicalLP& lp = out.lp;
  lp.b.assign(nv + m, 0.0);
  lp.b[out.vertex_row[net.t]] = f;
  for (int j = 0; j < m; ++j) lp.b[nv + j] = static_cast<double>(net.edges[j].capacity);
  lp.c.assign(3 * m + 2 * nv, out.penalty);
  for (int j = 0; j < m; ++j) {
    lp.c[j] = costs.empty() ? static_cast<double>(*net.edges[j].cost) : costs[j];
    lp.c[m + j] = 0.0;
  }
  lp.t = (net.n * u + 1.0) * out.penalty;
  lp.y0.assign(nv + m, 0.0);
  for (int j = 0; j < m; ++j) lp.y0[nv + j] = -m * u * u / eps_flow;
  return out;
}

}  // namespace lossyflow
