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
#include <string>

#include "lossyflow/errors.hpp"
#include "lossyflow/genflow.hpp"
#include "lossyflow/random.hpp"

namespace lossyflow {
namespace {

struct Prepared {
  FlowNetwork normalized;
  PrunedNetwork pruned;
  bool zero = false;
};

Prepared prepare(const FlowNetwork& net, double prune_eps) {
  net.validate();
  Prepared p;
  p.normalized = normalize_sink(net);
  p.pruned = prune(p.normalized, prune_eps);
  p.zero = p.pruned.sink_pruned || p.pruned.net.m() == 0;
  return p;
}

Flow lift(const Prepared& p, const FlowNetwork& original, std::span<const double> f) {
  Flow out(original.m(), 0.0);
  for (std::size_t k = 0; k < f.size(); ++k) {
    int e = p.pruned.edge_origin[k];
    if (e < original.m()) out[e] = f[k];
  }
  return out;
}

void fill_prune_stats(const Prepared& p, FlowRunStats& st) {
  st.pruned_vertices = p.normalized.n - p.pruned.net.n;
  st.pruned_edges = p.normalized.m() - p.pruned.net.m();
}

Vec solve_flow_lp(const FlowLP& flp, const GenFlowConfig& cfg, std::uint64_t seed,
                  FlowRunStats& st) {
  GenFlowConfig local = cfg;
  local.seed = seed;
  auto backend = make_backend(cfg.backend, flp, local);
  IpmConfig ipm = cfg.ipm;
  ipm.epsilon = flp.eps_flow / 2.0;
  IpmResult res = interior_point(flp.lp, ipm, *backend, cfg.observer);
  st.ipm = res.stats;
  st.eps_flow = flp.eps_flow;
  double worst = flp.max_penalty_variable(res.x);
  if (worst > flp.eps_flow / 2.0 * (1.0 + 1e-9))
    throw InternalInconsistency("flow LP: penalty variable " + std::to_string(worst) +
                                " exceeds eps_flow/2 = " + std::to_string(flp.eps_flow / 2.0));
  return res.x;
}

Flow run_maxflow(const FlowNetwork& pn, double epsilon, const GenFlowConfig& cfg,
                 std::uint64_t seed, FlowRunStats& st) {
  double eps_flow = epsilon_flow(pn, epsilon, cfg.mode);
  FlowLP flp = build_maxflow_lp(pn, eps_flow);
  Vec x = solve_flow_lp(flp, cfg, seed, st);
  auto x1 = flp.x1(x);
  st.ipm_value = pn.edges[flp.sink_edge].gamma.value() * x1[flp.sink_edge];
  return repair_flow(pn, x1, epsilon, eps_flow);
}

void check_config(const GenFlowConfig& cfg, const FlowNetwork& net) {
  if (!(cfg.epsilon > 0.0) || !(cfg.epsilon < static_cast<double>(net.u)))
    throw InvalidInput("flow config: epsilon must lie in (0, U)");
}

}  // namespace

MaxFlowResult max_flow(const FlowNetwork& net, const GenFlowConfig& cfg) {
  check_config(cfg, net);
  Prepared p = prepare(net, cfg.epsilon);
  MaxFlowResult out;
  fill_prune_stats(p, out.stats);
  if (p.zero) {
    out.flow.assign(net.m(), 0.0);
  } else {
    Flow f = run_maxflow(p.pruned.net, cfg.epsilon, cfg, mix_seed(cfg.seed), out.stats);
    out.flow = lift(p, net, f);
  }
  out.report = report(net, out.flow);
  out.value = out.report.value;
  return out;
}

MinCostResult min_cost_flow(const FlowNetwork& net, const GenFlowConfig& cfg) {
  check_config(cfg, net);
  if (!net.has_costs()) throw InvalidInput("min_cost_flow: every edge needs a cost");
  // One pruned network for both phases, so F stays feasible for the second.
  const double eps = cfg.epsilon;
  Prepared p = prepare(net, eps / 8.0);
  MinCostResult out;
  fill_prune_stats(p, out.stats);
  out.maxflow_stats = out.stats;
  if (p.zero) {
    out.flow.assign(net.m(), 0.0);
    out.report = report(net, out.flow);
    return out;
  }
  const FlowNetwork& pn = p.pruned.net;
  Flow fmax = run_maxflow(pn, eps / 8.0, cfg, mix_seed(cfg.seed), out.maxflow_stats);
  out.target = report(pn, fmax).value;
  if (out.target <= 0.0) {
    out.flow.assign(net.m(), 0.0);
    out.report = report(net, out.flow);
    return out;
  }
  double eps_flow = epsilon_flow(pn, eps, cfg.mode);
  FlowLP flp = build_mincost_lp(pn, out.target, eps_flow);
  Vec x = solve_flow_lp(flp, cfg, mix_seed(cfg.seed + 1), out.stats);
  Flow x1(flp.x1(x).begin(), flp.x1(x).end());
  out.stats.ipm_value = pn.edges[flp.sink_edge].gamma.value() * x1[flp.sink_edge];
  double shrink = 1.0 - eps / (12.0 * static_cast<double>(pn.u));
  for (double& v : x1) v *= shrink;
  Flow f = repair_flow(pn, x1, eps, eps_flow);
  out.flow = lift(p, net, f);
  out.report = report(net, out.flow);
  out.value = out.report.value;
  out.cost = out.report.cost;
  return out;
}

}  // namespace lossyflow
