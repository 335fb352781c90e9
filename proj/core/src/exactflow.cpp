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
#include <limits>
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

GenFlowConfig as_genflow(const ExactFlowConfig& cfg, double epsilon, std::uint64_t seed) {
  GenFlowConfig g;
  g.epsilon = epsilon;
  g.mode = cfg.mode;
  g.seed = seed;
  g.backend = cfg.backend;
  g.ipm = cfg.ipm;
  g.observer = cfg.observer;
  g.mmatrix = cfg.mmatrix;
  return g;
}

}  // namespace

std::int64_t PerturbedNetwork::denominator() const {
  std::int64_t m = base.m(), u = base.u;
  return 4 * m * m * u * u;
}

double PerturbedNetwork::cost(int e) const {
  return static_cast<double>(base.edges[e].cost.value_or(0)) +
         static_cast<double>(k[e]) / static_cast<double>(denominator());
}

std::vector<double> PerturbedNetwork::costs() const {
  std::vector<double> out(base.m());
  for (int e = 0; e < base.m(); ++e) out[e] = cost(e);
  return out;
}

PerturbedNetwork perturb_costs(const FlowNetwork& net, Rng& rng) {
  require_standard(net, "perturb_costs");
  if (!net.has_costs()) throw InvalidInput("perturb_costs: every edge needs a cost");
  const long double m = net.m(), u = static_cast<long double>(net.u);
  if (4.0L * m * m * u * u > static_cast<long double>(std::numeric_limits<std::int64_t>::max()))
    throw InvalidInput("perturb_costs: 4 m^2 U^2 overflows a 64-bit integer");
  PerturbedNetwork out{net, std::vector<std::int64_t>(net.m())};
  const std::int64_t hi = 2 * static_cast<std::int64_t>(net.m()) * net.u;
  for (auto& k : out.k) k = rng.uniform_int(1, hi);
  return out;
}

std::int64_t exact_max_flow_value(const FlowNetwork& net, const ExactFlowConfig& cfg) {
  require_standard(net, "exact_max_flow_value");
  MaxFlowResult r = max_flow(net, as_genflow(cfg, 0.5, cfg.seed));
  const double raw = r.stats.ipm_value;
  const double nearest = std::round(raw);
  if (std::abs(raw - nearest) >= 0.4)
    throw PrecisionFailure("exact_max_flow_value: IPM value " + std::to_string(raw) +
                           " is not within 0.4 of an integer");
  return static_cast<std::int64_t>(nearest);
}

IntegerFlowResult exact_min_cost_flow(const FlowNetwork& net, std::int64_t f,
                                      const ExactFlowConfig& cfg) {
  require_standard(net, "exact_min_cost_flow");
  if (!net.has_costs()) throw InvalidInput("exact_min_cost_flow: every edge needs a cost");
  if (f < 0) throw InvalidInput("exact_min_cost_flow: negative target");
  if (cfg.retries < 1) throw InvalidInput("exact_min_cost_flow: retries must be >= 1");
  IntegerFlowResult out;
  out.flow.assign(net.m(), 0);
  if (f == 0) return out;
  const std::int64_t fmax = oracle_max_flow_value(net);
  if (f > fmax)
    throw InfeasibleTarget("exact_min_cost_flow: target " + std::to_string(f) +
                           " exceeds the max flow " + std::to_string(fmax));

  const FlowNetwork normalized = normalize_sink(net);
  const PrunedNetwork pruned = prune(normalized, 0.5);
  const FlowNetwork& pn = pruned.net;
  const double m = net.m(), u = static_cast<double>(net.u);
  double eps_ipm = 1.0 / (12.0 * m * m * u * u * u);
  if (cfg.mode == ParameterMode::practical) eps_ipm = std::min(eps_ipm, 1e-6);
  // Penalty 4 m U^2: above every optimal dual coordinate of a standard
  // min-cost LP (bounded by about 3 m U), so the penalty stays exact while
  // the dual box stays small enough for double precision.
  const double eps_flow = 1.0;

  Rng rng(cfg.seed);
  for (int attempt = 0; attempt < cfg.retries; ++attempt) {
    const PerturbedNetwork pert = perturb_costs(net, rng);
    std::vector<double> costs(pn.m(), 0.0);
    for (int k = 0; k < pn.m(); ++k) {
      int e = pruned.edge_origin[k];
      if (e < net.m()) costs[k] = pert.cost(e);
    }
    FlowLP flp = build_mincost_lp(pn, static_cast<double>(f), eps_flow, costs);
    GenFlowConfig g = as_genflow(cfg, 0.5, mix_seed(cfg.seed + 1 + attempt));
    auto backend = make_backend(cfg.backend, flp, g);
    IpmConfig ipm = cfg.ipm;
    ipm.epsilon = eps_ipm;
    IpmResult res = interior_point(flp.lp, ipm, *backend, cfg.observer);
    auto x1 = flp.x1(res.x);

    long double objective = 0.0L;
    bool near_integral = true;
    IntFlow rounded(net.m(), 0);
    for (int k = 0; k < pn.m(); ++k) {
      objective += static_cast<long double>(costs[k]) * x1[k];
      const double r = std::round(x1[k]);
      if (std::abs(x1[k] - r) >= 1.0 / 3.0) near_integral = false;
      int e = pruned.edge_origin[k];
      if (e < net.m()) rounded[e] = static_cast<std::int64_t>(r);
    }
    if (!near_integral || !is_feasible(net, rounded) || flow_value(net, rounded) != f) continue;
    const std::int64_t cost = flow_cost(net, rounded);
    if (static_cast<long double>(cost) > objective + 0.5L) continue;
    out.flow = std::move(rounded);
    out.value = f;
    out.cost = cost;
    out.retries = attempt;
    return out;
  }
  throw RetriesExceeded("exact_min_cost_flow: rounding failed to verify after " +
                            std::to_string(cfg.retries) + " perturbations",
                        cfg.retries);
}

}  // namespace lossyflow
