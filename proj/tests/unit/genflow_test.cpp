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
#include <functional>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "lossyflow/genflow.hpp"
#include "oracles.hpp"

namespace lossyflow {
namespace {

Edge edge(int a, int b, std::int64_t cap, std::int64_t num, std::int64_t den,
          std::optional<std::int64_t> cost = std::nullopt) {
  return Edge{a, b, cap, {num, den}, cost};
}

FlowNetwork make(int n, int s, int t, std::int64_t u, std::vector<Edge> edges) {
  FlowNetwork net;
  net.n = n;
  net.s = s;
  net.t = t;
  net.u = u;
  net.edges = std::move(edges);
  return net;
}

FlowNetwork one_edge(std::optional<std::int64_t> cost = std::nullopt) {
  return make(2, 0, 1, 4, {edge(0, 1, 4, 1, 2, cost)});
}

double lp_optimum(const CanonicalLP& lp) {
  testkit::LpSolution sol = testkit::simplex(testkit::to_dense(lp.a), testkit::to_ld(lp.b),
                                             testkit::to_ld(lp.c));
  EXPECT_EQ(sol.status, testkit::LpStatus::optimal);
  return static_cast<double>(sol.objective);
}

TEST(NormalizeSink, AlreadyNormalizedUnchanged) {
  FlowNetwork net = one_edge();
  EXPECT_FALSE(needs_sink_normalization(net));
  EXPECT_EQ(normalize_sink(net), net);
}

TEST(NormalizeSink, TwoInEdgesGetOneNewSink) {
  FlowNetwork net = make(3, 0, 2, 4, {edge(0, 1, 4, 1, 1), edge(1, 2, 3, 1, 2), edge(0, 2, 2, 3, 4)});
  FlowNetwork out = normalize_sink(net);
  EXPECT_EQ(out.n, net.n + 1);
  EXPECT_EQ(out.m(), net.m() + 1);
  EXPECT_EQ(out.edges.back().gamma, (Rational{1, 1}));
  EXPECT_NEAR(static_cast<double>(testkit::lp_max_flow(out)),
              static_cast<double>(testkit::lp_max_flow(net)), 1e-12);
}

TEST(NormalizeSink, RandomValueEquivalence) {
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    FlowNetwork net = testkit::random_lossy_network(8, 16, 6, false, rng);
    EXPECT_NEAR(static_cast<double>(testkit::lp_max_flow(normalize_sink(net))),
                static_cast<double>(testkit::lp_max_flow(net)), 1e-10);
  }
}

TEST(LeastLossyTree, SingleEdge) {
  LossyTree tree = least_lossy_tree(make(2, 0, 1, 2, {edge(0, 1, 1, 1, 2)}));
  EXPECT_DOUBLE_EQ(tree.gain[1], 0.5);
  EXPECT_EQ(tree.parent_edge[1], 0);
}

TEST(LeastLossyTree, ParallelPathsPickLargerGain) {
  LossyTree tree = least_lossy_tree(make(2, 0, 1, 3, {edge(0, 1, 1, 1, 2), edge(0, 1, 1, 1, 3)}));
  EXPECT_DOUBLE_EQ(tree.gain[1], 0.5);
  EXPECT_EQ(tree.parent_edge[1], 0);
}

TEST(LeastLossyTree, MatchesPathEnumeration) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(3, 10));
    FlowNetwork net = testkit::random_lossy_network(n, 2 * n, 5, false, rng);
    std::vector<double> best(n, 0.0);
    std::vector<char> on(n, 0);
    std::function<void(int, double)> dfs = [&](int v, double g) {
      best[v] = std::max(best[v], g);
      on[v] = 1;
      for (const Edge& e : net.edges)
        if (e.tail == v && !on[e.head]) dfs(e.head, g * e.gamma.value());
      on[v] = 0;
    };
    dfs(net.s, 1.0);
    LossyTree tree = least_lossy_tree(net);
    for (int v = 0; v < n; ++v) EXPECT_NEAR(tree.gain[v], best[v], 1e-15);
  }
}

TEST(Prune, UnitGainsKeepEverything) {
  Rng rng(3);
  FlowNetwork net = testkit::random_standard_network(10, 25, 5, false, rng);
  PrunedNetwork p = prune(net, 1e-2);
  ASSERT_FALSE(p.sink_pruned);
  LossyTree tree = least_lossy_tree(net);
  for (int v = 0; v < net.n; ++v)
    if (tree.gain[v] > 0.0 && v != net.s) {
      // Unreachable-to-t vertices may go; reachable ones with gain 1 must stay.
      bool kept = std::find(p.vertex_origin.begin(), p.vertex_origin.end(), v) != p.vertex_origin.end();
      bool leads_to_t = false;
      for (const Edge& e : net.edges) leads_to_t = leads_to_t || (e.tail == v && e.head == net.t);
      if (leads_to_t) {
        EXPECT_TRUE(kept) << v;
      }
    }
}

TEST(Prune, HalvingChainDropsTail) {
  const int len = 60;
  std::vector<Edge> edges;
  for (int k = 0; k < len; ++k) edges.push_back(edge(k, k + 1, 1, 1, 2));
  FlowNetwork chain = make(len + 1, 0, len, 2, edges);
  EXPECT_TRUE(prune(chain, 1e-2).sink_pruned);

  // Shortcuts to t keep every vertex connected, so only the gain test prunes.
  for (int k = 1; k < len; ++k) edges.push_back(edge(k, len, 1, 1, 1));
  FlowNetwork net = make(len + 1, 0, len, 2, edges);
  PrunedNetwork p = prune(net, 1e-2);
  const double threshold = 1e-2 / (2.0 * net.m() * net.n * net.u);
  std::vector<int> want;
  for (int v = 0; v < len; ++v)
    if (std::ldexp(1.0, -v) >= threshold) want.push_back(v);
  want.push_back(len);
  EXPECT_EQ(p.vertex_origin, want);
}

TEST(Prune, ValueChangesByAtMostHalfEpsilon) {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    FlowNetwork net = testkit::random_lossy_network(10, 24, 8, false, rng);
    const double eps = 0.5;
    PrunedNetwork p = prune(net, eps);
    double before = static_cast<double>(testkit::lp_max_flow(net));
    double after = p.sink_pruned ? 0.0 : static_cast<double>(testkit::lp_max_flow(p.net));
    EXPECT_LE(before - after, eps / 2.0 + 1e-12);
    EXPECT_LE(after, before + 1e-12);
  }
}

TEST(BuildMaxflowLp, OneEdge) {
  FlowLP flp = build_maxflow_lp(one_edge(), 1e-2);
  EXPECT_EQ(flp.vertex_rows, 0);
  EXPECT_EQ(flp.lp.rows(), 1);
  EXPECT_EQ(flp.lp.cols(), 3);
  EXPECT_NEAR(lp_optimum(flp.lp), -2.0, 1e-12);
}

TEST(BuildMaxflowLp, DimensionsAndOptimum) {
  Rng rng(5);
  for (int trial = 0; trial < 8; ++trial) {
    FlowNetwork net = normalize_sink(testkit::random_lossy_network(6, 12, 5, false, rng));
    FlowLP flp = build_maxflow_lp(net, 0.1);
    const int n = net.n, m = net.m();
    EXPECT_EQ(flp.lp.cols(), 3 * m + 2 * (n - 2));
    EXPECT_EQ(flp.lp.rows(), (n - 2) + m);
    EXPECT_NEAR(lp_optimum(flp.lp), -static_cast<double>(testkit::lp_max_flow(net)), 1e-8);
  }
}

TEST(BuildMincostLp, ZeroTarget) {
  FlowLP flp = build_mincost_lp(one_edge(3), 0.0, 1e-2);
  EXPECT_NEAR(lp_optimum(flp.lp), 0.0, 1e-12);
}

TEST(BuildMincostLp, OneEdgeForced) {
  FlowLP flp = build_mincost_lp(one_edge(3), 2.0, 1e-2);
  testkit::LpSolution sol = testkit::simplex(testkit::to_dense(flp.lp.a), testkit::to_ld(flp.lp.b),
                                             testkit::to_ld(flp.lp.c));
  ASSERT_EQ(sol.status, testkit::LpStatus::optimal);
  EXPECT_NEAR(static_cast<double>(sol.x[0]), 4.0, 1e-12);
  EXPECT_NEAR(static_cast<double>(sol.objective), 12.0, 1e-12);
}

TEST(BuildMincostLp, OptimumMatchesOriginal) {
  Rng rng(6);
  for (int trial = 0; trial < 8; ++trial) {
    FlowNetwork net = normalize_sink(testkit::random_lossy_network(6, 12, 5, true, rng));
    double f = 0.5 * static_cast<double>(testkit::lp_max_flow(net));
    FlowLP flp = build_mincost_lp(net, f, 0.1);
    EXPECT_NEAR(lp_optimum(flp.lp), static_cast<double>(testkit::lp_min_cost_at_value(net, f)),
                1e-8);
  }
}

TEST(StructuredBackend, ProbeSolvesMatchDense) {
  Rng rng(7);
  FlowNetwork net = normalize_sink(testkit::random_lossy_network(10, 24, 5, false, rng));
  FlowLP flp = build_maxflow_lp(net, 0.1);
  Vec w = testkit::log_uniform(flp.lp.cols(), 2.0, rng);
  Vec rhs(flp.lp.rows());
  for (double& v : rhs) v = rng.normal();
  auto backend = structured_backend(flp, MMatrixConfig{}, 3);
  BackendResult r = backend->solve(NormalSystem{flp.lp.a, w, {}}, rhs, 1e-6);
  testkit::DenseLd a = testkit::to_dense(flp.lp.a);
  testkit::DenseLd k = a * testkit::to_ld(w).asDiagonal() * a.transpose();
  EXPECT_LE(testkit::relative_m_error(k, rhs, r.x), 1e-6);
}

TEST(StructuredBackend, FlowBlockGramIsMMatrix) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    FlowNetwork net = normalize_sink(testkit::random_lossy_network(10, 30, 9, false, rng));
    FlowLP flp = build_maxflow_lp(net, 0.1);
    SparseSym g = gram(flp.flow_block, testkit::log_uniform(flp.edges, 2.0, rng));
    for (int j = 0; j < g.n(); ++j)
      for (int p = g.col_ptr()[j]; p < g.col_ptr()[j + 1]; ++p)
        if (g.row_idx()[p] != j) {
          EXPECT_LE(g.values()[p], 0.0);
        }
  }
}

TEST(FlowDirectBackend, MatchesDense) {
  Rng rng(9);
  FlowNetwork net = normalize_sink(testkit::random_lossy_network(12, 30, 5, true, rng));
  FlowLP flp = build_mincost_lp(net, 0.5, 0.1);
  Vec w = testkit::log_uniform(flp.lp.cols(), 6.0, rng);
  Vec v(flp.lp.rows());
  for (double& x : v) x = rng.normal();
  Vec rhs(flp.lp.rows());
  for (double& x : rhs) x = rng.normal();
  auto backend = flow_direct_backend(flp);
  BackendResult r = backend->solve(NormalSystem{flp.lp.a, w, v}, rhs, 1e-8);
  testkit::DenseLd a = testkit::to_dense(flp.lp.a);
  testkit::VecLd vl = testkit::to_ld(v);
  testkit::DenseLd k = a * testkit::to_ld(w).asDiagonal() * a.transpose() + vl * vl.transpose();
  EXPECT_LE(testkit::relative_m_error(k, rhs, r.x), 1e-8);
}

TEST(RepairFlow, ExactInputOnlyScales) {
  FlowNetwork net = make(3, 0, 2, 4, {edge(0, 1, 4, 1, 2), edge(1, 2, 4, 1, 1)});
  Flow f{4.0, 2.0};
  const double eps = 0.1;
  Flow out = repair_flow(net, f, eps, 1e-3);
  const double scale = 1.0 / (1.0 + eps / (4.0 * net.u));
  EXPECT_NEAR(out[0], 4.0 * scale, 1e-12);
  EXPECT_NEAR(out[1], 2.0 * scale, 1e-12);
  FlowReport r = report(net, out);
  EXPECT_LE(r.conservation_violation, 1e-12);
  EXPECT_GE(r.value, 2.0 - eps / 4.0);
}

TEST(RepairFlow, ZeroStaysZero) {
  FlowNetwork net = make(3, 0, 2, 4, {edge(0, 1, 4, 1, 2), edge(1, 2, 4, 1, 1)});
  EXPECT_EQ(repair_flow(net, Flow{0.0, 0.0}, 0.1, 1e-3), (Flow{0.0, 0.0}));
}

double net_m(const FlowNetwork& net) { return static_cast<double>(net.m()); }

TEST(RepairFlow, PerturbedFlowsBecomeFeasible) {
  Rng rng(10);
  int runs = 0;
  while (runs < 10) {
    FlowNetwork raw = testkit::random_lossy_network(10, 25, 6, false, rng);
    const double eps = 0.1;
    PrunedNetwork p = prune(normalize_sink(raw), eps);
    if (p.sink_pruned) continue;
    GenFlowConfig cfg;
    cfg.epsilon = eps;
    MaxFlowResult exact = max_flow(p.net, cfg);
    const double eps_flow = epsilon_flow(p.net, eps, ParameterMode::practical);
    Flow f = exact.flow;
    for (double& x : f) x = std::max(0.0, x + eps_flow / net_m(p.net) * (rng.uniform() - 0.5));
    Flow out = repair_flow(p.net, f, eps, eps_flow);
    FlowReport r = report(p.net, out);
    EXPECT_LE(r.capacity_violation, 1e-9);
    EXPECT_LE(r.conservation_violation, 1e-9);
    EXPECT_GE(r.value, static_cast<double>(testkit::lp_max_flow(p.net)) - eps);
    ++runs;
  }
}

TEST(MaxFlow, SingleEdge) {
  GenFlowConfig cfg;
  cfg.epsilon = 1e-3;
  MaxFlowResult r = max_flow(one_edge(), cfg);
  EXPECT_NEAR(r.value, 2.0, 1e-3);
  EXPECT_LE(r.report.capacity_violation, 1e-9);
}

TEST(MaxFlow, LossyChain) {
  FlowNetwork net = make(3, 0, 2, 10, {edge(0, 1, 4, 1, 2), edge(1, 2, 10, 1, 2)});
  GenFlowConfig cfg;
  cfg.epsilon = 1e-2;
  MaxFlowResult r = max_flow(net, cfg);
  EXPECT_NEAR(r.value, 1.0, 1e-2);
  EXPECT_LE(r.report.conservation_violation, 1e-9);
}

TEST(MaxFlow, RandomAgainstLpOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    FlowNetwork net = testkit::random_lossy_network(15, 40, 8, false, rng);
    GenFlowConfig cfg;
    cfg.seed = trial;
    MaxFlowResult r = max_flow(net, cfg);
    double opt = static_cast<double>(testkit::lp_max_flow(net));
    EXPECT_LE(std::abs(r.value - opt), cfg.epsilon);
    EXPECT_LE(r.report.capacity_violation, 1e-9);
    EXPECT_LE(r.report.conservation_violation, 1e-9);
  }
}

TEST(MaxFlow, BackendsAgree) {
  Rng rng(12);
  FlowNetwork net = testkit::random_lossy_network(6, 12, 4, false, rng);
  double opt = static_cast<double>(testkit::lp_max_flow(net));
  for (FlowBackend be : {FlowBackend::dense, FlowBackend::iterative}) {
    GenFlowConfig cfg;
    cfg.backend = be;
    cfg.epsilon = 0.1;
    EXPECT_NEAR(max_flow(net, cfg).value, opt, 0.1);
  }
}

TEST(MinCostFlow, SingleEdge) {
  GenFlowConfig cfg;
  cfg.epsilon = 1e-2;
  MinCostResult r = min_cost_flow(one_edge(3), cfg);
  EXPECT_NEAR(r.value, 2.0, 1e-2);
  EXPECT_LE(r.cost, 12.0 + 1e-9);
}

TEST(MinCostFlow, CheapRouteFirst) {
  FlowNetwork net = make(3, 0, 2, 5, {edge(0, 1, 3, 1, 1, 1), edge(1, 2, 2, 1, 1, 1),
                                      edge(1, 2, 2, 1, 1, 5)});
  GenFlowConfig cfg;
  cfg.epsilon = 1e-2;
  MinCostResult r = min_cost_flow(net, cfg);
  EXPECT_GE(r.value, 3.0 - 1e-2);
  EXPECT_GT(r.flow[1], r.flow[2]);
  EXPECT_LE(r.cost, static_cast<double>(testkit::lp_min_cost_at_value(normalize_sink(net), 3.0)) + 1e-6);
}

TEST(MinCostFlow, UnreachableSinkGivesZeroFlow) {
  FlowNetwork net = make(3, 0, 2, 2, {edge(0, 1, 2, 1, 1, 1), edge(2, 1, 2, 1, 1, 1)});
  MinCostResult r = min_cost_flow(net, GenFlowConfig{});
  EXPECT_EQ(r.flow, Flow(2, 0.0));
  EXPECT_EQ(r.value, 0.0);
}

TEST(Report, ZeroFlow) {
  FlowReport r = report(one_edge(2), Flow{0.0});
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.cost, 0.0);
  EXPECT_EQ(r.capacity_violation, 0.0);
  EXPECT_EQ(r.conservation_violation, 0.0);
}

TEST(Report, FeasibleFlow) {
  FlowNetwork net = make(3, 0, 2, 4, {edge(0, 1, 4, 1, 2, 1), edge(1, 2, 4, 1, 1, 2)});
  FlowReport r = report(net, Flow{4.0, 2.0});
  EXPECT_DOUBLE_EQ(r.value, 2.0);
  EXPECT_DOUBLE_EQ(r.cost, 8.0);
  EXPECT_EQ(r.capacity_violation, 0.0);
  EXPECT_EQ(r.conservation_violation, 0.0);
}

TEST(Report, MeasuresInjectedPerturbations) {
  FlowNetwork net = make(3, 0, 2, 4, {edge(0, 1, 4, 1, 2), edge(1, 2, 4, 1, 1)});
  Rng rng(13);
  for (int k = 0; k < 20; ++k) {
    double over = rng.uniform(), leak = rng.uniform();
    FlowReport r = report(net, Flow{4.0 + over, 2.0 + over / 2.0 + leak});
    EXPECT_NEAR(r.capacity_violation, over, 1e-12);
    EXPECT_NEAR(r.conservation_violation, leak, 1e-12);
  }
}

}  // namespace
}  // namespace lossyflow
