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
#include <set>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "lossyflow/exactflow.hpp"
#include "oracles.hpp"

namespace lossyflow {
namespace {

FlowNetwork make(int n, std::int64_t u, std::vector<Edge> edges) {
  FlowNetwork net;
  net.n = n;
  net.s = 0;
  net.t = n - 1;
  net.u = u;
  net.edges = std::move(edges);
  return net;
}

Edge edge(int a, int b, std::int64_t cap, std::optional<std::int64_t> cost = std::nullopt) {
  return Edge{a, b, cap, {1, 1}, cost};
}

TEST(PerturbCosts, SingleUnitEdge) {
  FlowNetwork net = make(2, 1, {edge(0, 1, 1, 1)});
  Rng rng(1);
  std::set<std::int64_t> seen;
  for (int k = 0; k < 200; ++k) {
    PerturbedNetwork p = perturb_costs(net, rng);
    EXPECT_EQ(p.denominator(), 4);
    seen.insert(p.k[0]);
    EXPECT_DOUBLE_EQ(p.cost(0), 1.0 + p.k[0] / 4.0);
  }
  EXPECT_EQ(seen, (std::set<std::int64_t>{1, 2}));
}

TEST(PerturbCosts, TotalAdditionAtMostHalf) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    FlowNetwork net = testkit::random_standard_network(8, 20, 7, true, rng);
    PerturbedNetwork p = perturb_costs(net, rng);
    double added = 0.0;
    for (int e = 0; e < net.m(); ++e)
      added += static_cast<double>(p.k[e]) / p.denominator() * net.edges[e].capacity;
    EXPECT_LE(added, 0.5);
  }
}

TEST(PerturbCosts, IsolatesUniqueOptimum) {
  // Two equal-cost s-t paths; every integer flow of value 1 enumerated.
  FlowNetwork net = make(4, 1, {edge(0, 1, 1, 1), edge(0, 2, 1, 1), edge(1, 3, 1, 1), edge(2, 3, 1, 1)});
  std::vector<IntFlow> candidates;
  for (int mask = 0; mask < 16; ++mask) {
    IntFlow f(4);
    for (int e = 0; e < 4; ++e) f[e] = (mask >> e) & 1;
    if (is_feasible(net, f) && flow_value(net, f) == 1) candidates.push_back(f);
  }
  ASSERT_EQ(candidates.size(), 2u);
  Rng rng(3);
  const int trials = 500;
  int unique = 0;
  for (int k = 0; k < trials; ++k) {
    PerturbedNetwork p = perturb_costs(net, rng);
    std::vector<std::int64_t> cost;
    for (const IntFlow& f : candidates) {
      std::int64_t c = 0;
      for (int e = 0; e < 4; ++e) c += f[e] * (net.edges[e].cost.value() * p.denominator() + p.k[e]);
      cost.push_back(c);
    }
    if (cost[0] != cost[1]) ++unique;
  }
  const double sigma = std::sqrt(0.25 / trials);
  EXPECT_GE(static_cast<double>(unique) / trials, 0.5 - 3 * sigma);
}

TEST(ExactMaxFlow, SingleEdge) { EXPECT_EQ(exact_max_flow_value(make(2, 4, {edge(0, 1, 4)})), 4); }

TEST(ExactMaxFlow, Disconnected) {
  EXPECT_EQ(exact_max_flow_value(make(3, 4, {edge(0, 1, 4), edge(2, 1, 4)})), 0);
}

TEST(ExactMaxFlow, RandomAgainstAugmentingPaths) {
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    FlowNetwork net = testkit::random_standard_network(static_cast<int>(rng.uniform_int(4, 15)),
                                                       static_cast<int>(rng.uniform_int(6, 35)),
                                                       rng.uniform_int(1, 10), false, rng);
    ExactFlowConfig cfg;
    cfg.seed = trial;
    EXPECT_EQ(exact_max_flow_value(net, cfg), oracle_max_flow_value(net));
  }
}

TEST(ExactMinCost, Path) {
  FlowNetwork net = make(3, 2, {edge(0, 1, 2, 1), edge(1, 2, 2, 1)});
  IntegerFlowResult r = exact_min_cost_flow(net, 2);
  EXPECT_EQ(r.flow, (IntFlow{2, 2}));
  EXPECT_EQ(r.cost, 4);
  EXPECT_EQ(r.value, 2);
}

TEST(ExactMinCost, ZeroTarget) {
  FlowNetwork net = make(3, 2, {edge(0, 1, 2, 1), edge(1, 2, 2, 1)});
  IntegerFlowResult r = exact_min_cost_flow(net, 0);
  EXPECT_EQ(r.flow, (IntFlow{0, 0}));
  EXPECT_EQ(r.cost, 0);
}

TEST(ExactMinCost, InfeasibleTarget) {
  FlowNetwork net = make(3, 2, {edge(0, 1, 2, 1), edge(1, 2, 2, 1)});
  EXPECT_THROW(exact_min_cost_flow(net, 3), InfeasibleTarget);
}

TEST(ExactMinCost, RandomAgainstSuccessiveShortestPaths) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    FlowNetwork net = testkit::random_standard_network(static_cast<int>(rng.uniform_int(4, 12)),
                                                       static_cast<int>(rng.uniform_int(6, 30)),
                                                       rng.uniform_int(1, 10), true, rng);
    std::int64_t f = oracle_max_flow_value(net);
    if (f > 1 && trial % 2 == 0) f = f / 2;
    ExactFlowConfig cfg;
    cfg.seed = trial;
    IntegerFlowResult got = exact_min_cost_flow(net, f, cfg);
    IntegerFlowResult want = oracle_min_cost_flow(net, f);
    EXPECT_TRUE(is_feasible(net, got.flow));
    EXPECT_EQ(got.value, want.value);
    EXPECT_EQ(got.cost, want.cost);
  }
}

TEST(OracleMinCost, HandCases) {
  FlowNetwork path = make(3, 2, {edge(0, 1, 2, 1), edge(1, 2, 2, 1)});
  IntegerFlowResult r = oracle_min_cost_flow(path, 2);
  EXPECT_EQ(r.flow, (IntFlow{2, 2}));
  EXPECT_EQ(r.cost, 4);
  EXPECT_EQ(oracle_min_cost_flow(path, 0).cost, 0);
}

TEST(OracleMinCost, AgreesWithLpOracle) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    FlowNetwork net = testkit::random_standard_network(7, 16, 6, true, rng);
    std::int64_t f = oracle_max_flow_value(net);
    EXPECT_NEAR(static_cast<double>(f), static_cast<double>(testkit::lp_max_flow(net)), 1e-9);
    IntegerFlowResult r = oracle_min_cost_flow(net, f);
    EXPECT_TRUE(is_feasible(net, r.flow));
    EXPECT_EQ(flow_value(net, r.flow), f);
    EXPECT_NEAR(static_cast<double>(r.cost),
                static_cast<double>(testkit::lp_min_cost_at_value(net, static_cast<long double>(f))),
                1e-7);
  }
}

}  // namespace
}  // namespace lossyflow
