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

#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "lossyflow/exactflow.hpp"
#include "lossyflow/genflow.hpp"
#include "lossyflow/ipm.hpp"

namespace lossyflow {
namespace {

void BM_InteriorPoint(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Rng rng(m);
  CanonicalLP lp = testkit::random_bounded_lp(m / 10, m - 2 * (m / 10), rng);
  IpmConfig cfg;
  cfg.epsilon = 1e-3;
  long shifts = 0;
  for (auto _ : state) {
    DirectBackend backend;
    shifts = interior_point(lp, cfg, backend).stats.shifts;
  }
  state.counters["shifts"] = static_cast<double>(shifts);
}
BENCHMARK(BM_InteriorPoint)->Arg(50)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_MaxFlow(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(n);
  FlowNetwork net = testkit::random_lossy_network(n, 3 * n, 10, false, rng);
  GenFlowConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(max_flow(net, cfg));
}
BENCHMARK(BM_MaxFlow)->Arg(10)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_MinCostFlow(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(n);
  FlowNetwork net = testkit::random_lossy_network(n, 3 * n, 10, true, rng);
  GenFlowConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(min_cost_flow(net, cfg));
}
BENCHMARK(BM_MinCostFlow)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_ExactMinCost(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(n);
  FlowNetwork net = testkit::random_standard_network(n, 3 * n, 10, true, rng);
  const std::int64_t f = oracle_max_flow_value(net);
  for (auto _ : state) benchmark::DoNotOptimize(exact_min_cost_flow(net, f));
}
BENCHMARK(BM_ExactMinCost)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace lossyflow

BENCHMARK_MAIN();
