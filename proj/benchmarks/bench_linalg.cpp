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
#include "lossyflow/solve.hpp"

namespace lossyflow {
namespace {

struct Fixture {
  SparseSym m;
  Vec b;
};

Fixture make(int n) {
  Rng rng(n);
  Fixture f{testkit::random_sdd(n, rng), Vec(n)};
  for (double& v : f.b) v = rng.normal();
  return f;
}

void BM_SolveDirect(benchmark::State& state) {
  Fixture f = make(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_direct(f.m, f.b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveDirect)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_SolveIterative(benchmark::State& state) {
  Fixture f = make(static_cast<int>(state.range(0)));
  SolveConfig cfg;
  cfg.backend = Backend::iterative;
  cfg.eps = 1e-6;
  for (auto _ : state) benchmark::DoNotOptimize(solve_approx(f.m, f.b, cfg));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveIterative)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_Gram(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  TwoNnzFactor f = testkit::random_mmatrix_factor(n, 3 * n, n / 4, rng);
  DiagMatrix w(testkit::log_uniform(f.m(), 2.0, rng));
  for (auto _ : state) benchmark::DoNotOptimize(gram(f, w));
}
BENCHMARK(BM_Gram)->RangeMultiplier(4)->Range(64, 16384);

}  // namespace
}  // namespace lossyflow

BENCHMARK_MAIN();
