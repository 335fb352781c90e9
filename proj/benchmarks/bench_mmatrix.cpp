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
#include "lossyflow/mmatrix.hpp"

namespace lossyflow {
namespace {

TwoNnzFactor skewed(int n) {
  Rng rng(n);
  return testkit::scale_rows(testkit::random_mmatrix_factor(n, 2 * n, n / 8, rng),
                             testkit::log_uniform(n, 6.0, rng));
}

void BM_FindDdScaling(benchmark::State& state) {
  TwoNnzFactor f = skewed(static_cast<int>(state.range(0)));
  MMatrixConfig cfg;
  estimate_spectrum(f, cfg.lambda_min, cfg.lambda_max);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    benchmark::DoNotOptimize(find_dd_scaling(f, cfg, rng, SolveConfig{}));
  }
}
BENCHMARK(BM_FindDdScaling)->RangeMultiplier(4)->Range(16, 1024);

void BM_MMatrixSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  TwoNnzFactor f = skewed(n);
  Vec b(n, 1.0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    benchmark::DoNotOptimize(mmatrix_solve(f, b, 1e-6, MMatrixConfig{}, rng));
  }
}
BENCHMARK(BM_MMatrixSolve)->RangeMultiplier(4)->Range(16, 1024);

void BM_SolveAugmented(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng gen(n);
  AugSystem sys = testkit::random_aug_system(n, 2 * n, true, gen);
  Vec b(3 * n, 1.0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    benchmark::DoNotOptimize(solve_augmented(sys, b, 1e-6, MMatrixConfig{}, rng));
  }
}
BENCHMARK(BM_SolveAugmented)->RangeMultiplier(4)->Range(16, 1024);

}  // namespace
}  // namespace lossyflow

BENCHMARK_MAIN();
