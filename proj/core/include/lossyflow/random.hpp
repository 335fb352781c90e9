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

#ifndef LOSSYFLOW_RANDOM_HPP_
#define LOSSYFLOW_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace lossyflow {

// Seeded generator handle. Every randomized routine takes one of these
// explicitly; split() derives an independent child stream so callers can
// hand out generators without sharing state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  Rng split();

  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  // Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  std::uint64_t next_u64() { return engine_(); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// SplitMix64 finalizer; used for seed derivation.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace lossyflow

#endif  // LOSSYFLOW_RANDOM_HPP_
