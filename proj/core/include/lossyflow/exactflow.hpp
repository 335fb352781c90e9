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

#ifndef LOSSYFLOW_EXACTFLOW_HPP_
#define LOSSYFLOW_EXACTFLOW_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "lossyflow/errors.hpp"
#include "lossyflow/genflow.hpp"
#include "lossyflow/random.hpp"

namespace lossyflow {

using IntFlow = std::vector<std::int64_t>;

// Integer costs q plus k_e / (4 m^2 U^2), held exactly as (q, k).
struct PerturbedNetwork {
  FlowNetwork base;
  std::vector<std::int64_t> k;  // 1..2mU per edge

  std::int64_t denominator() const;  // 4 m^2 U^2
  double cost(int e) const;
  std::vector<double> costs() const;
};

class PrecisionFailure : public Error {
 public:
  using Error::Error;
};

class InfeasibleTarget : public Error {
 public:
  using Error::Error;
};

class RetriesExceeded : public Error {
 public:
  RetriesExceeded(const std::string& what, int attempts) : Error(what), attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

struct ExactFlowConfig {
  ParameterMode mode = ParameterMode::practical;
  std::uint64_t seed = 0;
  int retries = 20;
  FlowBackend backend = FlowBackend::direct;
  IpmConfig ipm;
  IpmObserver observer;
  MMatrixConfig mmatrix;
};

struct IntegerFlowResult {
  IntFlow flow;
  std::int64_t value = 0;
  std::int64_t cost = 0;
  int retries = 0;  // re-perturbations after the first attempt
};

// Requires gamma = 1 on every edge and integer costs.
PerturbedNetwork perturb_costs(const FlowNetwork& net, Rng& rng);

std::int64_t exact_max_flow_value(const FlowNetwork& net, const ExactFlowConfig& cfg = {});

// Min-cost integer flow of value f. Throws InfeasibleTarget if no flow of
// that value exists and RetriesExceeded if rounding never verifies.
IntegerFlowResult exact_min_cost_flow(const FlowNetwork& net, std::int64_t f,
                                      const ExactFlowConfig& cfg = {});

// Combinatorial references (Dinic; successive shortest paths with potentials).
std::int64_t oracle_max_flow_value(const FlowNetwork& net);
IntegerFlowResult oracle_min_cost_flow(const FlowNetwork& net, std::int64_t f);

// Exact checks on an integer flow: capacities, conservation off {s, t}.
bool is_feasible(const FlowNetwork& net, const IntFlow& flow);
std::int64_t flow_value(const FlowNetwork& net, const IntFlow& flow);
std::int64_t flow_cost(const FlowNetwork& net, const IntFlow& flow);

}  // namespace lossyflow

#endif  // LOSSYFLOW_EXACTFLOW_HPP_
