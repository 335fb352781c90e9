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

#ifndef LOSSYFLOW_GENFLOW_HPP_
#define LOSSYFLOW_GENFLOW_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lossyflow/ipm.hpp"
#include "lossyflow/mmatrix.hpp"
#include "lossyflow/sparse.hpp"

namespace lossyflow {

struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

struct Edge {
  int tail = 0;
  int head = 0;
  std::int64_t capacity = 1;
  Rational gamma;
  std::optional<std::int64_t> cost;
  bool operator==(const Edge&) const = default;
};

// Directed lossy network. Vertices are 0..n-1.
struct FlowNetwork {
  int n = 0;
  std::vector<Edge> edges;
  int s = 0;
  int t = 1;
  // Bound on every integer in the instance (capacities, costs, gamma terms).
  std::int64_t u = 1;

  int m() const { return static_cast<int>(edges.size()); }
  bool has_costs() const;
  // Throws InvalidInput on the first violated invariant.
  void validate() const;
  // Smallest bound covering all integers present.
  std::int64_t implied_u() const;
  bool operator==(const FlowNetwork&) const = default;
};

// Per-edge amount entering the edge.
using Flow = Vec;

struct FlowReport {
  double value = 0.0;  // net flow into t, after multipliers
  double cost = 0.0;
  double capacity_violation = 0.0;
  double conservation_violation = 0.0;  // over V \ {s, t}
};

FlowReport report(const FlowNetwork& net, std::span<const double> flow);

enum class FlowBackend { direct, dense, iterative, structured };

struct GenFlowConfig {
  double epsilon = 1e-2;
  ParameterMode mode = ParameterMode::practical;
  std::uint64_t seed = 0;
  FlowBackend backend = FlowBackend::direct;
  // Passed to interior_point (caps, tolerance overrides); epsilon is
  // replaced by the value the driver needs.
  IpmConfig ipm;
  IpmObserver observer;
  // Inner configuration of the structured backend.
  MMatrixConfig mmatrix;
};

// Adds t' and the edge t -> t' when t has out-edges or not exactly one
// in-edge. Original edge ids are preserved; the new edge is last.
FlowNetwork normalize_sink(const FlowNetwork& net);
bool needs_sink_normalization(const FlowNetwork& net);
bool reaches(const FlowNetwork& net, int from, int to);

struct LossyTree {
  std::vector<int> parent_edge;  // -1 for s and unreachable vertices
  std::vector<double> gain;      // max path gain from s; 0 if unreachable
  std::vector<int> depth;        // tree depth; -1 if unreachable
};

// Dijkstra on weights -log gamma.
LossyTree least_lossy_tree(const FlowNetwork& net);

struct PrunedNetwork {
  FlowNetwork net;
  std::vector<int> edge_origin;    // pruned edge -> input edge id
  std::vector<int> vertex_origin;  // pruned vertex -> input vertex id
  bool sink_pruned = false;        // t cut off; max flow is 0
};

// Drops vertices with gain < eps/(2 m n U), vertices that cannot reach t,
// edges into s and self-loops.
PrunedNetwork prune(const FlowNetwork& net, double epsilon);

double epsilon_flow(const FlowNetwork& net, double epsilon, ParameterMode mode);

// A flow LP plus its block layout. Columns [x1 | x2 | x3 | x4 | x5]
// (flow, unused capacity, overflow, vertex surplus, vertex deficit); rows
// [vertex rows | capacity rows].
struct FlowLP {
  CanonicalLP lp;
  bool min_cost = false;
  int edges = 0;
  int vertex_rows = 0;
  std::vector<int> vertex_row;  // vertex id -> row, or -1
  SparseMatrix flow_block;      // vertex_rows x edges
  double eps_flow = 0.0;
  double penalty = 0.0;
  int sink_edge = -1;

  std::span<const double> x1(std::span<const double> x) const { return x.subspan(0, edges); }
  // Largest entry among x3, x4, x5.
  double max_penalty_variable(std::span<const double> x) const;
};

FlowLP build_maxflow_lp(const FlowNetwork& net, double eps_flow);
// `costs` overrides the network costs when non-empty (perturbed costs).
FlowLP build_mincost_lp(const FlowNetwork& net, double f, double eps_flow,
                        std::span<const double> costs = {});

// Routes the IPM systems of a flow LP through solve_augmented.
std::unique_ptr<SystemBackend> structured_backend(const FlowLP& lp, const MMatrixConfig& cfg,
                                                  std::uint64_t seed);
// Direct solves that eliminate the capacity rows in closed form and factor
// the vertex block in long double.
std::unique_ptr<SystemBackend> flow_direct_backend(const FlowLP& lp);
std::unique_ptr<SystemBackend> make_backend(FlowBackend kind, const FlowLP& lp,
                                            const GenFlowConfig& cfg);

class RepairRejected : public Error {
 public:
  RepairRejected(const std::string& what, FlowReport rep) : Error(what), report_(rep) {}
  const FlowReport& report() const { return report_; }

 private:
  FlowReport report_;
};

// Turns an eps_flow-approximate flow on a normalized, pruned network into
// an exact one: deficits pushed up the least-lossy tree, excesses pushed
// toward t, then scaled by (1 + eps/(4U))^{-1}.
Flow repair_flow(const FlowNetwork& net, std::span<const double> flow, double epsilon,
                 double eps_flow);

struct FlowRunStats {
  PathStats ipm;
  double ipm_value = 0.0;  // flow into t before repair
  double eps_flow = 0.0;
  int pruned_vertices = 0;
  int pruned_edges = 0;
};

struct MaxFlowResult {
  Flow flow;  // indexed by the input network's edges
  double value = 0.0;
  FlowReport report;
  FlowRunStats stats;
};

struct MinCostResult {
  Flow flow;
  double value = 0.0;
  double cost = 0.0;
  double target = 0.0;  // F from the max-flow phase
  FlowReport report;
  FlowRunStats maxflow_stats;
  FlowRunStats stats;
};

MaxFlowResult max_flow(const FlowNetwork& net, const GenFlowConfig& cfg);
MinCostResult min_cost_flow(const FlowNetwork& net, const GenFlowConfig& cfg);

}  // namespace lossyflow

#endif  // LOSSYFLOW_GENFLOW_HPP_
