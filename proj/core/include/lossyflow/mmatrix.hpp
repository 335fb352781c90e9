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

#ifndef LOSSYFLOW_MMATRIX_HPP_
#define LOSSYFLOW_MMATRIX_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lossyflow/errors.hpp"
#include "lossyflow/random.hpp"
#include "lossyflow/solve.hpp"
#include "lossyflow/sparse.hpp"

namespace lossyflow {

enum class ParameterMode { paper_exact, practical };

// Smallest k >= 5 for which the projection bound
//   1 - 2/(2+(k-4)(1-2/k)^2(gamma-2/(k-2))^2) - 2/(beta(2+(alpha/(1-alpha))^2 k))
// reaches p. Throws InvalidInput past 2^31.
std::int64_t k_jl(double alpha, double beta, double gamma, double p);
double k_jl_bound(std::int64_t k, double alpha, double beta, double gamma);

struct MMatrixConfig {
  double lambda_min = 0.0;  // spectrum bounds for M = A Aᵀ
  double lambda_max = 0.0;
  // Unset fields are derived from `mode` by resolve().
  std::optional<int> k;
  std::optional<double> delta;
  std::optional<double> eps1;
  std::optional<double> eps2;
  int max_outer_iters = 500;
  ParameterMode mode = ParameterMode::practical;
  // Backend for the inner solves on D1 M11 D1 and on DMD; eps is per call.
  SolveConfig inner;
};

// Fully determined parameters for an n x m factor.
struct MMatrixParams {
  int k = 0;
  double delta = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
};
MMatrixParams resolve(const MMatrixConfig& cfg, int n, int m);

// Spectrum bounds of A Aᵀ: Gershgorin above, inverse iteration with a
// safety factor below. For callers that do not know them.
void estimate_spectrum(const TwoNnzFactor& f, double& lambda_min, double& lambda_max);

struct ScalingState {
  DiagMatrix d;
  // Rows kept in the top block. Never shrinks; a superset of the rows
  // that are currently dominated in DMD.
  std::vector<int> dominated;
  // Top block first, then the rest.
  std::vector<int> permutation;
  int iteration = 0;
};

// Initial state: D = I and the rows of M that are already dominated.
ScalingState initial_scaling_state(const TwoNnzFactor& f);

// sigma_i = ||(R - Q D1 A1) a_i^T||^2 for every row a_i of A2.
DiagMatrix estimate_schur_diagonals(const SparseMatrix& a1, const SparseMatrix& a2,
                                    std::span<const double> d1, int k, Rng& rng,
                                    double eps1, const SolveConfig& solver);

ScalingState scaling_iteration(const TwoNnzFactor& f, const ScalingState& state,
                               const MMatrixConfig& cfg, Rng& rng,
                               const SolveConfig& solver);

class ScalingFailure : public Error {
 public:
  ScalingFailure(const std::string& what, double best_fraction)
      : Error(what), best_fraction_(best_fraction) {}
  double best_fraction() const { return best_fraction_; }

 private:
  double best_fraction_;
};

struct ScalingResult {
  DiagMatrix d;
  int iterations = 0;
  // Fraction of dominated rows after each iteration (entry 0: before any).
  std::vector<double> dominated_fraction;
};

ScalingResult find_dd_scaling_detailed(const TwoNnzFactor& f, const MMatrixConfig& cfg,
                                       Rng& rng, const SolveConfig& solver);
DiagMatrix find_dd_scaling(const TwoNnzFactor& f, const MMatrixConfig& cfg, Rng& rng,
                           const SolveConfig& solver);

// x with ||x - M^{-1} b||_M <= eps ||M^{-1} b||_M, M = A Aᵀ.
Vec mmatrix_solve(const TwoNnzFactor& f, std::span<const double> b, double eps,
                  const MMatrixConfig& cfg, Rng& rng);
// Final step only, for a scaling found earlier.
Vec mmatrix_solve_scaled(const TwoNnzFactor& f, const DiagMatrix& d,
                         std::span<const double> b, double eps, const SolveConfig& inner);

struct RandomScalingOutcome {
  double fraction = 0.0;  // |T| / n
  double beta = 0.0;      // share of diagonals below zeta * average
  double bound = 0.0;     // (1/8 - r/2)(1 - beta - 2/(3 zeta))
};

// One draw of D with uniform (0,1) diagonal; T = {i : (M D 1)_i >= r m_ii}.
RandomScalingOutcome random_scaling_trial(const SparseSym& m, double r, double zeta,
                                          Rng& rng);

// M = [[A D1² Aᵀ + D2², A D1²], [D1² Aᵀ, D1² + D3²]] plus v vᵀ, where
// A is n x m with an M-matrix gram.
struct AugSystem {
  SparseMatrix a;
  DiagMatrix d1;  // length m
  DiagMatrix d2;  // length n
  DiagMatrix d3;  // length m
  Vec v;          // length n + m; empty or all zero for no update

  int n() const { return a.rows(); }
  int m() const { return a.cols(); }
  void validate() const;
  // M without the rank-one term.
  SparseSym assemble() const;
};

void dump(std::ostream& out, const AugSystem& sys);

struct AugmentedStats {
  int mmatrix_solves = 0;
  int scaling_iterations = 0;
};

Vec solve_augmented(const AugSystem& sys, std::span<const double> b, double eps,
                    const MMatrixConfig& cfg, Rng& rng, AugmentedStats* stats = nullptr);

}  // namespace lossyflow

#endif  // LOSSYFLOW_MMATRIX_HPP_
