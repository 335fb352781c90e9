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

#ifndef LOSSYFLOW_TESTS_ORACLES_HPP_
#define LOSSYFLOW_TESTS_ORACLES_HPP_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lossyflow/genflow.hpp"
#include "lossyflow/mmatrix.hpp"
#include "lossyflow/sparse.hpp"

namespace lossyflow::testkit {

using DenseLd = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VecLd = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

DenseLd to_dense(const SparseSym& m);
DenseLd to_dense(const SparseMatrix& a);
VecLd to_ld(std::span<const double> v);

// M^{-1} b by dense Cholesky in long double.
VecLd dense_solve(const DenseLd& m, const VecLd& b);

// ||x - M^{-1} b||_M / ||M^{-1} b||_M.
double relative_m_error(const DenseLd& m, std::span<const double> b, std::span<const double> x);

// Dense M + v vᵀ of an augmented system.
DenseLd dense_augmented(const AugSystem& sys);

// eta_A(s) via dense Cholesky.
double dense_eta(const SparseMatrix& a, std::span<const double> s);
double dense_eta_augmented(const SparseMatrix& a, std::span<const double> b,
                           std::span<const double> s, double s_gap, int copies);

// Maximizer of sum log(c - Aᵀy) by damped Newton from an interior y0.
Vec analytic_center(const SparseMatrix& a, std::span<const double> c, std::span<const double> y0);

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<long double> x;
  long double objective = 0.0L;
};

// min cᵀx s.t. A x = b, x >= 0. Two-phase tableau simplex with Bland's rule.
LpSolution simplex(const DenseLd& a, const VecLd& b, const VecLd& c);

// Exact generalized max-flow value (net flow into t).
long double lp_max_flow(const FlowNetwork& net);
// Min cost among flows with value exactly `value`.
long double lp_min_cost_at_value(const FlowNetwork& net, long double value);

}  // namespace lossyflow::testkit

#endif  // LOSSYFLOW_TESTS_ORACLES_HPP_
