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

#ifndef LOSSYFLOW_CENTRALITY_HPP_
#define LOSSYFLOW_CENTRALITY_HPP_

#include <span>

#include "lossyflow/sparse.hpp"

namespace lossyflow {

// Centrality measures computed with exact (direct) solves. The path
// following driver never calls these; they certify iterates in tests and
// diagnostics.

// eta_A(s) = ||A S^-1 1||_{(A S^-2 Aᵀ)^-1}.
double eta_exact(const SparseMatrix& a, std::span<const double> s);

// eta of the augmented matrix [A | -b 1ᵀ_copies] at slacks (s, s_gap).
double eta_augmented(const SparseMatrix& a, std::span<const double> b,
                     std::span<const double> s, double s_gap, int copies);

// x_A(s) = S^-1 (I - S^-1 Aᵀ (A S^-2 Aᵀ)^-1 A S^-1) 1.
Vec central_primal(const SparseMatrix& a, std::span<const double> s);

}  // namespace lossyflow

#endif  // LOSSYFLOW_CENTRALITY_HPP_
