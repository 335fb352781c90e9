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

#ifndef LOSSYFLOW_MATRIX_MARKET_HPP_
#define LOSSYFLOW_MATRIX_MARKET_HPP_

#include <iosfwd>

#include "lossyflow/sparse.hpp"

namespace lossyflow {

// Matrix Market coordinate files. Symmetric matrices are stored as their
// lower triangle ("coordinate real symmetric"). Indices are 1-based on disk.
SparseSym read_matrix_market_sym(std::istream& in);
void write_matrix_market_sym(std::ostream& out, const SparseSym& m);

// "coordinate real general"; used for factor matrices.
SparseMatrix read_matrix_market_general(std::istream& in);
void write_matrix_market_general(std::ostream& out, const SparseMatrix& a);

// "array real general" with a single column.
Vec read_matrix_market_vector(std::istream& in);
void write_matrix_market_vector(std::ostream& out, std::span<const double> v);

}  // namespace lossyflow

#endif  // LOSSYFLOW_MATRIX_MARKET_HPP_
