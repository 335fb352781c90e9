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

#ifndef LOSSYFLOW_SPARSE_HPP_
#define LOSSYFLOW_SPARSE_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace lossyflow {

using Vec = std::vector<double>;

struct Triplet {
  int row;
  int col;
  double value;
};

// General compressed-column matrix. Row indices sorted within a column,
// duplicates summed, explicit zeros dropped.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), col_ptr_(cols + 1, 0) {}

  static SparseMatrix from_triplets(int rows, int cols,
                                    std::span<const Triplet> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return row_idx_.size(); }
  const std::vector<int>& col_ptr() const { return col_ptr_; }
  const std::vector<int>& row_idx() const { return row_idx_; }
  const std::vector<double>& values() const { return values_; }

  Vec multiply(std::span<const double> x) const;            // A x
  Vec multiply_transpose(std::span<const double> y) const;  // Aᵀ y
  SparseMatrix transpose() const;
  // Rows listed in `keep` (in that order) as a new matrix.
  SparseMatrix select_rows(std::span<const int> keep) const;
  double max_abs() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> col_ptr_{0};
  std::vector<int> row_idx_;
  std::vector<double> values_;
};

// Symmetric matrix with both triangles stored in compressed columns, so
// column j doubles as row j.
class SparseSym {
 public:
  SparseSym() = default;

  // Entries from the lower triangle (row >= col); off-diagonals mirrored.
  static SparseSym from_lower(int n, std::span<const Triplet> entries);
  // Entries for both triangles; throws InvalidInput unless symmetric.
  static SparseSym from_full(int n, std::span<const Triplet> entries);
  static SparseSym identity(int n);
  static SparseSym diagonal(std::span<const double> d);

  int n() const { return n_; }
  std::size_t nnz() const { return row_idx_.size(); }
  const std::vector<int>& col_ptr() const { return col_ptr_; }
  const std::vector<int>& row_idx() const { return row_idx_; }
  const std::vector<double>& values() const { return values_; }

  double at(int i, int j) const;
  Vec diagonal() const;
  double max_diagonal() const;
  // Principal submatrix on `idx` (in that order).
  SparseSym principal(std::span<const int> idx) const;
  // Block M[rows, cols] as a general matrix.
  SparseMatrix block(std::span<const int> rows, std::span<const int> cols) const;

 private:
  friend SparseSym from_csc_unchecked(int, std::vector<int>, std::vector<int>,
                                      std::vector<double>);
  int n_ = 0;
  std::vector<int> col_ptr_{0};
  std::vector<int> row_idx_;
  std::vector<double> values_;
};

// Builds a SparseSym directly from full symmetric CSC arrays. Caller
// guarantees sortedness and symmetry.
SparseSym from_csc_unchecked(int n, std::vector<int> col_ptr,
                             std::vector<int> row_idx, std::vector<double> values);

// n x m matrix with one or two nonzeros per column; M = A Aᵀ.
class TwoNnzFactor {
 public:
  struct Column {
    int count = 0;
    int row[2] = {0, 0};
    double value[2] = {0.0, 0.0};
  };

  TwoNnzFactor() = default;
  TwoNnzFactor(int n, std::vector<Column> cols);
  static TwoNnzFactor from_sparse(const SparseMatrix& a);

  int n() const { return n_; }
  int m() const { return static_cast<int>(cols_.size()); }
  const std::vector<Column>& cols() const { return cols_; }
  SparseMatrix to_sparse() const;

 private:
  int n_ = 0;
  std::vector<Column> cols_;
};

// Positive diagonal matrix.
class DiagMatrix {
 public:
  DiagMatrix() = default;
  explicit DiagMatrix(Vec d);
  static DiagMatrix identity(int n) { return DiagMatrix(Vec(n, 1.0)); }

  int n() const { return static_cast<int>(d_.size()); }
  double operator[](int i) const { return d_[i]; }
  const Vec& values() const { return d_; }

 private:
  Vec d_;
};

Vec mat_vec(const SparseSym& m, std::span<const double> x);

// Precomputed pattern of A diag(w) Aᵀ for repeated assembly with changing
// weights. The pattern is structural, so it survives cancellation.
class GramAssembler {
 public:
  GramAssembler() = default;
  explicit GramAssembler(const SparseMatrix& a);
  SparseSym assemble(std::span<const double> w) const;
  int n() const { return n_; }

 private:
  int n_ = 0;
  int cols_ = 0;
  std::vector<int> col_ptr_;
  std::vector<int> row_idx_;
  // For every column j of A, the (slot, product) contributions.
  std::vector<int> contrib_ptr_;
  std::vector<int> slot_;
  std::vector<double> product_;
};

// A diag(w) Aᵀ.
SparseSym gram(const TwoNnzFactor& f, const DiagMatrix& w);
SparseSym gram(const SparseMatrix& a, std::span<const double> w);

// sqrt(vᵀ M v). Throws InvalidInput if the quadratic form is below -1e-10.
double m_norm(const SparseSym& m, std::span<const double> v);

// M_ii - sum_{j != i} |M_ij| for every row.
Vec dominance_margins(const SparseSym& m);
double dd_tolerance(const SparseSym& m);
bool is_dd(const SparseSym& m);

// D M D.
SparseSym scale(const SparseSym& m, std::span<const double> d);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace lossyflow

#endif  // LOSSYFLOW_SPARSE_HPP_
