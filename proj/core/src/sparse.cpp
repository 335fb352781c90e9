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

#include "lossyflow/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lossyflow/errors.hpp"

namespace lossyflow {
namespace {

// Sorts by (col, row), sums duplicates, drops zeros.
void compress(int cols, std::vector<Triplet>& t, std::vector<int>& col_ptr,
              std::vector<int>& row_idx, std::vector<double>& values) {
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  col_ptr.assign(cols + 1, 0);
  row_idx.clear();
  values.clear();
  std::size_t k = 0;
  while (k < t.size()) {
    int r = t[k].row, c = t[k].col;
    double v = 0.0;
    while (k < t.size() && t[k].row == r && t[k].col == c) v += t[k++].value;
    if (v == 0.0) continue;
    row_idx.push_back(r);
    values.push_back(v);
    ++col_ptr[c + 1];
  }
  std::partial_sum(col_ptr.begin(), col_ptr.end(), col_ptr.begin());
}

void check_index(int i, int bound, const char* what) {
  if (i < 0 || i >= bound)
    throw DimensionError(std::string(what) + " index " + std::to_string(i) +
                         " out of range [0," + std::to_string(bound) + ")");
}

}  // namespace

SparseMatrix SparseMatrix::from_triplets(int rows, int cols,
                                         std::span<const Triplet> entries) {
  std::vector<Triplet> t(entries.begin(), entries.end());
  for (const auto& e : t) {
    check_index(e.row, rows, "row");
    check_index(e.col, cols, "column");
    if (!std::isfinite(e.value)) throw InvalidInput("non-finite matrix entry");
  }
  SparseMatrix a;
  a.rows_ = rows;
  a.cols_ = cols;
  compress(cols, t, a.col_ptr_, a.row_idx_, a.values_);
  return a;
}

Vec SparseMatrix::multiply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != cols_) throw DimensionError("multiply: size mismatch");
  Vec y(rows_, 0.0);
  for (int j = 0; j < cols_; ++j) {
    double xj = x[j];
    if (xj == 0.0) continue;
    for (int p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) y[row_idx_[p]] += values_[p] * xj;
  }
  return y;
}

Vec SparseMatrix::multiply_transpose(std::span<const double> y) const {
  if (static_cast<int>(y.size()) != rows_)
    throw DimensionError("multiply_transpose: size mismatch");
  Vec x(cols_, 0.0);
  for (int j = 0; j < cols_; ++j) {
    double acc = 0.0;
    for (int p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) acc += values_[p] * y[row_idx_[p]];
    x[j] = acc;
  }
  return x;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (int j = 0; j < cols_; ++j)
    for (int p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p)
      t.push_back({j, row_idx_[p], values_[p]});
  return from_triplets(cols_, rows_, t);
}

SparseMatrix SparseMatrix::select_rows(std::span<const int> keep) const {
  std::vector<int> pos(rows_, -1);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    check_index(keep[i], rows_, "row");
    pos[keep[i]] = static_cast<int>(i);
  }
  std::vector<Triplet> t;
  for (int j = 0; j < cols_; ++j)
    for (int p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p)
      if (pos[row_idx_[p]] >= 0) t.push_back({pos[row_idx_[p]], j, values_[p]});
  return from_triplets(static_cast<int>(keep.size()), cols_, t);
}

double SparseMatrix::max_abs() const {
  double u = 0.0;
  for (double v : values_) u = std::max(u, std::abs(v));
  return u;
}

SparseSym from_csc_unchecked(int n, std::vector<int> col_ptr,
                             std::vector<int> row_idx, std::vector<double> values) {
  SparseSym m;
  m.n_ = n;
  m.col_ptr_ = std::move(col_ptr);
  m.row_idx_ = std::move(row_idx);
  m.values_ = std::move(values);
  return m;
}

SparseSym SparseSym::from_lower(int n, std::span<const Triplet> entries) {
  std::vector<Triplet> t;
  t.reserve(2 * entries.size());
  for (const auto& e : entries) {
    check_index(e.row, n, "row");
    check_index(e.col, n, "column");
    if (e.row < e.col) throw InvalidInput("from_lower: entry above the diagonal");
    if (!std::isfinite(e.value)) throw InvalidInput("non-finite matrix entry");
    t.push_back(e);
    if (e.row != e.col) t.push_back({e.col, e.row, e.value});
  }
  std::vector<int> cp, ri;
  std::vector<double> va;
  compress(n, t, cp, ri, va);
  return from_csc_unchecked(n, std::move(cp), std::move(ri), std::move(va));
}

SparseSym SparseSym::from_full(int n, std::span<const Triplet> entries) {
  std::vector<Triplet> t(entries.begin(), entries.end());
  for (const auto& e : t) {
    check_index(e.row, n, "row");
    check_index(e.col, n, "column");
    if (!std::isfinite(e.value)) throw InvalidInput("non-finite matrix entry");
  }
  std::vector<int> cp, ri;
  std::vector<double> va;
  compress(n, t, cp, ri, va);
  SparseSym m = from_csc_unchecked(n, std::move(cp), std::move(ri), std::move(va));
  for (int j = 0; j < n; ++j)
    for (int p = m.col_ptr_[j]; p < m.col_ptr_[j + 1]; ++p)
      if (m.at(j, m.row_idx_[p]) != m.values_[p])
        throw InvalidInput("from_full: matrix is not symmetric at (" +
                           std::to_string(m.row_idx_[p]) + "," + std::to_string(j) + ")");
  return m;
}

SparseSym SparseSym::identity(int n) { return diagonal(Vec(n, 1.0)); }

SparseSym SparseSym::diagonal(std::span<const double> d) {
  int n = static_cast<int>(d.size());
  std::vector<int> cp(n + 1), ri;
  std::vector<double> va;
  for (int i = 0; i < n; ++i) {
    if (d[i] != 0.0) {
      ri.push_back(i);
      va.push_back(d[i]);
    }
    cp[i + 1] = static_cast<int>(ri.size());
  }
  return from_csc_unchecked(n, std::move(cp), std::move(ri), std::move(va));
}

double SparseSym::at(int i, int j) const {
  check_index(i, n_, "row");
  check_index(j, n_, "column");
  auto first = row_idx_.begin() + col_ptr_[j];
  auto last = row_idx_.begin() + col_ptr_[j + 1];
  auto it = std::lower_bound(first, last, i);
  if (it == last || *it != i) return 0.0;
  return values_[it - row_idx_.begin()];
}

Vec SparseSym::diagonal() const {
  Vec d(n_, 0.0);
  for (int j = 0; j < n_; ++j) d[j] = at(j, j);
  return d;
}

double SparseSym::max_diagonal() const {
  double u = 0.0;
  for (double v : diagonal()) u = std::max(u, v);
  return u;
}

SparseSym SparseSym::principal(std::span<const int> idx) const {
  std::vector<int> pos(n_, -1);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    check_index(idx[i], n_, "index");
    pos[idx[i]] = static_cast<int>(i);
  }
  std::vector<Triplet> t;
  for (std::size_t jj = 0; jj < idx.size(); ++jj) {
    int j = idx[jj];
    for (int p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p)
      if (pos[row_idx_[p]] >= 0) t.push_back({pos[row_idx_[p]], static_cast<int>(jj), values_[p]});
  }
  int k = static_cast<int>(idx.size());
  std::vector<int> cp, ri;
  std::vector<double> va;
  compress(k, t, cp, ri, va);
  return from_csc_unchecked(k, std::move(cp), std::move(ri), std::move(va));
}

SparseMatrix SparseSym::block(std::span<const int> rows, std::span<const int> cols) const {
  std::vector<int> pos(n_, -1);
  for (std::size_t i = 0; i < rows.size(); ++i) pos[rows[i]] = static_cast<int>(i);
  std::vector<Triplet> t;
  for (std::size_t jj = 0; jj < cols.size(); ++jj) {
    int j = cols[jj];
    for (int p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p)
      if (pos[row_idx_[p]] >= 0) t.push_back({pos[row_idx_[p]], static_cast<int>(jj), values_[p]});
  }
  return SparseMatrix::from_triplets(static_cast<int>(rows.size()),
                                     static_cast<int>(cols.size()), t);
}

TwoNnzFactor::TwoNnzFactor(int n, std::vector<Column> cols) : n_(n), cols_(std::move(cols)) {
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    const Column& c = cols_[j];
    if (c.count < 1 || c.count > 2)
      throw InvalidInput("TwoNnzFactor: column " + std::to_string(j) +
                         " must have one or two nonzeros");
    for (int k = 0; k < c.count; ++k) {
      check_index(c.row[k], n, "row");
      if (!std::isfinite(c.value[k]) || c.value[k] == 0.0)
        throw InvalidInput("TwoNnzFactor: zero or non-finite value in column " +
                           std::to_string(j));
    }
    if (c.count == 2 && c.row[0] == c.row[1])
      throw InvalidInput("TwoNnzFactor: repeated row in column " + std::to_string(j));
  }
}

TwoNnzFactor TwoNnzFactor::from_sparse(const SparseMatrix& a) {
  std::vector<Column> cols(a.cols());
  for (int j = 0; j < a.cols(); ++j) {
    int len = a.col_ptr()[j + 1] - a.col_ptr()[j];
    if (len > 2)
      throw InvalidInput("TwoNnzFactor: column " + std::to_string(j) +
                         " has more than two nonzeros");
    cols[j].count = len;
    for (int k = 0; k < len; ++k) {
      cols[j].row[k] = a.row_idx()[a.col_ptr()[j] + k];
      cols[j].value[k] = a.values()[a.col_ptr()[j] + k];
    }
  }
  return TwoNnzFactor(a.rows(), std::move(cols));
}

SparseMatrix TwoNnzFactor::to_sparse() const {
  std::vector<Triplet> t;
  for (int j = 0; j < m(); ++j)
    for (int k = 0; k < cols_[j].count; ++k) t.push_back({cols_[j].row[k], j, cols_[j].value[k]});
  return SparseMatrix::from_triplets(n_, m(), t);
}

DiagMatrix::DiagMatrix(Vec d) : d_(std::move(d)) {
  for (double v : d_)
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidInput("DiagMatrix: entries must be positive and finite");
}

Vec mat_vec(const SparseSym& m, std::span<const double> x) {
  if (static_cast<int>(x.size()) != m.n()) throw DimensionError("mat_vec: size mismatch");
  Vec y(m.n(), 0.0);
  const auto& cp = m.col_ptr();
  const auto& ri = m.row_idx();
  const auto& va = m.values();
  // Column j of a symmetric matrix is row j: y_j = <col j, x>.
  for (int j = 0; j < m.n(); ++j) {
    double acc = 0.0;
    for (int p = cp[j]; p < cp[j + 1]; ++p) acc += va[p] * x[ri[p]];
    y[j] = acc;
  }
  return y;
}

SparseSym gram(const TwoNnzFactor& f, const DiagMatrix& w) {
  if (w.n() != f.m()) throw DimensionError("gram: weight length must equal column count");
  std::vector<Triplet> t;
  t.reserve(3 * f.m());
  for (int j = 0; j < f.m(); ++j) {
    const auto& c = f.cols()[j];
    for (int a = 0; a < c.count; ++a)
      for (int b = 0; b <= a; ++b) {
        int r = c.row[a], s = c.row[b];
        double v = c.value[a] * c.value[b] * w[j];
        if (r >= s) t.push_back({r, s, v});
        else t.push_back({s, r, v});
      }
  }
  return SparseSym::from_lower(f.n(), t);
}

SparseSym gram(const SparseMatrix& a, std::span<const double> w) {
  if (static_cast<int>(w.size()) != a.cols())
    throw DimensionError("gram: weight length must equal column count");
  std::vector<Triplet> t;
  const auto& cp = a.col_ptr();
  const auto& ri = a.row_idx();
  const auto& va = a.values();
  for (int j = 0; j < a.cols(); ++j)
    for (int p = cp[j]; p < cp[j + 1]; ++p)
      for (int q = cp[j]; q <= p; ++q)  // rows sorted: ri[p] >= ri[q]
        t.push_back({ri[p], ri[q], va[p] * va[q] * w[j]});
  return SparseSym::from_lower(a.rows(), t);
}

GramAssembler::GramAssembler(const SparseMatrix& a) : n_(a.rows()), cols_(a.cols()) {
  const auto& cp = a.col_ptr();
  const auto& ri = a.row_idx();
  const auto& va = a.values();
  std::vector<Triplet> t;
  for (int j = 0; j < a.cols(); ++j)
    for (int p = cp[j]; p < cp[j + 1]; ++p)
      for (int q = cp[j]; q <= p; ++q) t.push_back({ri[p], ri[q], 1.0});
  SparseSym pattern = SparseSym::from_lower(n_, t);
  col_ptr_ = pattern.col_ptr();
  row_idx_ = pattern.row_idx();
  auto find = [&](int r, int c) {
    auto first = row_idx_.begin() + col_ptr_[c];
    auto last = row_idx_.begin() + col_ptr_[c + 1];
    return static_cast<int>(std::lower_bound(first, last, r) - row_idx_.begin());
  };
  contrib_ptr_.assign(1, 0);
  for (int j = 0; j < a.cols(); ++j) {
    for (int p = cp[j]; p < cp[j + 1]; ++p)
      for (int q = cp[j]; q <= p; ++q) {
        double prod = va[p] * va[q];
        slot_.push_back(find(ri[p], ri[q]));
        product_.push_back(prod);
        if (p != q) {
          slot_.push_back(find(ri[q], ri[p]));
          product_.push_back(prod);
        }
      }
    contrib_ptr_.push_back(static_cast<int>(slot_.size()));
  }
}

SparseSym GramAssembler::assemble(std::span<const double> w) const {
  if (static_cast<int>(w.size()) != cols_) throw DimensionError("GramAssembler: weight length mismatch");
  std::vector<double> values(row_idx_.size(), 0.0);
  for (int j = 0; j < cols_; ++j)
    for (int k = contrib_ptr_[j]; k < contrib_ptr_[j + 1]; ++k) values[slot_[k]] += product_[k] * w[j];
  return from_csc_unchecked(n_, col_ptr_, row_idx_, std::move(values));
}

double m_norm(const SparseSym& m, std::span<const double> v) {
  Vec mv = mat_vec(m, v);
  long double q = 0.0L;
  for (std::size_t i = 0; i < v.size(); ++i) q += static_cast<long double>(v[i]) * mv[i];
  if (q < -1e-10L) throw InvalidInput("m_norm: negative quadratic form; matrix is not PSD");
  return q <= 0.0L ? 0.0 : static_cast<double>(std::sqrt(q));
}

Vec dominance_margins(const SparseSym& m) {
  Vec margin(m.n(), 0.0);
  const auto& cp = m.col_ptr();
  const auto& ri = m.row_idx();
  const auto& va = m.values();
  for (int j = 0; j < m.n(); ++j) {
    double diag = 0.0, off = 0.0;
    for (int p = cp[j]; p < cp[j + 1]; ++p) {
      if (ri[p] == j) diag += va[p];
      else off += std::abs(va[p]);
    }
    margin[j] = diag - off;
  }
  return margin;
}

double dd_tolerance(const SparseSym& m) { return 1e-9 * m.max_diagonal(); }

bool is_dd(const SparseSym& m) {
  double tol = dd_tolerance(m);
  for (double g : dominance_margins(m))
    if (g < -tol) return false;
  return true;
}

SparseSym scale(const SparseSym& m, std::span<const double> d) {
  if (static_cast<int>(d.size()) != m.n()) throw DimensionError("scale: size mismatch");
  std::vector<double> va = m.values();
  const auto& cp = m.col_ptr();
  const auto& ri = m.row_idx();
  for (int j = 0; j < m.n(); ++j)
    for (int p = cp[j]; p < cp[j + 1]; ++p) va[p] *= d[ri[p]] * d[j];
  return from_csc_unchecked(m.n(), cp, ri, std::move(va));
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace lossyflow
