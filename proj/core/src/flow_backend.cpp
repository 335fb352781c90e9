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

#include <Eigen/OrderingMethods>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "lossyflow/errors.hpp"
#include "lossyflow/genflow.hpp"

namespace lossyflow {
namespace {

using Ld = long double;
using VecLd = Eigen::Matrix<Ld, Eigen::Dynamic, 1>;

// LDLᵀ for symmetric matrices with nonpositive off-diagonals, with each
// row's excess e_i = a_ii - sum_j |a_ij| supplied exactly by the caller.
// Pivots are formed as (sum of off-diagonal magnitudes) + excess and the
// excesses are updated in closed form, so tiny margins next to large
// entries survive elimination. This is the Grassmann-Taksar-Heyman variant
// of Gaussian elimination.
class ExcessLdl {
 public:
  // Pattern of the strictly lower part, as (row, col) pairs with row != col.
  void analyze(int n, const std::vector<std::pair<int, int>>& pattern) {
    n_ = n;
    Eigen::SparseMatrix<double> s(n, n);
    std::vector<Eigen::Triplet<double>> t;
    for (auto [i, j] : pattern) {
      t.emplace_back(i, j, 1.0);
      t.emplace_back(j, i, 1.0);
    }
    for (int i = 0; i < n; ++i) t.emplace_back(i, i, 1.0);
    s.setFromTriplets(t.begin(), t.end());
    Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm;
    Eigen::AMDOrdering<int> amd;
    amd(s, perm);
    // perm maps new -> old in Eigen's convention for orderings.
    order_.assign(perm.indices().data(), perm.indices().data() + n);
    rank_.assign(n, 0);
    for (int k = 0; k < n; ++k) rank_[order_[k]] = k;
    // Symbolic elimination in the permuted numbering.
    std::vector<std::set<int>> below(n);
    for (auto [i, j] : pattern) {
      int a = rank_[i], b = rank_[j];
      if (a == b) continue;
      below[std::min(a, b)].insert(std::max(a, b));
    }
    for (int k = 0; k < n; ++k) {
      if (below[k].empty()) continue;
      int parent = *below[k].begin();
      for (int r : below[k])
        if (r != parent) below[parent].insert(r);
    }
    col_ptr_.assign(n + 1, 0);
    rows_.clear();
    for (int k = 0; k < n; ++k) {
      rows_.insert(rows_.end(), below[k].begin(), below[k].end());
      col_ptr_[k + 1] = static_cast<int>(rows_.size());
    }
    // For every pair (i < j) under pivot k, the slot of entry (j, i).
    pair_ptr_.assign(n + 1, 0);
    pair_slot_.clear();
    for (int k = 0; k < n; ++k) {
      for (int p = col_ptr_[k]; p < col_ptr_[k + 1]; ++p)
        for (int q = p + 1; q < col_ptr_[k + 1]; ++q)
          pair_slot_.push_back(slot(rows_[q], rows_[p]));
      pair_ptr_[k + 1] = static_cast<int>(pair_slot_.size());
    }
    val_.assign(rows_.size(), 0.0L);
  }

  // Clears values before a new factorization.
  void reset() { std::fill(val_.begin(), val_.end(), 0.0L); }
  // Adds to the off-diagonal entry (i, j), original numbering.
  void add_off(int i, int j, Ld v) {
    int a = rank_[i], b = rank_[j];
    val_[slot(std::max(a, b), std::min(a, b))] += v;
  }

  // Factors given the excess of every row (original numbering).
  void factor(const std::vector<Ld>& excess) {
    e_.resize(n_);
    for (int i = 0; i < n_; ++i) e_[rank_[i]] = excess[i];
    d_.assign(n_, 0.0L);
    for (int k = 0; k < n_; ++k) {
      Ld off = 0.0L;
      for (int p = col_ptr_[k]; p < col_ptr_[k + 1]; ++p) off += std::abs(val_[p]);
      const Ld dk = off + e_[k];
      if (!(dk > 0.0L)) throw SingularMatrixError("flow direct backend: non-positive pivot");
      d_[k] = dk;
      const int p0 = col_ptr_[k], len = col_ptr_[k + 1] - p0;
      int pair = pair_ptr_[k];
      for (int a = 0; a < len; ++a) {
        const Ld aik = val_[p0 + a];
        e_[rows_[p0 + a]] += std::abs(aik) * e_[k] / dk;
        for (int b = a + 1; b < len; ++b) val_[pair_slot_[pair++]] -= aik * val_[p0 + b] / dk;
      }
      for (int p = p0; p < p0 + len; ++p) val_[p] /= dk;
    }
  }

  VecLd solve(const VecLd& b) const {
    VecLd x(n_);
    for (int i = 0; i < n_; ++i) x(rank_[i]) = b(i);
    for (int k = 0; k < n_; ++k)
      for (int p = col_ptr_[k]; p < col_ptr_[k + 1]; ++p) x(rows_[p]) -= val_[p] * x(k);
    for (int k = 0; k < n_; ++k) x(k) /= d_[k];
    for (int k = n_ - 1; k >= 0; --k)
      for (int p = col_ptr_[k]; p < col_ptr_[k + 1]; ++p) x(k) -= val_[p] * x(rows_[p]);
    VecLd out(n_);
    for (int i = 0; i < n_; ++i) out(i) = x(rank_[i]);
    return out;
  }

 private:
  int slot(int row, int col) const {
    auto first = rows_.begin() + col_ptr_[col], last = rows_.begin() + col_ptr_[col + 1];
    auto it = std::lower_bound(first, last, row);
    return static_cast<int>(it - rows_.begin());
  }

  int n_ = 0;
  std::vector<int> order_, rank_;
  std::vector<int> col_ptr_, rows_;
  std::vector<int> pair_ptr_, pair_slot_;
  std::vector<Ld> val_, e_, d_;
};

// Direct solver for flow-LP normal systems. The capacity rows are
// eliminated in closed form: edge j contributes w1 (w2+w3) / (w1+w2+w3) to
// the vertex block. The vertex block is an M-matrix whose row excesses are
// known edge by edge; it is factored with ExcessLdl in long double.
class FlowDirectBackend : public SystemBackend {
 public:
  explicit FlowDirectBackend(const FlowLP& lp)
      : edges_(lp.edges), nv_(lp.vertex_rows), rows_(lp.lp.rows()), cols_(lp.lp.cols()) {
    const SparseMatrix& f = lp.flow_block;
    col_ptr_ = f.col_ptr();
    std::vector<std::pair<int, int>> pattern;
    for (int j = 0; j < f.cols(); ++j) {
      for (int p = f.col_ptr()[j]; p < f.col_ptr()[j + 1]; ++p)
        entries_.push_back({f.row_idx()[p], j, f.values()[p]});
      if (f.col_ptr()[j + 1] - f.col_ptr()[j] == 2)
        pattern.emplace_back(f.row_idx()[f.col_ptr()[j]], f.row_idx()[f.col_ptr()[j] + 1]);
    }
    ldl_.analyze(nv_, pattern);
  }

  BackendResult solve(const NormalSystem& sys, std::span<const double> rhs, double) override {
    if (sys.a.rows() != rows_ || sys.a.cols() != cols_ ||
        static_cast<int>(sys.w.size()) != cols_ || static_cast<int>(rhs.size()) != rows_)
      throw DimensionError("flow direct backend: system does not come from this flow LP");
    const int m = edges_;
    w_.resize(cols_);
    for (int j = 0; j < cols_; ++j) w_[j] = sys.w[j];
    w123_.resize(m);
    h_.resize(m);
    for (int j = 0; j < m; ++j) {
      Ld w1 = w_[j], w23 = w_[m + j] + w_[2 * m + j];
      w123_[j] = w1 + w23;
      h_[j] = w1 * w23 / w123_[j];
    }
    factor_vertex_block();

    VecLd b(rows_);
    for (int i = 0; i < rows_; ++i) b(i) = rhs[i];
    const bool rank_one = std::any_of(sys.v.begin(), sys.v.end(), [](double x) { return x != 0.0; });
    VecLd v;
    VecLd kv;
    Ld denom = 1.0L;
    if (rank_one) {
      v.resize(rows_);
      for (int i = 0; i < rows_; ++i) v(i) = sys.v[i];
      kv = apply_k0_inverse(v);
      denom = 1.0L + v.dot(kv);
    }
    auto apply_inverse = [&](const VecLd& r) {
      VecLd x = apply_k0_inverse(r);
      if (rank_one) x -= (v.dot(x) / denom) * kv;
      return x;
    };
    VecLd x = apply_inverse(b);
    int solves = 1;
    Ld prev = residual_norm(b - apply_k(x, v, rank_one));
    for (int round = 0; round < 3 && prev > 0.0L; ++round) {
      VecLd r = b - apply_k(x, v, rank_one);
      VecLd cand = x + apply_inverse(r);
      ++solves;
      Ld now = residual_norm(b - apply_k(cand, v, rank_one));
      if (!(now < prev)) break;
      x = cand;
      prev = now;
    }
    Vec out(rows_);
    for (int i = 0; i < rows_; ++i) out[i] = static_cast<double>(x(i));
    return {std::move(out), solves};
  }

  std::string name() const override { return "direct"; }

 private:
  void factor_vertex_block() {
    const int m = edges_, nv = nv_;
    ldl_.reset();
    std::vector<Ld> excess(nv);
    for (int i = 0; i < nv; ++i) excess[i] = w_[3 * m + i] + w_[3 * m + nv + i];
    for (int j = 0; j < m; ++j) {
      const int p = col_ptr_[j], len = col_ptr_[j + 1] - p;
      if (len == 1) {
        const Ld c = entries_[p].value;
        excess[entries_[p].row] += h_[j] * c * c;
      } else if (len == 2) {
        const Ld a = entries_[p].value, b = entries_[p + 1].value;
        const Ld fa = std::abs(a), fb = std::abs(b);
        ldl_.add_off(entries_[p].row, entries_[p + 1].row, h_[j] * a * b);
        // Row margins h a (a - b) and h b (b - a) in magnitudes; exact zero
        // when |a| = |b|.
        excess[entries_[p].row] += h_[j] * fa * (fa - fb);
        excess[entries_[p + 1].row] += h_[j] * fb * (fb - fa);
      }
    }
    ldl_.factor(excess);
  }

  // F x_edges for the flow block.
  VecLd block_times(const VecLd& xe) const {
    VecLd out = VecLd::Zero(nv_);
    for (int j = 0; j < edges_; ++j)
      for (int p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p)
        out(entries_[p].row) += static_cast<Ld>(entries_[p].value) * xe(j);
    return out;
  }
  VecLd block_transpose_times(const VecLd& xv) const {
    VecLd out = VecLd::Zero(edges_);
    for (int j = 0; j < edges_; ++j)
      for (int p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p)
        out(j) += static_cast<Ld>(entries_[p].value) * xv(entries_[p].row);
    return out;
  }

  VecLd apply_k0_inverse(const VecLd& r) const {
    const int m = edges_, nv = nv_;
    VecLd rc = r.tail(m);
    VecLd scaled(m);
    for (int j = 0; j < m; ++j) scaled(j) = w_[j] * rc(j) / w123_[j];
    VecLd rv = r.head(nv) - block_times(scaled);
    VecLd dv = ldl_.solve(rv);
    VecLd ft = block_transpose_times(dv);
    VecLd out(rows_);
    out.head(nv) = dv;
    for (int j = 0; j < m; ++j) out(nv + j) = (rc(j) - w_[j] * ft(j)) / w123_[j];
    return out;
  }

  // (A W Aᵀ + v vᵀ) x from the block layout.
  VecLd apply_k(const VecLd& x, const VecLd& v, bool rank_one) const {
    const int m = edges_, nv = nv_;
    VecLd xv = x.head(nv), xc = x.tail(m);
    VecLd u1 = block_transpose_times(xv) + xc;
    VecLd wu1(m);
    for (int j = 0; j < m; ++j) wu1(j) = w_[j] * u1(j);
    VecLd out(rows_);
    out.head(nv) = block_times(wu1);
    for (int i = 0; i < nv; ++i) out(i) += (w_[3 * m + i] + w_[3 * m + nv + i]) * xv(i);
    for (int j = 0; j < m; ++j) out(nv + j) = wu1(j) + (w_[m + j] + w_[2 * m + j]) * xc(j);
    if (rank_one) out += v.dot(x) * v;
    return out;
  }

  static Ld residual_norm(const VecLd& r) { return r.cwiseAbs().maxCoeff(); }

  int edges_, nv_, rows_, cols_;
  std::vector<Triplet> entries_;
  std::vector<int> col_ptr_;
  std::vector<Ld> w_, w123_, h_;
  ExcessLdl ldl_;
};

}  // namespace

std::unique_ptr<SystemBackend> flow_direct_backend(const FlowLP& lp) {
  return std::make_unique<FlowDirectBackend>(lp);
}

}  // namespace lossyflow
