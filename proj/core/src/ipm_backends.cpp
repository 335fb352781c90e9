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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "lossyflow/ipm.hpp"
#include "lossyflow/solve.hpp"

namespace lossyflow {
namespace {

bool has_rank_one(std::span<const double> v) {
  return std::any_of(v.begin(), v.end(), [](double x) { return x != 0.0; });
}

void check_dims(const NormalSystem& sys, std::span<const double> rhs) {
  if (static_cast<int>(sys.w.size()) != sys.a.cols())
    throw DimensionError("backend: weight length must equal column count");
  if (static_cast<int>(rhs.size()) != sys.a.rows() ||
      (!sys.v.empty() && static_cast<int>(sys.v.size()) != sys.a.rows()))
    throw DimensionError("backend: right-hand side / rank-one length mismatch");
}

bool same_matrix(const SparseMatrix& x, const SparseMatrix& y) {
  return x.rows() == y.rows() && x.cols() == y.cols() && x.col_ptr() == y.col_ptr() &&
         x.row_idx() == y.row_idx() && x.values() == y.values();
}

// rhs - (K + v vᵀ) x, long double accumulation.
Vec operator_residual(const SparseSym& k, std::span<const double> v, std::span<const double> x,
                      std::span<const double> rhs) {
  const int n = k.n();
  long double vx = 0.0L;
  for (std::size_t i = 0; i < v.size(); ++i) vx += static_cast<long double>(v[i]) * x[i];
  Vec r(n);
  for (int j = 0; j < n; ++j) {
    long double acc = rhs[j];
    for (int p = k.col_ptr()[j]; p < k.col_ptr()[j + 1]; ++p)
      acc -= static_cast<long double>(k.values()[p]) * x[k.row_idx()[p]];
    if (!v.empty()) acc -= v[j] * vx;
    r[j] = static_cast<double>(acc);
  }
  return r;
}

}  // namespace

BackendResult DenseBackend::solve(const NormalSystem& sys, std::span<const double> rhs, double) {
  check_dims(sys, rhs);
  const int n = sys.a.rows();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  const auto& cp = sys.a.col_ptr();
  const auto& ri = sys.a.row_idx();
  const auto& va = sys.a.values();
  for (int j = 0; j < sys.a.cols(); ++j)
    for (int p = cp[j]; p < cp[j + 1]; ++p)
      for (int q = cp[j]; q < cp[j + 1]; ++q) k(ri[p], ri[q]) += va[p] * va[q] * sys.w[j];
  if (!sys.v.empty()) {
    Eigen::Map<const Eigen::VectorXd> v(sys.v.data(), n);
    k += v * v.transpose();
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(k);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw SingularMatrixError("dense backend: matrix is singular or indefinite");
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), n);
  Eigen::VectorXd x = ldlt.solve(b);
  for (int it = 0; it < 2; ++it) {
    Eigen::VectorXd r = b - k * x;
    x += ldlt.solve(r);
  }
  return {Vec(x.data(), x.data() + n), 1};
}

struct DirectBackend::Impl {
  SparseMatrix a;
  bool ready = false;
  GramAssembler assembler;
  DirectFactorization factor;
};

DirectBackend::DirectBackend() : impl_(std::make_unique<Impl>()) {}
DirectBackend::~DirectBackend() = default;

BackendResult DirectBackend::solve(const NormalSystem& sys, std::span<const double> rhs, double) {
  check_dims(sys, rhs);
  Impl& im = *impl_;
  if (!im.ready || !same_matrix(im.a, sys.a)) {
    im.a = sys.a;
    im.assembler = GramAssembler(sys.a);
    im.ready = true;
  }
  SparseSym k = im.assembler.assemble(sys.w);
  im.factor.refactor(k);
  auto apply = [&](std::span<const double> r) { return im.factor.solve(r, 2); };

  Vec x = apply(rhs);
  if (!has_rank_one(sys.v)) return {std::move(x), 1};

  Vec z = apply(sys.v);
  double denom = 1.0 + dot(sys.v, z);
  auto sherman_morrison = [&](Vec y) {
    double coef = dot(sys.v, y) / denom;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= z[i] * coef;
    return y;
  };
  x = sherman_morrison(std::move(x));
  double bnorm = norm2(rhs);
  Vec r = operator_residual(k, sys.v, x, rhs);
  double rnorm = norm2(r);
  int solves = 2;
  for (int it = 0; it < 4 && rnorm > 1e-15 * bnorm; ++it) {
    Vec dx = sherman_morrison(apply(r));
    ++solves;
    Vec trial = x;
    for (std::size_t i = 0; i < x.size(); ++i) trial[i] += dx[i];
    Vec rt = operator_residual(k, sys.v, trial, rhs);
    double rtn = norm2(rt);
    if (!(rtn < rnorm)) break;
    x = std::move(trial);
    r = std::move(rt);
    rnorm = rtn;
  }
  return {std::move(x), solves};
}

BackendResult IterativeBackend::solve(const NormalSystem& sys, std::span<const double> rhs,
                                      double tol) {
  check_dims(sys, rhs);
  if (!ready_ || !same_matrix(cached_a_, sys.a)) {
    assembler_ = GramAssembler(sys.a);
    cached_a_ = sys.a;
    ready_ = true;
  }
  SparseSym k = assembler_.assemble(sys.w);
  const int n = k.n();
  bool rank_one = has_rank_one(sys.v);
  auto apply = [&](const Vec& p) {
    Vec y = mat_vec(k, p);
    if (rank_one) {
      double vp = dot(sys.v, p);
      for (int i = 0; i < n; ++i) y[i] += sys.v[i] * vp;
    }
    return y;
  };
  Vec inv_diag = k.diagonal();
  for (int i = 0; i < n; ++i) {
    if (rank_one) inv_diag[i] += sys.v[i] * sys.v[i];
    inv_diag[i] = 1.0 / inv_diag[i];
  }
  double bnorm = norm2(rhs);
  Vec x(n, 0.0);
  if (bnorm == 0.0) return {x, 0};
  double target = std::clamp(tol, 1e-14, 0.5) * 1e-2;
  Vec r(rhs.begin(), rhs.end());
  Vec zv(n);
  for (int i = 0; i < n; ++i) zv[i] = r[i] * inv_diag[i];
  Vec p = zv;
  double rz = dot(r, zv);
  int it = 0;
  double rnorm = bnorm;
  while (rnorm / bnorm > target) {
    if (it >= max_iters_)
      throw ConvergenceError("iterative backend: cap reached at relative residual " +
                                 std::to_string(rnorm / bnorm),
                             x, rnorm / bnorm);
    Vec kp = apply(p);
    double alpha = rz / dot(p, kp);
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * kp[i];
    }
    ++it;
    if (it % 50 == 0) {
      Vec kx = apply(x);
      for (int i = 0; i < n; ++i) r[i] = rhs[i] - kx[i];
    }
    rnorm = norm2(r);
    for (int i = 0; i < n; ++i) zv[i] = r[i] * inv_diag[i];
    double rz_next = dot(r, zv);
    double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i) p[i] = zv[i] + beta * p[i];
  }
  return {std::move(x), it};
}

}  // namespace lossyflow
