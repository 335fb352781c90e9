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

#include "lossyflow/solve.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <cmath>
#include <string>

#include "lossyflow/errors.hpp"

namespace lossyflow {
namespace {

using EigenSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

Eigen::Map<const EigenSparse> eigen_view(const SparseSym& m) {
  return Eigen::Map<const EigenSparse>(m.n(), m.n(), static_cast<int>(m.nnz()),
                                       m.col_ptr().data(), m.row_idx().data(),
                                       m.values().data());
}

// b - M x with long double accumulation.
Vec residual(const SparseSym& m, std::span<const double> x, std::span<const double> b) {
  Vec r(m.n());
  const auto& cp = m.col_ptr();
  const auto& ri = m.row_idx();
  const auto& va = m.values();
  for (int j = 0; j < m.n(); ++j) {
    long double acc = b[j];
    for (int p = cp[j]; p < cp[j + 1]; ++p)
      acc -= static_cast<long double>(va[p]) * x[ri[p]];
    r[j] = static_cast<double>(acc);
  }
  return r;
}

}  // namespace

void SolveConfig::validate() const {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("SolveConfig: eps must lie in (0,1)");
  if (max_iters < 1) throw InvalidInput("SolveConfig: max_iters must be >= 1");
  if (lambda_lo && lambda_hi && !(*lambda_lo > 0.0 && *lambda_lo <= *lambda_hi))
    throw InvalidInput("SolveConfig: need 0 < lambda_lo <= lambda_hi");
}

struct DirectFactorization::Impl {
  SparseSym m;
  Eigen::SimplicialLDLT<EigenSparse, Eigen::Lower> ldlt;
  bool analyzed = false;
};

DirectFactorization::DirectFactorization() : impl_(std::make_unique<Impl>()) {}
DirectFactorization::DirectFactorization(const SparseSym& m) : DirectFactorization() {
  refactor(m);
}
DirectFactorization::~DirectFactorization() = default;
DirectFactorization::DirectFactorization(DirectFactorization&&) noexcept = default;
DirectFactorization& DirectFactorization::operator=(DirectFactorization&&) noexcept = default;

int DirectFactorization::n() const { return impl_->m.n(); }

void DirectFactorization::refactor(const SparseSym& m) {
  bool same_pattern = impl_->analyzed && impl_->m.n() == m.n() &&
                      impl_->m.col_ptr() == m.col_ptr() && impl_->m.row_idx() == m.row_idx();
  impl_->m = m;
  if (m.n() == 0) return;
  auto view = eigen_view(impl_->m);
  if (!same_pattern) {
    impl_->ldlt.analyzePattern(view);
    impl_->analyzed = true;
  }
  impl_->ldlt.factorize(view);
  if (impl_->ldlt.info() != Eigen::Success)
    throw SingularMatrixError("direct factorization failed: matrix is numerically singular");
  const auto& d = impl_->ldlt.vectorD();
  double dmax = d.cwiseAbs().maxCoeff();
  for (int i = 0; i < d.size(); ++i)
    if (!(d[i] > dmax * 1e-300) || !std::isfinite(d[i]))
      throw SingularMatrixError("direct factorization: non-positive pivot " +
                                std::to_string(d[i]) +
                                "; matrix is singular or not positive definite");
}

Vec DirectFactorization::apply_inverse(std::span<const double> b) const {
  if (static_cast<int>(b.size()) != impl_->m.n())
    throw DimensionError("direct solve: size mismatch");
  if (b.empty()) return {};
  Eigen::Map<const Eigen::VectorXd> bv(b.data(), static_cast<Eigen::Index>(b.size()));
  Eigen::VectorXd x = impl_->ldlt.solve(bv);
  return Vec(x.data(), x.data() + x.size());
}

Vec DirectFactorization::solve(std::span<const double> b, int max_refinements) const {
  Vec x = apply_inverse(b);
  double bnorm = norm2(b);
  if (bnorm == 0.0) return Vec(b.size(), 0.0);
  Vec r = residual(impl_->m, x, b);
  double rnorm = norm2(r);
  for (int k = 0; k < max_refinements && rnorm > 1e-15 * bnorm; ++k) {
    Vec dx = apply_inverse(r);
    Vec trial = x;
    for (std::size_t i = 0; i < x.size(); ++i) trial[i] += dx[i];
    Vec rt = residual(impl_->m, trial, b);
    double rtn = norm2(rt);
    if (!(rtn < rnorm)) break;
    x = std::move(trial);
    r = std::move(rt);
    rnorm = rtn;
  }
  return x;
}

Vec solve_direct(const SparseSym& m, std::span<const double> b) {
  if (static_cast<int>(b.size()) != m.n()) throw DimensionError("solve_direct: size mismatch");
  DirectFactorization f(m);
  return f.solve(b);
}

namespace {

Vec solve_pcg(const SparseSym& m, std::span<const double> b, const SolveConfig& cfg,
              SolveStats* stats) {
  const int n = m.n();
  double bnorm = norm2(b);
  Vec x(n, 0.0);
  if (bnorm == 0.0) {
    if (stats) *stats = {0, 0.0};
    return x;
  }
  double target = (cfg.lambda_lo && cfg.lambda_hi)
                      ? cfg.eps * std::sqrt(*cfg.lambda_lo / *cfg.lambda_hi)
                      : cfg.eps * 1e-2;

  Vec inv_diag;
  std::unique_ptr<Eigen::IncompleteCholesky<double, Eigen::Lower, Eigen::AMDOrdering<int>>> ic;
  if (cfg.preconditioner == Preconditioner::incomplete_cholesky) {
    ic = std::make_unique<Eigen::IncompleteCholesky<double, Eigen::Lower, Eigen::AMDOrdering<int>>>();
    EigenSparse copy = eigen_view(m);
    ic->compute(copy);
    if (ic->info() != Eigen::Success)
      throw SingularMatrixError("incomplete Cholesky preconditioner failed");
  } else {
    inv_diag = m.diagonal();
    for (double& d : inv_diag) {
      if (!(d > 0.0)) throw InvalidInput("PCG: non-positive diagonal; matrix is not SPD");
      d = 1.0 / d;
    }
  }
  auto precondition = [&](const Vec& r) {
    if (ic) {
      Eigen::Map<const Eigen::VectorXd> rv(r.data(), n);
      Eigen::VectorXd z = ic->solve(rv);
      return Vec(z.data(), z.data() + n);
    }
    Vec z(n);
    for (int i = 0; i < n; ++i) z[i] = r[i] * inv_diag[i];
    return z;
  };

  Vec r(b.begin(), b.end());
  Vec z = precondition(r);
  Vec p = z;
  double rz = dot(r, z);
  double rnorm = bnorm;
  int it = 0;
  while (rnorm / bnorm > target) {
    if (it >= cfg.max_iters)
      throw ConvergenceError("PCG: iteration cap " + std::to_string(cfg.max_iters) +
                                 " reached at relative residual " +
                                 std::to_string(rnorm / bnorm),
                             x, rnorm / bnorm);
    Vec mp = mat_vec(m, p);
    double pmp = dot(p, mp);
    if (!(pmp > 0.0)) throw InvalidInput("PCG: matrix is not positive definite");
    double alpha = rz / pmp;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * mp[i];
    }
    ++it;
    // Recompute the true residual now and then to avoid drift.
    if (it % 50 == 0) r = residual(m, x, b);
    rnorm = norm2(r);
    z = precondition(r);
    double rz_next = dot(r, z);
    double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  if (stats) *stats = {it, rnorm / bnorm};
  return x;
}

}  // namespace

Vec solve_approx(const SparseSym& m, std::span<const double> b, const SolveConfig& cfg,
                 SolveStats* stats) {
  cfg.validate();
  if (static_cast<int>(b.size()) != m.n()) throw DimensionError("solve_approx: size mismatch");
  if (cfg.backend == Backend::direct) {
    Vec x = solve_direct(m, b);
    if (stats) {
      double bn = norm2(b);
      stats->iterations = 1;
      stats->relative_residual = bn == 0.0 ? 0.0 : norm2(residual(m, x, b)) / bn;
    }
    return x;
  }
  return solve_pcg(m, b, cfg, stats);
}

}  // namespace lossyflow
