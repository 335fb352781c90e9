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

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

#include "lossyflow/mmatrix.hpp"

namespace lossyflow {
namespace {

// Solves against one fixed matrix many times; factors once when the
// backend is direct.
class InnerSolver {
 public:
  InnerSolver(const SparseSym& k, const SolveConfig& base) : k_(k), base_(base) {
    if (base_.backend == Backend::direct && k_.n() > 0) factor_.refactor(k_);
  }

  Vec solve(std::span<const double> b, double eps) const {
    if (k_.n() == 0) return {};
    if (base_.backend == Backend::direct) return factor_.solve(b);
    SolveConfig cfg = base_;
    cfg.eps = std::clamp(eps, 1e-14, 0.5);
    return solve_approx(k_, b, cfg);
  }

 private:
  const SparseSym& k_;
  SolveConfig base_;
  DirectFactorization factor_;
};

Vec row_scaled(std::span<const double> d, const Vec& x) {
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = d[i] * x[i];
  return y;
}

SparseMatrix scale_rows(const SparseMatrix& a, std::span<const double> d) {
  std::vector<Triplet> t;
  t.reserve(a.nnz());
  for (int j = 0; j < a.cols(); ++j)
    for (int p = a.col_ptr()[j]; p < a.col_ptr()[j + 1]; ++p)
      t.push_back({a.row_idx()[p], j, a.values()[p] * d[a.row_idx()[p]]});
  return SparseMatrix::from_triplets(a.rows(), a.cols(), t);
}

std::vector<int> dominated_rows(const SparseSym& dmd) {
  Vec g = dominance_margins(dmd);
  double tol = dd_tolerance(dmd);
  std::vector<int> rows;
  for (int i = 0; i < dmd.n(); ++i)
    if (g[i] >= -tol) rows.push_back(i);
  return rows;
}

std::vector<int> complement(const std::vector<int>& sorted, int n) {
  std::vector<int> out;
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    if (k < sorted.size() && sorted[k] == i) ++k;
    else out.push_back(i);
  }
  return out;
}

}  // namespace

MMatrixParams resolve(const MMatrixConfig& cfg, int n, int m) {
  if (!(cfg.lambda_min > 0.0 && cfg.lambda_min <= cfg.lambda_max))
    throw InvalidInput("MMatrixConfig: need 0 < lambda_min <= lambda_max");
  double kappa = cfg.lambda_max / cfg.lambda_min;
  double nd = std::max(1, n), md = std::max(1, m);
  MMatrixParams p;
  p.delta = std::sqrt(cfg.lambda_min) / (24.0 * std::sqrt(kappa) * nd);
  if (cfg.mode == ParameterMode::paper_exact) {
    p.k = static_cast<int>(k_jl(0.01, 0.2, 0.01, 1.0 / 3.0));
    p.eps1 = 0.005 / std::sqrt(1.01 * kappa * md * nd);
    p.eps2 = 1.0 / (72.0 * std::pow(kappa, 2.5) * nd * nd);
  } else {
    p.k = 32;
    p.eps1 = 1e-8;
    p.eps2 = 1e-8;
  }
  if (cfg.k) p.k = *cfg.k;
  if (cfg.delta) p.delta = *cfg.delta;
  if (cfg.eps1) p.eps1 = *cfg.eps1;
  if (cfg.eps2) p.eps2 = *cfg.eps2;
  if (p.k < 1 || !(p.delta > 0.0) || !(p.eps1 > 0.0) || !(p.eps2 > 0.0))
    throw InvalidInput("MMatrixConfig: k, delta, eps1, eps2 must be positive");
  return p;
}

void estimate_spectrum(const TwoNnzFactor& f, double& lambda_min, double& lambda_max) {
  SparseSym m = gram(f, DiagMatrix::identity(f.m()));
  int n = m.n();
  lambda_max = 0.0;
  for (int j = 0; j < n; ++j) {
    double row = 0.0;
    for (int p = m.col_ptr()[j]; p < m.col_ptr()[j + 1]; ++p) row += std::abs(m.values()[p]);
    lambda_max = std::max(lambda_max, row);
  }
  DirectFactorization fac(m);
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = 1.0 + 0.1 * ((i * 7919) % 13);
  double rq = lambda_max;
  for (int it = 0; it < 30; ++it) {
    double nx = norm2(x);
    for (double& v : x) v /= nx;
    Vec y = fac.apply_inverse(x);
    double xy = dot(x, y);
    if (xy > 0.0) rq = std::min(rq, 1.0 / xy);
    x = std::move(y);
  }
  lambda_min = 0.5 * rq;
}

ScalingState initial_scaling_state(const TwoNnzFactor& f) {
  SparseSym m = gram(f, DiagMatrix::identity(f.m()));
  ScalingState s{DiagMatrix::identity(f.n()), dominated_rows(m), {}, 0};
  s.permutation = s.dominated;
  auto rest = complement(s.dominated, f.n());
  s.permutation.insert(s.permutation.end(), rest.begin(), rest.end());
  return s;
}

DiagMatrix estimate_schur_diagonals(const SparseMatrix& a1, const SparseMatrix& a2,
                                    std::span<const double> d1, int k, Rng& rng,
                                    double eps1, const SolveConfig& solver) {
  if (a1.cols() != a2.cols()) throw DimensionError("estimate_schur_diagonals: column mismatch");
  if (static_cast<int>(d1.size()) != a1.rows())
    throw DimensionError("estimate_schur_diagonals: D1 length mismatch");
  if (k < 1) throw InvalidInput("estimate_schur_diagonals: k must be >= 1");
  const int m = a1.cols();
  SparseMatrix b = scale_rows(a1, d1);  // D1 A1
  SparseSym kmat = gram(b, Vec(m, 1.0));
  InnerSolver inner(kmat, solver);
  Vec sigma(a2.rows(), 0.0);
  Vec r(m);
  for (int i = 0; i < k; ++i) {
    for (double& x : r) x = rng.normal();
    Vec p = r;
    if (b.rows() > 0) {
      Vec q = inner.solve(b.multiply(r), eps1);
      Vec bq = b.multiply_transpose(q);
      for (int j = 0; j < m; ++j) p[j] -= bq[j];
    }
    Vec pa = a2.multiply(p);
    for (std::size_t j = 0; j < pa.size(); ++j) sigma[j] += pa[j] * pa[j];
  }
  for (double s : sigma)
    if (!(s > 0.0) || !std::isfinite(s))
      throw InternalInconsistency("estimate_schur_diagonals: non-positive estimate");
  return DiagMatrix(std::move(sigma));
}

ScalingState scaling_iteration(const TwoNnzFactor& f, const ScalingState& state,
                               const MMatrixConfig& cfg, Rng& rng,
                               const SolveConfig& solver) {
  const int n = f.n();
  if (state.d.n() != n) throw DimensionError("scaling_iteration: D length mismatch");
  MMatrixParams prm = resolve(cfg, n, f.m());
  SparseSym m = gram(f, DiagMatrix::identity(f.m()));
  SparseMatrix a = f.to_sparse();
  const std::vector<int>& top = state.dominated;
  std::vector<int> bottom = complement(top, n);

  Vec d1(top.size());
  for (std::size_t i = 0; i < top.size(); ++i) d1[i] = state.d[top[i]];

  Vec d_new(n);
  Vec d2(bottom.size());
  if (!bottom.empty()) {
    DiagMatrix sigma = estimate_schur_diagonals(a.select_rows(top), a.select_rows(bottom), d1,
                                                prm.k, rng, prm.eps1, solver);
    for (std::size_t i = 0; i < bottom.size(); ++i) {
      d2[i] = rng.uniform() / std::sqrt(sigma[static_cast<int>(i)]);
      d_new[bottom[i]] = d2[i];
    }
  }
  if (!top.empty()) {
    // D1' = D1 * solve(D1 M11 D1, D1 (-M12 D2' 1 + delta 1)).
    SparseSym k = scale(m.principal(top), d1);
    Vec coupling = bottom.empty() ? Vec(top.size(), 0.0) : m.block(top, bottom).multiply(d2);
    Vec rhs(top.size());
    for (std::size_t i = 0; i < top.size(); ++i) rhs[i] = d1[i] * (prm.delta - coupling[i]);
    InnerSolver inner(k, solver);
    Vec w = inner.solve(rhs, prm.eps2);
    for (std::size_t i = 0; i < top.size(); ++i) {
      double v = d1[i] * w[i];
      if (!(v > 0.0) || !std::isfinite(v))
        throw InternalInconsistency(
            "scaling_iteration: non-positive entry in D1'; inner tolerance or eigenvalue "
            "bounds are too loose");
      d_new[top[i]] = v;
    }
  }

  ScalingState next{DiagMatrix(std::move(d_new)), {}, {}, state.iteration + 1};
  std::vector<int> now = dominated_rows(scale(m, next.d.values()));
  std::set_union(top.begin(), top.end(), now.begin(), now.end(),
                 std::back_inserter(next.dominated));
  next.permutation = next.dominated;
  auto rest = complement(next.dominated, n);
  next.permutation.insert(next.permutation.end(), rest.begin(), rest.end());
  return next;
}

ScalingResult find_dd_scaling_detailed(const TwoNnzFactor& f, const MMatrixConfig& cfg,
                                       Rng& rng, const SolveConfig& solver) {
  const int n = f.n();
  SparseSym m = gram(f, DiagMatrix::identity(f.m()));
  ScalingResult res{DiagMatrix::identity(n), 0, {}};
  auto fraction = [&](const SparseSym& dmd) {
    return n == 0 ? 1.0 : static_cast<double>(dominated_rows(dmd).size()) / n;
  };
  res.dominated_fraction.push_back(fraction(m));
  if (is_dd(m)) return res;
  ScalingState state = initial_scaling_state(f);
  double best = res.dominated_fraction.back();
  for (;;) {
    if (state.iteration >= cfg.max_outer_iters)
      throw ScalingFailure("find_dd_scaling: no diagonally dominant scaling after " +
                               std::to_string(cfg.max_outer_iters) +
                               " iterations; best dominated fraction " + std::to_string(best),
                           best);
    state = scaling_iteration(f, state, cfg, rng, solver);
    SparseSym dmd = scale(m, state.d.values());
    double frac = fraction(dmd);
    best = std::max(best, frac);
    res.dominated_fraction.push_back(frac);
    if (is_dd(dmd)) {
      res.d = state.d;
      res.iterations = state.iteration;
      return res;
    }
  }
}

DiagMatrix find_dd_scaling(const TwoNnzFactor& f, const MMatrixConfig& cfg, Rng& rng,
                           const SolveConfig& solver) {
  return find_dd_scaling_detailed(f, cfg, rng, solver).d;
}

Vec mmatrix_solve_scaled(const TwoNnzFactor& f, const DiagMatrix& d,
                         std::span<const double> b, double eps, const SolveConfig& inner) {
  if (static_cast<int>(b.size()) != f.n()) throw DimensionError("mmatrix_solve: size mismatch");
  if (d.n() != f.n()) throw DimensionError("mmatrix_solve: scaling length mismatch");
  SparseSym dmd = scale(gram(f, DiagMatrix::identity(f.m())), d.values());
  SolveConfig cfg = inner;
  cfg.eps = eps;
  Vec db(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) db[i] = d[static_cast<int>(i)] * b[i];
  return row_scaled(d.values(), solve_approx(dmd, db, cfg));
}

Vec mmatrix_solve(const TwoNnzFactor& f, std::span<const double> b, double eps,
                  const MMatrixConfig& cfg, Rng& rng) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("mmatrix_solve: eps must lie in (0,1)");
  if (static_cast<int>(b.size()) != f.n()) throw DimensionError("mmatrix_solve: size mismatch");
  const int n = f.n();
  if (n == 0) return {};
  if (std::all_of(b.begin(), b.end(), [](double x) { return x == 0.0; })) return Vec(n, 0.0);
  if (n == 1) {
    double m11 = 0.0;
    for (const auto& c : f.cols()) m11 += c.value[0] * c.value[0];
    return {b[0] / m11};
  }
  MMatrixConfig local = cfg;
  if (!(local.lambda_min > 0.0)) estimate_spectrum(f, local.lambda_min, local.lambda_max);
  DiagMatrix d = find_dd_scaling(f, local, rng, local.inner);
  return mmatrix_solve_scaled(f, d, b, eps, local.inner);
}

RandomScalingOutcome random_scaling_trial(const SparseSym& m, double r, double zeta,
                                          Rng& rng) {
  if (!(r >= 0.0 && r <= 0.25)) throw InvalidInput("random_scaling_trial: r must lie in [0,1/4]");
  if (!(zeta > 0.0 && zeta <= 1.0)) throw InvalidInput("random_scaling_trial: zeta must lie in (0,1]");
  const int n = m.n();
  RandomScalingOutcome out;
  if (n == 0) return out;
  Vec diag = m.diagonal();
  double avg = 0.0;
  for (double v : diag) avg += v;
  avg /= n;
  int below = 0;
  for (double v : diag)
    if (v < zeta * avg) ++below;
  out.beta = static_cast<double>(below) / n;
  out.bound = (0.125 - r / 2.0) * (1.0 - out.beta - 2.0 / (3.0 * zeta));

  Vec d(n);
  for (double& x : d) x = rng.uniform();
  Vec md = mat_vec(m, d);
  int hits = 0;
  for (int i = 0; i < n; ++i)
    if (md[i] >= r * diag[i]) ++hits;
  out.fraction = static_cast<double>(hits) / n;
  return out;
}

}  // namespace lossyflow
