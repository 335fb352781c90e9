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

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "lossyflow/errors.hpp"
#include "lossyflow/matrix_market.hpp"
#include "lossyflow/solve.hpp"
#include "lossyflow/sparse.hpp"
#include "oracles.hpp"

namespace lossyflow {
namespace {

SparseSym path2() {
  std::vector<Triplet> t{{0, 0, 2.0}, {1, 1, 2.0}, {1, 0, -1.0}};
  return SparseSym::from_lower(2, t);
}

TEST(MatVec, Identity) {
  Vec x{3.0, 4.0};
  EXPECT_EQ(mat_vec(SparseSym::identity(2), x), x);
}

TEST(MatVec, RowSums) {
  Vec y = mat_vec(path2(), Vec{1.0, 1.0});
  EXPECT_DOUBLE_EQ(y[0], 1.0);
  EXPECT_DOUBLE_EQ(y[1], 1.0);
}

TEST(MatVec, MatchesDenseMultiply) {
  Rng rng(11);
  SparseSym m = testkit::random_sdd(50, rng);
  Vec x(50);
  for (double& v : x) v = rng.normal();
  Vec y = mat_vec(m, x);
  testkit::VecLd want = testkit::to_dense(m) * testkit::to_ld(x);
  for (int i = 0; i < 50; ++i) EXPECT_NEAR(y[i], static_cast<double>(want[i]), 1e-12 * (1 + std::abs(y[i])));
}

TEST(Gram, DirectExpansion) {
  std::vector<Triplet> t{{0, 0, 1.0}, {0, 1, 1.0}, {1, 1, -1.0}, {1, 2, 1.0}};
  SparseMatrix a = SparseMatrix::from_triplets(2, 3, t);
  SparseSym g = gram(TwoNnzFactor::from_sparse(a), DiagMatrix::identity(3));
  EXPECT_DOUBLE_EQ(g.at(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(g.at(1, 1), 2.0);
  EXPECT_DOUBLE_EQ(g.at(0, 1), -1.0);
  EXPECT_DOUBLE_EQ(g.at(1, 0), -1.0);
}

TEST(Gram, IdentityWeightsMatchUnitWeights) {
  Rng rng(3);
  TwoNnzFactor f = testkit::random_mmatrix_factor(30, 40, 10, rng);
  SparseSym a = gram(f, DiagMatrix::identity(f.m()));
  SparseSym b = gram(f.to_sparse(), Vec(f.m(), 1.0));
  EXPECT_EQ(a.col_ptr(), b.col_ptr());
  EXPECT_EQ(a.row_idx(), b.row_idx());
  for (std::size_t i = 0; i < a.nnz(); ++i) EXPECT_DOUBLE_EQ(a.values()[i], b.values()[i]);
}

TEST(Gram, MatchesDenseProduct) {
  Rng rng(5);
  TwoNnzFactor f = testkit::random_mmatrix_factor(40, 60, 20, rng);
  Vec w = testkit::log_uniform(f.m(), 3.0, rng);
  SparseSym g = gram(f, DiagMatrix(w));
  testkit::DenseLd a = testkit::to_dense(f.to_sparse());
  testkit::DenseLd want = a * testkit::to_ld(w).asDiagonal() * a.transpose();
  testkit::DenseLd got = testkit::to_dense(g);
  EXPECT_LE(static_cast<double>((got - want).cwiseAbs().maxCoeff()),
            1e-12 * static_cast<double>(want.cwiseAbs().maxCoeff()));
}

TEST(MNorm, Identity) { EXPECT_DOUBLE_EQ(m_norm(SparseSym::identity(2), Vec{3.0, 4.0}), 5.0); }

TEST(MNorm, Path) { EXPECT_DOUBLE_EQ(m_norm(path2(), Vec{1.0, 1.0}), std::sqrt(2.0)); }

TEST(MNorm, MatchesDense) {
  Rng rng(8);
  SparseSym m = testkit::random_sdd(60, rng);
  Vec v(60);
  for (double& x : v) x = rng.normal();
  testkit::VecLd lv = testkit::to_ld(v);
  double want = std::sqrt(static_cast<double>(lv.dot(testkit::to_dense(m) * lv)));
  EXPECT_NEAR(m_norm(m, v), want, 1e-12 * want);
}

TEST(IsDd, Examples) {
  EXPECT_TRUE(is_dd(path2()));
  std::vector<Triplet> t{{0, 0, 2.0}, {1, 1, 200.0}, {1, 0, -10.0}};
  SparseSym m = SparseSym::from_lower(2, t);
  EXPECT_FALSE(is_dd(m));
  Vec d{std::sqrt(10.0), 1.0 / std::sqrt(10.0)};
  SparseSym dmd = scale(m, d);
  EXPECT_NEAR(dmd.at(0, 0), 20.0, 1e-12);
  EXPECT_NEAR(dmd.at(1, 1), 20.0, 1e-12);
  EXPECT_NEAR(dmd.at(0, 1), -10.0, 1e-12);
  EXPECT_TRUE(is_dd(dmd));
}

TEST(SolveApprox, Path) {
  for (Backend be : {Backend::direct, Backend::iterative}) {
    SolveConfig cfg;
    cfg.eps = 1e-8;
    cfg.backend = be;
    Vec x = solve_approx(path2(), Vec{1.0, 1.0}, cfg);
    EXPECT_NEAR(x[0], 1.0, 1e-7);
    EXPECT_NEAR(x[1], 1.0, 1e-7);
  }
}

TEST(SolveApprox, IdentityReturnsRhs) {
  Vec b{1.5, -2.0, 7.0};
  SolveConfig cfg;
  cfg.backend = Backend::iterative;
  Vec x = solve_approx(SparseSym::identity(3), b, cfg);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(x[i], b[i], 1e-12);
}

TEST(SolveApprox, ContractAgainstDirect) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    int n = static_cast<int>(rng.uniform_int(2, 200));
    SparseSym m = testkit::random_sdd(n, rng);
    Vec b(n);
    for (double& v : b) v = rng.normal();
    Vec exact = solve_direct(m, b);
    for (double eps : {1e-2, 1e-6}) {
      SolveConfig cfg;
      cfg.eps = eps;
      cfg.backend = Backend::iterative;
      Vec x = solve_approx(m, b, cfg);
      Vec diff(n);
      for (int i = 0; i < n; ++i) diff[i] = x[i] - exact[i];
      EXPECT_LE(m_norm(m, diff), eps * m_norm(m, exact) + 1e-10);
    }
  }
}

TEST(SolveApprox, IncompleteCholeskyPreconditioner) {
  Rng rng(4);
  SparseSym m = testkit::random_sdd(120, rng);
  Vec b(120, 1.0);
  SolveConfig cfg;
  cfg.eps = 1e-6;
  cfg.backend = Backend::iterative;
  cfg.preconditioner = Preconditioner::incomplete_cholesky;
  Vec x = solve_approx(m, b, cfg);
  Vec exact = solve_direct(m, b);
  Vec diff(120);
  for (int i = 0; i < 120; ++i) diff[i] = x[i] - exact[i];
  EXPECT_LE(m_norm(m, diff), 1e-6 * m_norm(m, exact));
}

TEST(SolveDirect, Examples) {
  Vec b{4.0, -1.0};
  EXPECT_EQ(solve_direct(SparseSym::identity(2), b), b);
  Vec x = solve_direct(path2(), Vec{1.0, 1.0});
  EXPECT_NEAR(x[0], 1.0, 1e-14);
  EXPECT_NEAR(x[1], 1.0, 1e-14);
}

TEST(SolveDirect, ResidualRoundTrip) {
  Rng rng(17);
  SparseSym m = testkit::random_sdd(150, rng);
  Vec b(150);
  for (double& v : b) v = rng.normal();
  Vec r = mat_vec(m, solve_direct(m, b));
  for (int i = 0; i < 150; ++i) r[i] -= b[i];
  EXPECT_LE(norm2(r), 1e-12 * norm2(b));
}

TEST(DirectFactorization, RefactorKeepsPattern) {
  Rng rng(2);
  TwoNnzFactor f = testkit::random_mmatrix_factor(25, 30, 5, rng);
  DirectFactorization fac(gram(f, DiagMatrix::identity(f.m())));
  SparseSym m2 = gram(f, DiagMatrix(testkit::log_uniform(f.m(), 2.0, rng)));
  fac.refactor(m2);
  Vec b(25, 1.0);
  Vec r = mat_vec(m2, fac.solve(b));
  for (int i = 0; i < 25; ++i) r[i] -= b[i];
  EXPECT_LE(norm2(r), 1e-10 * norm2(b));
}

TEST(MatrixMarket, RoundTrip) {
  Rng rng(9);
  SparseSym m = testkit::random_sdd(20, rng);
  std::stringstream ss;
  write_matrix_market_sym(ss, m);
  SparseSym back = read_matrix_market_sym(ss);
  EXPECT_EQ(back.col_ptr(), m.col_ptr());
  EXPECT_EQ(back.row_idx(), m.row_idx());
  EXPECT_EQ(back.values(), m.values());

  Vec v{1.0, -0.25, 3e-17};
  std::stringstream vs;
  write_matrix_market_vector(vs, v);
  EXPECT_EQ(read_matrix_market_vector(vs), v);
}

TEST(SparseSym, RejectsAsymmetricInput) {
  std::vector<Triplet> t{{0, 0, 1.0}, {1, 1, 1.0}, {1, 0, -1.0}};
  EXPECT_THROW(SparseSym::from_full(2, t), InvalidInput);
}

}  // namespace
}  // namespace lossyflow
