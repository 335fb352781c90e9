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

#ifndef LOSSYFLOW_SOLVE_HPP_
#define LOSSYFLOW_SOLVE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>

#include "lossyflow/sparse.hpp"

namespace lossyflow {

enum class Backend { iterative, direct };
enum class Preconditioner { jacobi, incomplete_cholesky };

struct SolveConfig {
  double eps = 1e-6;  // relative error target in the M-norm
  int max_iters = 20000;
  std::uint64_t seed = 0;
  Backend backend = Backend::direct;
  Preconditioner preconditioner = Preconditioner::jacobi;
  // Spectrum bounds for M, used by the iterative stopping rule if given.
  std::optional<double> lambda_lo;
  std::optional<double> lambda_hi;

  void validate() const;
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

// x with ||x - M^{-1} b||_M <= eps ||M^{-1} b||_M. The iterative backend is
// PCG stopped on the relative residual; the direct backend ignores eps.
Vec solve_approx(const SparseSym& m, std::span<const double> b, const SolveConfig& cfg,
                 SolveStats* stats = nullptr);

// Sparse LDLᵀ (fill-reducing ordering) with iterative refinement.
Vec solve_direct(const SparseSym& m, std::span<const double> b);

// Reusable LDLᵀ factorization. refactor() keeps the symbolic analysis when
// the sparsity pattern is unchanged.
class DirectFactorization {
 public:
  DirectFactorization();
  explicit DirectFactorization(const SparseSym& m);
  ~DirectFactorization();
  DirectFactorization(DirectFactorization&&) noexcept;
  DirectFactorization& operator=(DirectFactorization&&) noexcept;

  void refactor(const SparseSym& m);
  // Solve against the factored matrix, refining with residuals of `m`.
  Vec solve(std::span<const double> b, int max_refinements = 4) const;
  // One application of the factorization, no refinement.
  Vec apply_inverse(std::span<const double> b) const;
  int n() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lossyflow

#endif  // LOSSYFLOW_SOLVE_HPP_
