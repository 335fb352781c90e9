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

#ifndef LOSSYFLOW_IPM_HPP_
#define LOSSYFLOW_IPM_HPP_

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lossyflow/errors.hpp"
#include "lossyflow/sparse.hpp"

namespace lossyflow {

// min cᵀx s.t. Ax = b, x >= 0, with dual max bᵀy s.t. Aᵀy <= c.
struct CanonicalLP {
  SparseMatrix a;
  Vec b;
  Vec c;
  double t = 0.0;           // bound on |dual coordinates|
  double lambda_min = 0.0;  // lower eigenvalue bound of A Aᵀ
  Vec y0;                   // strictly interior dual point

  int rows() const { return a.rows(); }
  int cols() const { return a.cols(); }
  void validate() const;
  // Largest absolute entry of A, b and c.
  double max_entry() const;
  double min_initial_slack() const;
};

// Interior dual iterate. `z` is the objective cut bᵀy >= z.
struct DualState {
  Vec y;
  Vec s;
  double s_gap = 0.0;
  double z = 0.0;
};

// Builds a state from y, computing s = c - Aᵀy and s_gap = bᵀy - z.
// Throws InternalInconsistency unless every slack is positive.
DualState make_dual_state(const SparseMatrix& a, std::span<const double> b,
                          std::span<const double> c, Vec y, double z);

// A diag(w) Aᵀ + v vᵀ. An empty v means no rank-one term.
struct NormalSystem {
  const SparseMatrix& a;
  std::span<const double> w;
  std::span<const double> v;
};

struct BackendResult {
  Vec x;
  int iterations = 0;
};

// Approximate solver for NormalSystem: returns x with
// ||x - K^{-1} rhs||_K <= tol ||K^{-1} rhs||_K.
class SystemBackend {
 public:
  virtual ~SystemBackend() = default;
  virtual BackendResult solve(const NormalSystem& sys, std::span<const double> rhs,
                              double tol) = 0;
  virtual std::string name() const = 0;
};

// Dense assembly plus pivoted LDLᵀ. Small systems and test oracles.
class DenseBackend : public SystemBackend {
 public:
  BackendResult solve(const NormalSystem& sys, std::span<const double> rhs, double tol) override;
  std::string name() const override { return "dense"; }
};

// Sparse LDLᵀ of A diag(w) Aᵀ, Sherman-Morrison for v, refinement against
// the full operator. Keeps the symbolic factorization between calls.
class DirectBackend : public SystemBackend {
 public:
  DirectBackend();
  ~DirectBackend() override;
  BackendResult solve(const NormalSystem& sys, std::span<const double> rhs, double tol) override;
  std::string name() const override { return "direct"; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Jacobi-preconditioned CG on the operator, never forming v vᵀ.
class IterativeBackend : public SystemBackend {
 public:
  explicit IterativeBackend(int max_iters = 100000) : max_iters_(max_iters) {}
  BackendResult solve(const NormalSystem& sys, std::span<const double> rhs, double tol) override;
  std::string name() const override { return "iterative"; }

 private:
  int max_iters_;
  SparseMatrix cached_a_;
  bool ready_ = false;
  GramAssembler assembler_;
};

struct IpmConfig {
  double epsilon = 1e-3;
  std::optional<long> max_shift_iters;
  std::optional<long> max_unshift_iters;
  std::optional<double> eps3_override;
  std::optional<double> eps4_override;

  void validate() const;
};

// Objective cut for the augmented matrix [A | -b 1ᵀ_m] with costs
// [c; -z 1_m]: m copies of the gap slack bᵀy - z.
struct GapConstraint {
  std::span<const double> b;
  double z = 0.0;
  int copies = 0;
};

struct NewtonResult {
  Vec y;
  double tolerance = 0.0;
  int backend_iterations = 0;
};

class StepRejected : public Error {
 public:
  using Error::Error;
};

// y + (1 - eps3) d with d = Solve(A S^-2 Aᵀ, -A S^-1 1, eps3). With a gap
// constraint the matrix is the augmented one and eps3 counts its columns.
NewtonResult newton_step(const SparseMatrix& a, std::span<const double> c,
                         std::span<const double> y, SystemBackend& backend,
                         const std::optional<GapConstraint>& gap = std::nullopt,
                         std::optional<double> eps3_override = std::nullopt);

enum class IpmPhase { unshift, shift, extract };

struct IpmEvent {
  IpmPhase phase;
  long iteration;
  const DualState& state;
  // The right-hand side the state's gap refers to (b, or b̂ while unshifting).
  std::span<const double> b;
  double tolerance;
  int backend_iterations;
};

using IpmObserver = std::function<void(const IpmEvent&)>;

struct StepInfo {
  double tolerance = 0.0;
  int backend_iterations = 0;
};

// z+ = z + s_gap/(10 sqrt m), then one Newton step on the augmented matrix.
DualState shift(const CanonicalLP& lp, const DualState& state, SystemBackend& backend,
                const IpmConfig& cfg = {}, StepInfo* info = nullptr);
// ẑ+ = ẑ - ŝ_gap/(10 sqrt m) on the b̂ path.
DualState unshift(const CanonicalLP& lp, std::span<const double> b_hat, const DualState& state,
                  SystemBackend& backend, const IpmConfig& cfg = {}, StepInfo* info = nullptr);

// b̂ = A (S⁰)^{-1} 1.
Vec initial_b_hat(const CanonicalLP& lp);

struct PathStats {
  long unshifts = 0;
  long shifts = 0;
  long solves = 0;
  long backend_iterations = 0;
};

DualState find_central_path(const CanonicalLP& lp, SystemBackend& backend,
                            const IpmConfig& cfg = {}, const IpmObserver& observer = {},
                            PathStats* stats = nullptr);

// Primal point from a terminal state (s_gap <= eps/3).
Vec extract_primal(const CanonicalLP& lp, const DualState& state, SystemBackend& backend,
                   const IpmConfig& cfg = {}, StepInfo* info = nullptr);

struct IpmResult {
  Vec x;
  DualState final_state;
  PathStats stats;
};

struct TraceRecord {
  long iteration;
  double z;
  double s_gap;
  double tolerance;
  int backend_iterations;
};

// Failure inside interior_point; carries the shift trace up to that point.
class IpmFailure : public Error {
 public:
  IpmFailure(const std::string& what, std::vector<TraceRecord> trace, PathStats stats)
      : Error(what), trace_(std::move(trace)), stats_(stats) {}
  const std::vector<TraceRecord>& trace() const { return trace_; }
  const PathStats& stats() const { return stats_; }

 private:
  std::vector<TraceRecord> trace_;
  PathStats stats_;
};

// Default cap: ceil(40 sqrt(m) log(T U m / (lambda_min s0_min eps))).
long default_iteration_cap(const CanonicalLP& lp, double epsilon);

IpmResult interior_point(const CanonicalLP& lp, const IpmConfig& cfg, SystemBackend& backend,
                         const IpmObserver& observer = {});

// One JSON object per shift on `out`.
IpmObserver trace_writer(std::ostream& out);

}  // namespace lossyflow

#endif  // LOSSYFLOW_IPM_HPP_
