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

#include "lossyflow/errors.hpp"
#include "lossyflow/genflow.hpp"

namespace lossyflow {
namespace {

class StructuredBackend : public SystemBackend {
 public:
  StructuredBackend(const FlowLP& lp, const MMatrixConfig& cfg, std::uint64_t seed)
      : block_(lp.flow_block), edges_(lp.edges), vertex_rows_(lp.vertex_rows),
        rows_(lp.lp.rows()), cols_(lp.lp.cols()), cfg_(cfg), rng_(seed) {}

  BackendResult solve(const NormalSystem& sys, std::span<const double> rhs, double tol) override {
    if (sys.a.rows() != rows_ || sys.a.cols() != cols_)
      throw DimensionError("structured backend: system does not come from this flow LP");
    const int m = edges_, nv = vertex_rows_;
    Vec d1(m), d2(nv), d3(m);
    for (int j = 0; j < m; ++j) {
      d1[j] = std::sqrt(sys.w[j]);
      d3[j] = std::sqrt(sys.w[m + j] + sys.w[2 * m + j]);
    }
    for (int i = 0; i < nv; ++i) d2[i] = std::sqrt(sys.w[3 * m + i] + sys.w[3 * m + nv + i]);
    AugSystem aug{block_, DiagMatrix(std::move(d1)), DiagMatrix(std::move(d2)),
                  DiagMatrix(std::move(d3)), Vec(sys.v.begin(), sys.v.end())};
    AugmentedStats stats;
    double eps = std::clamp(tol, 1e-300, 0.5);
    Vec x = solve_augmented(aug, rhs, eps, cfg_, rng_, &stats);
    return {std::move(x), stats.mmatrix_solves};
  }

  std::string name() const override { return "structured"; }

 private:
  SparseMatrix block_;
  int edges_, vertex_rows_, rows_, cols_;
  MMatrixConfig cfg_;
  Rng rng_;
};

}  // namespace

std::unique_ptr<SystemBackend> structured_backend(const FlowLP& lp, const MMatrixConfig& cfg,
                                                  std::uint64_t seed) {
  return std::make_unique<StructuredBackend>(lp, cfg, seed);
}

std::unique_ptr<SystemBackend> make_backend(FlowBackend kind, const FlowLP& lp,
                                            const GenFlowConfig& cfg) {
  switch (kind) {
    case FlowBackend::direct:
      return flow_direct_backend(lp);
    case FlowBackend::dense:
      return std::make_unique<DenseBackend>();
    case FlowBackend::iterative:
      return std::make_unique<IterativeBackend>();
    case FlowBackend::structured:
      return structured_backend(lp, cfg.mmatrix, mix_seed(cfg.seed));
  }
  throw InvalidInput("unknown flow backend");
}

}  // namespace lossyflow
