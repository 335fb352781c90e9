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
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "lossyflow/mmatrix.hpp"

namespace lossyflow {

void AugSystem::validate() const {
  const int n = a.rows(), m = a.cols();
  if (d1.n() != m || d3.n() != m || d2.n() != n)
    throw DimensionError("AugSystem: diagonal lengths must be (m, n, m)");
  if (!v.empty() && static_cast<int>(v.size()) != n + m)
    throw DimensionError("AugSystem: v must have length n + m");
  for (int j = 0; j < m; ++j) {
    int len = a.col_ptr()[j + 1] - a.col_ptr()[j];
    if (len > 2) throw InvalidInput("AugSystem: A column with more than two nonzeros");
    if (len == 2 && a.values()[a.col_ptr()[j]] * a.values()[a.col_ptr()[j] + 1] > 0.0)
      throw InvalidInput("AugSystem: A Aᵀ is not an M-matrix (same-sign column pair)");
  }
}

SparseSym AugSystem::assemble() const {
  validate();
  const int n = a.rows(), m = a.cols();
  std::vector<Triplet> t;
  for (int j = 0; j < m; ++j) {
    double w = d1[j] * d1[j];
    for (int p = a.col_ptr()[j]; p < a.col_ptr()[j + 1]; ++p) {
      int r = a.row_idx()[p];
      for (int q = a.col_ptr()[j]; q <= p; ++q)
        t.push_back({r, a.row_idx()[q], a.values()[p] * a.values()[q] * w});
      t.push_back({n + j, r, a.values()[p] * w});
    }
    t.push_back({n + j, n + j, w + d3[j] * d3[j]});
  }
  for (int i = 0; i < n; ++i) t.push_back({i, i, d2[i] * d2[i]});
  return SparseSym::from_lower(n + m, t);
}

void dump(std::ostream& out, const AugSystem& sys) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "augsystem n " << sys.n() << " m " << sys.m() << "\n";
  out << "[A]\n";
  for (int j = 0; j < sys.m(); ++j)
    for (int p = sys.a.col_ptr()[j]; p < sys.a.col_ptr()[j + 1]; ++p)
      out << sys.a.row_idx()[p] << ' ' << j << ' ' << sys.a.values()[p] << "\n";
  auto block = [&](const char* name, const Vec& v) {
    out << "[" << name << "]\n";
    for (double x : v) out << x << "\n";
  };
  block("D1", sys.d1.values());
  block("D2", sys.d2.values());
  block("D3", sys.d3.values());
  block("v", sys.v);
}

namespace {

// Solves M x = b (no rank-one term) by eliminating the second block:
// M_S = A_S A_Sᵀ, then back-substitution.
class SchurSolver {
 public:
  SchurSolver(const AugSystem& sys, const MMatrixConfig& cfg, Rng& rng, AugmentedStats* stats)
      : sys_(sys), cfg_(cfg), stats_(stats) {
    const int n = sys.n(), m = sys.m();
    h_.resize(m);
    std::vector<TwoNnzFactor::Column> cols(m + n);
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    for (const DiagMatrix* d : {&sys.d1, &sys.d2, &sys.d3})
      for (double x : d->values()) {
        dmin = std::min(dmin, x);
        dmax = std::max(dmax, x);
      }
    for (int j = 0; j < m; ++j) {
      h_[j] = sys.d1[j] * sys.d1[j] + sys.d3[j] * sys.d3[j];
      double scale = sys.d1[j] * sys.d3[j] / std::sqrt(h_[j]);
      auto& c = cols[j];
      for (int p = sys.a.col_ptr()[j]; p < sys.a.col_ptr()[j + 1]; ++p) {
        c.row[c.count] = sys.a.row_idx()[p];
        c.value[c.count] = sys.a.values()[p] * scale;
        ++c.count;
      }
    }
    // Empty A columns contribute nothing to M_S.
    std::vector<TwoNnzFactor::Column> kept;
    kept.reserve(m + n);
    for (int j = 0; j < m; ++j)
      if (cols[j].count > 0) kept.push_back(cols[j]);
    for (int i = 0; i < n; ++i) {
      TwoNnzFactor::Column c;
      c.count = 1;
      c.row[0] = i;
      c.value[0] = sys.d2[i];
      kept.push_back(c);
    }
    factor_ = TwoNnzFactor(n, std::move(kept));
    double u = std::max(1.0, sys.a.max_abs());
    cfg_.lambda_min = dmin * dmin;
    cfg_.lambda_max = dmax * dmax * (u * std::sqrt(static_cast<double>(n) * m) + 1.0);
    if (n > 1) {
      ScalingResult sr = find_dd_scaling_detailed(factor_, cfg_, rng, cfg_.inner);
      scaling_ = sr.d;
      if (stats_) stats_->scaling_iterations += sr.iterations;
    } else {
      scaling_ = DiagMatrix::identity(n);
    }
  }

  Vec solve(std::span<const double> b, double eps) {
    const int n = sys_.n(), m = sys_.m();
    // r = b1 - A D1² (D1² + D3²)^{-1} b2
    Vec w(m);
    for (int j = 0; j < m; ++j) w[j] = sys_.d1[j] * sys_.d1[j] / h_[j] * b[n + j];
    Vec aw = sys_.a.multiply(w);
    Vec r(n);
    for (int i = 0; i < n; ++i) r[i] = b[i] - aw[i];
    Vec y1;
    if (std::all_of(r.begin(), r.end(), [](double x) { return x == 0.0; })) {
      y1.assign(n, 0.0);
    } else if (n == 1) {
      double m11 = 0.0;
      for (const auto& c : factor_.cols()) m11 += c.value[0] * c.value[0];
      y1 = {r[0] / m11};
    } else {
      y1 = mmatrix_solve_scaled(factor_, scaling_, r, std::clamp(eps, 1e-300, 0.5), cfg_.inner);
    }
    if (stats_) ++stats_->mmatrix_solves;
    Vec aty = sys_.a.multiply_transpose(y1);
    Vec x(n + m);
    std::copy(y1.begin(), y1.end(), x.begin());
    for (int j = 0; j < m; ++j)
      x[n + j] = (b[n + j] - sys_.d1[j] * sys_.d1[j] * aty[j]) / h_[j];
    return x;
  }

 private:
  const AugSystem& sys_;
  MMatrixConfig cfg_;
  AugmentedStats* stats_;
  Vec h_;
  TwoNnzFactor factor_;
  DiagMatrix scaling_;
};

}  // namespace

Vec solve_augmented(const AugSystem& sys, std::span<const double> b, double eps,
                    const MMatrixConfig& cfg, Rng& rng, AugmentedStats* stats) {
  sys.validate();
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("solve_augmented: eps must lie in (0,1)");
  const int total = sys.n() + sys.m();
  if (static_cast<int>(b.size()) != total) throw DimensionError("solve_augmented: size mismatch");
  SchurSolver schur(sys, cfg, rng, stats);
  bool rank_one = std::any_of(sys.v.begin(), sys.v.end(), [](double x) { return x != 0.0; });
  if (!rank_one) return schur.solve(b, eps);

  // The tolerances depend on vᵀM⁻¹v; estimate it from a first solve and
  // inflate the estimate by 2.
  Vec z = schur.solve(sys.v, std::min(0.5, eps / 14.0));
  double est = std::max(0.0, dot(sys.v, z));
  double c = 1.0 + 2.0 * est;
  double eps1 = (eps / 2.0) / c;
  double eps2 = std::min(0.5, (eps / 14.0) / c);
  z = schur.solve(sys.v, eps2);
  Vec y = schur.solve(b, eps1);
  double denom = 1.0 + dot(sys.v, z);
  if (!(denom > 1e-12)) throw InternalInconsistency("solve_augmented: rank-one breakdown, 1 + vᵀz <= 0");
  double coef = dot(z, b) / denom;
  for (int i = 0; i < total; ++i) y[i] -= z[i] * coef;
  return y;
}

}  // namespace lossyflow
