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

#include "lossyflow/centrality.hpp"

#include <cmath>

#include "lossyflow/errors.hpp"
#include "lossyflow/solve.hpp"

namespace lossyflow {
namespace {

SparseMatrix augment(const SparseMatrix& a, std::span<const double> b, int copies) {
  std::vector<Triplet> t;
  for (int j = 0; j < a.cols(); ++j)
    for (int p = a.col_ptr()[j]; p < a.col_ptr()[j + 1]; ++p)
      t.push_back({a.row_idx()[p], j, a.values()[p]});
  for (int k = 0; k < copies; ++k)
    for (int i = 0; i < a.rows(); ++i)
      if (b[i] != 0.0) t.push_back({i, a.cols() + k, -b[i]});
  return SparseMatrix::from_triplets(a.rows(), a.cols() + copies, t);
}

}  // namespace

double eta_exact(const SparseMatrix& a, std::span<const double> s) {
  if (static_cast<int>(s.size()) != a.cols()) throw DimensionError("eta_exact: size mismatch");
  Vec inv(s.size()), w(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (!(s[j] > 0.0)) throw InvalidInput("eta_exact: slacks must be positive");
    inv[j] = 1.0 / s[j];
    w[j] = inv[j] * inv[j];
  }
  Vec g = a.multiply(inv);
  Vec h = solve_direct(gram(a, w), g);
  double q = dot(g, h);
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

double eta_augmented(const SparseMatrix& a, std::span<const double> b, std::span<const double> s,
                     double s_gap, int copies) {
  if (static_cast<int>(b.size()) != a.rows()) throw DimensionError("eta_augmented: size mismatch");
  Vec st(s.begin(), s.end());
  st.insert(st.end(), copies, s_gap);
  return eta_exact(augment(a, b, copies), st);
}

Vec central_primal(const SparseMatrix& a, std::span<const double> s) {
  Vec inv(s.size()), w(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    inv[j] = 1.0 / s[j];
    w[j] = inv[j] * inv[j];
  }
  Vec h = solve_direct(gram(a, w), a.multiply(inv));
  Vec ath = a.multiply_transpose(h);
  Vec x(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) x[j] = inv[j] * (1.0 - inv[j] * ath[j]);
  return x;
}

}  // namespace lossyflow
