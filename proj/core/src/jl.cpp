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
#include <cstdint>

#include "lossyflow/errors.hpp"
#include "lossyflow/mmatrix.hpp"

namespace lossyflow {

double k_jl_bound(std::int64_t k, double alpha, double beta, double gamma) {
  double kd = static_cast<double>(k);
  double shrink = 1.0 - 2.0 / kd;
  double dev = gamma - 2.0 / (kd - 2.0);
  double first = 2.0 / (2.0 + (kd - 4.0) * shrink * shrink * dev * dev);
  double ratio = alpha / (1.0 - alpha);
  double second = 2.0 / (beta * (2.0 + ratio * ratio * kd));
  return 1.0 - first - second;
}

std::int64_t k_jl(double alpha, double beta, double gamma, double p) {
  for (double a : {alpha, beta, gamma, p})
    if (!(a > 0.0 && a < 1.0)) throw InvalidInput("k_jl: arguments must lie in (0,1)");
  constexpr std::int64_t kCap = std::int64_t{1} << 31;
  // Below 2 + 2/gamma the deviation term changes sign, so scan linearly;
  // past it the bound increases with k and bisection is safe.
  std::int64_t knee = static_cast<std::int64_t>(std::ceil(2.0 + 2.0 / gamma)) + 1;
  if (knee > kCap) throw InvalidInput("k_jl: required dimension exceeds 2^31");
  std::int64_t k = 5;
  for (; k <= knee; ++k)
    if (k_jl_bound(k, alpha, beta, gamma) >= p) return k;
  std::int64_t lo = knee, hi = knee;
  while (k_jl_bound(hi, alpha, beta, gamma) < p) {
    lo = hi;
    hi *= 2;
    if (hi > kCap) {
      if (k_jl_bound(kCap, alpha, beta, gamma) >= p) { hi = kCap; break; }
      throw InvalidInput("k_jl: required dimension exceeds 2^31");
    }
  }
  // Invariant: bound(lo) < p <= bound(hi).
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (k_jl_bound(mid, alpha, beta, gamma) >= p) hi = mid;
    else lo = mid;
  }
  return hi;
}

}  // namespace lossyflow
