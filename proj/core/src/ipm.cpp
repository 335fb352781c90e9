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

#include "lossyflow/ipm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "lossyflow/solve.hpp"

namespace lossyflow {
namespace {

long double dot_ld(std::span<const double> a, std::span<const double> b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
  return s;
}

Vec slacks(const SparseMatrix& a, std::span<const double> c, std::span<const double> y) {
  Vec s = a.multiply_transpose(y);
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = c[j] - s[j];
  return s;
}

}  // namespace

void CanonicalLP::validate() const {
  if (static_cast<int>(b.size()) != a.rows() || static_cast<int>(c.size()) != a.cols() ||
      static_cast<int>(y0.size()) != a.rows())
    throw DimensionError("CanonicalLP: inconsistent dimensions");
  if (a.rows() < 1 || a.cols() < 1) throw InvalidInput("CanonicalLP: empty constraint matrix");
  if (!(t > 0.0)) throw InvalidInput("CanonicalLP: T must be positive");
  if (!(lambda_min > 0.0)) throw InvalidInput("CanonicalLP: lambda_min must be positive");
  if (!(norm2(b) > 0.0)) throw InvalidInput("CanonicalLP: b must be nonzero");
  Vec s0 = slacks(a, c, y0);
  for (std::size_t j = 0; j < s0.size(); ++j)
    if (!(s0[j] > 0.0))
      throw InvalidInput("CanonicalLP: y0 is not strictly interior (slack " + std::to_string(j) +
                         " = " + std::to_string(s0[j]) + ")");
}

double CanonicalLP::max_entry() const {
  double u = a.max_abs();
  for (double x : b) u = std::max(u, std::abs(x));
  for (double x : c) u = std::max(u, std::abs(x));
  return u;
}

double CanonicalLP::min_initial_slack() const {
  Vec s0 = slacks(a, c, y0);
  return *std::min_element(s0.begin(), s0.end());
}

void IpmConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("IpmConfig: epsilon must lie in (0,1)");
  if ((max_shift_iters && *max_shift_iters < 1) || (max_unshift_iters && *max_unshift_iters < 1))
    throw InvalidInput("IpmConfig: iteration caps must be >= 1");
}

DualState make_dual_state(const SparseMatrix& a, std::span<const double> b,
                          std::span<const double> c, Vec y, double z) {
  DualState st;
  st.s = slacks(a, c, y);
  st.s_gap = static_cast<double>(dot_ld(b, y) - z);
  st.z = z;
  st.y = std::move(y);
  for (double v : st.s)
    if (!(v > 0.0)) throw InternalInconsistency("dual state with non-positive slack");
  if (!(st.s_gap > 0.0)) throw InternalInconsistency("dual state with non-positive gap slack");
  return st;
}

namespace {

struct Direction {
  Vec d;
  double eps3 = 0.0;
  int iterations = 0;
};

// Solves (A S^-2 Aᵀ + v vᵀ) d = -A S^-1 1 + copies b / s_gap. No gap term
// when copies == 0.
Direction newton_direction(const SparseMatrix& a, std::span<const double> s,
                           std::span<const double> b, double s_gap, int copies,
                           SystemBackend& backend, std::optional<double> eps3_override) {
  const int n = a.rows(), m = a.cols();
  Vec w(m), inv_s(m);
  for (int j = 0; j < m; ++j) {
    if (!(s[j] > 0.0)) throw InvalidInput("newton_step: y is not strictly interior");
    inv_s[j] = 1.0 / s[j];
    w[j] = inv_s[j] * inv_s[j];
  }
  Vec rhs = a.multiply(inv_s);
  for (double& r : rhs) r = -r;
  Vec v;
  if (copies > 0) {
    if (!(s_gap > 0.0)) throw InvalidInput("newton_step: y violates the objective cut");
    const double k = copies;
    v.resize(n);
    for (int i = 0; i < n; ++i) {
      v[i] = std::sqrt(k) * b[i] / s_gap;
      rhs[i] += k * b[i] / s_gap;
    }
  }
  const double total_cols = m + copies;
  double eps3 = eps3_override ? *eps3_override : 1.0 / (20.0 * (std::sqrt(total_cols) + 1.0));
  BackendResult r = backend.solve(NormalSystem{a, w, v}, rhs, eps3);
  return {std::move(r.x), eps3, r.iterations};
}

// One shift or unshift step. Slacks and the gap slack are carried forward
// as s - (1-eps3) Aᵀd and s_gap + (1-eps3) bᵀd instead of being recomputed
// from y, which keeps them accurate relative to their own size when |y| is
// large.
DualState move_cut(const CanonicalLP& lp, std::span<const double> b, const DualState& state,
                   double z_next, SystemBackend& backend, const IpmConfig& cfg, StepInfo* info) {
  const double sg = state.s_gap - (z_next - state.z);
  if (!(sg > 0.0)) throw StepRejected("newton_step: objective cut passes the iterate");
  Direction dir = newton_direction(lp.a, state.s, b, sg, lp.cols(), backend, cfg.eps3_override);
  if (info) *info = {dir.eps3, dir.iterations};
  const double alpha = 1.0 - dir.eps3;
  DualState out;
  out.y = state.y;
  for (std::size_t i = 0; i < out.y.size(); ++i) out.y[i] += alpha * dir.d[i];
  Vec atd = lp.a.multiply_transpose(dir.d);
  out.s.resize(atd.size());
  for (std::size_t j = 0; j < atd.size(); ++j) {
    out.s[j] = state.s[j] - alpha * atd[j];
    if (!(out.s[j] > 0.0))
      throw StepRejected("newton_step: slack " + std::to_string(j) +
                         " became non-positive; iterate was not near-central");
  }
  out.s_gap = static_cast<double>(sg + alpha * dot_ld(b, dir.d));
  if (!(out.s_gap > 0.0)) throw StepRejected("newton_step: gap slack became non-positive");
  out.z = z_next;
  return out;
}

}  // namespace

NewtonResult newton_step(const SparseMatrix& a, std::span<const double> c,
                         std::span<const double> y, SystemBackend& backend,
                         const std::optional<GapConstraint>& gap,
                         std::optional<double> eps3_override) {
  const int n = a.rows(), m = a.cols();
  if (static_cast<int>(y.size()) != n || static_cast<int>(c.size()) != m)
    throw DimensionError("newton_step: size mismatch");
  Vec s = slacks(a, c, y);
  double sg = 0.0;
  if (gap) sg = static_cast<double>(dot_ld(gap->b, y) - gap->z);
  Direction dir = newton_direction(a, s, gap ? gap->b : std::span<const double>{}, sg,
                                   gap ? gap->copies : 0, backend, eps3_override);
  NewtonResult out{Vec(y.begin(), y.end()), dir.eps3, dir.iterations};
  for (int i = 0; i < n; ++i) out.y[i] += (1.0 - dir.eps3) * dir.d[i];
  Vec s_next = slacks(a, c, out.y);
  for (int j = 0; j < m; ++j)
    if (!(s_next[j] > 0.0))
      throw StepRejected("newton_step: slack " + std::to_string(j) +
                         " became non-positive; iterate was not near-central");
  if (gap && !(static_cast<double>(dot_ld(gap->b, out.y) - gap->z) > 0.0))
    throw StepRejected("newton_step: gap slack became non-positive");
  return out;
}

DualState shift(const CanonicalLP& lp, const DualState& state, SystemBackend& backend,
                const IpmConfig& cfg, StepInfo* info) {
  double m = lp.cols();
  double z_next = state.z + state.s_gap / (10.0 * std::sqrt(m));
  return move_cut(lp, lp.b, state, z_next, backend, cfg, info);
}

DualState unshift(const CanonicalLP& lp, std::span<const double> b_hat, const DualState& state,
                  SystemBackend& backend, const IpmConfig& cfg, StepInfo* info) {
  double m = lp.cols();
  double z_next = state.z - state.s_gap / (10.0 * std::sqrt(m));
  return move_cut(lp, b_hat, state, z_next, backend, cfg, info);
}

Vec initial_b_hat(const CanonicalLP& lp) {
  Vec s0 = slacks(lp.a, lp.c, lp.y0);
  for (double& v : s0) v = 1.0 / v;
  return lp.a.multiply(s0);
}

long default_iteration_cap(const CanonicalLP& lp, double epsilon) {
  double m = lp.cols();
  double arg = lp.t * std::max(1.0, lp.max_entry()) * m /
               (lp.lambda_min * lp.min_initial_slack() * epsilon);
  double cap = std::ceil(40.0 * std::sqrt(m) * std::log(std::max(arg, std::exp(1.0))));
  return static_cast<long>(std::min(cap, 1e12));
}

DualState find_central_path(const CanonicalLP& lp, SystemBackend& backend, const IpmConfig& cfg,
                            const IpmObserver& observer, PathStats* stats) {
  lp.validate();
  const double m = lp.cols();
  Vec b_hat = initial_b_hat(lp);
  DualState st = make_dual_state(lp.a, b_hat, lp.c, lp.y0,
                                 static_cast<double>(dot_ld(b_hat, lp.y0) - m));
  // Force the exact starting gap m (b̂ᵀy⁰ - ẑ⁰ may round).
  st.s_gap = m;
  const double scale = 40.0 / std::sqrt(lp.lambda_min) * lp.t * m;
  const double target = scale * norm2(b_hat);
  long cap = cfg.max_unshift_iters.value_or(default_iteration_cap(lp, cfg.epsilon));
  long count = 0;
  while (st.s_gap < target) {
    if (count >= cap)
      throw IpmFailure("find_central_path: unshift cap " + std::to_string(cap) + " reached",
                       {}, stats ? *stats : PathStats{});
    StepInfo info;
    st = unshift(lp, b_hat, st, backend, cfg, &info);
    ++count;
    if (stats) {
      ++stats->unshifts;
      ++stats->solves;
      stats->backend_iterations += info.backend_iterations;
    }
    if (observer) observer(IpmEvent{IpmPhase::unshift, count, st, b_hat, info.tolerance,
                                    info.backend_iterations});
  }
  // Switch the cut to b; the carried slacks stay.
  const double gap = scale * norm2(lp.b);
  st.z = static_cast<double>(dot_ld(lp.b, st.y)) - gap;
  st.s_gap = gap;
  return st;
}

Vec extract_primal(const CanonicalLP& lp, const DualState& state, SystemBackend& backend,
                   const IpmConfig& cfg, StepInfo* info) {
  const int n = lp.rows(), m = lp.cols();
  const double md = m;
  const double sg = state.s_gap;
  double s_min = sg;
  for (double v : state.s) s_min = std::min(s_min, v);
  double eps4 = cfg.eps4_override
                    ? *cfg.eps4_override
                    : std::min(1.0, s_min / (lp.t * lp.max_entry()) * std::sqrt(md) / n);
  Vec inv_s(m), w(m);
  for (int j = 0; j < m; ++j) {
    inv_s[j] = 1.0 / state.s[j];
    w[j] = inv_s[j] * inv_s[j];
  }
  Vec rhs = lp.a.multiply(inv_s);
  Vec v(n);
  for (int i = 0; i < n; ++i) {
    rhs[i] -= md * lp.b[i] / sg;
    v[i] = std::sqrt(md) * lp.b[i] / sg;
  }
  BackendResult sol = backend.solve(NormalSystem{lp.a, w, v}, rhs, eps4);
  if (info) *info = {eps4, sol.iterations};
  Vec atv = lp.a.multiply_transpose(sol.x);
  double x_gap = 1.0 / sg + static_cast<double>(dot_ld(lp.b, sol.x)) / (sg * sg);
  if (!(x_gap > 0.0))
    throw InternalInconsistency("extract_primal: non-positive gap coordinate; iterate is not "
                                "near-central");
  Vec x(m);
  for (int j = 0; j < m; ++j) {
    x[j] = (inv_s[j] - atv[j] * w[j]) / (md * x_gap);
    if (!(x[j] > 0.0))
      throw InternalInconsistency("extract_primal: non-positive primal coordinate " +
                                  std::to_string(j));
  }
  return x;
}

IpmResult interior_point(const CanonicalLP& lp, const IpmConfig& cfg, SystemBackend& backend,
                         const IpmObserver& observer) {
  cfg.validate();
  lp.validate();
  IpmResult res;
  std::vector<TraceRecord> trace;
  try {
    res.final_state = find_central_path(lp, backend, cfg, observer, &res.stats);
    long cap = cfg.max_shift_iters.value_or(default_iteration_cap(lp, cfg.epsilon));
    DualState& st = res.final_state;
    while (st.s_gap > cfg.epsilon / 3.0) {
      if (res.stats.shifts >= cap)
        throw IpmFailure("interior_point: shift cap " + std::to_string(cap) + " reached at s_gap " +
                             std::to_string(st.s_gap),
                         trace, res.stats);
      StepInfo info;
      st = shift(lp, st, backend, cfg, &info);
      ++res.stats.shifts;
      ++res.stats.solves;
      res.stats.backend_iterations += info.backend_iterations;
      trace.push_back({res.stats.shifts, st.z, st.s_gap, info.tolerance, info.backend_iterations});
      if (observer) observer(IpmEvent{IpmPhase::shift, res.stats.shifts, st, lp.b, info.tolerance,
                                      info.backend_iterations});
    }
    StepInfo info;
    res.x = extract_primal(lp, st, backend, cfg, &info);
    ++res.stats.solves;
    res.stats.backend_iterations += info.backend_iterations;
    if (observer) observer(IpmEvent{IpmPhase::extract, res.stats.shifts, st, lp.b, info.tolerance,
                                    info.backend_iterations});
  } catch (const IpmFailure&) {
    throw;
  } catch (const Error& e) {
    throw IpmFailure(std::string("interior_point: ") + e.what(), trace, res.stats);
  }
  return res;
}

IpmObserver trace_writer(std::ostream& out) {
  return [&out](const IpmEvent& ev) {
    if (ev.phase != IpmPhase::shift) return;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "{\"iter\":%ld,\"z\":%.17g,\"s_gap\":%.17g,\"tol\":%.17g,\"backend_iters\":%d}\n",
                  ev.iteration, ev.state.z, ev.state.s_gap, ev.tolerance, ev.backend_iterations);
    out << buf;
  };
}

}  // namespace lossyflow
