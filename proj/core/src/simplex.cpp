// Copyright 2026 The Matchforge Authors
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
//
// Bounded-variable two-phase primal simplex. Basis kept as a dense LU with
// product-form eta updates and periodic refactorization. Phase 1 starts from
// the all-slack basis and adds one artificial column per infeasible row.

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "lp_core.hpp"

namespace matchforge::lp {

namespace {

constexpr double kPlusInf = std::numeric_limits<double>::infinity();
constexpr double kPivTol = 1e-9;     // minimum pivot magnitude in ratio test
constexpr double kLuTol = 1e-11;     // LU singularity threshold
constexpr double kFeasTol = 1e-7;    // final primal feasibility check
constexpr double kDegenStep = 1e-10;
constexpr int kBlandAfter = 600;     // consecutive degenerate pivots

struct DenseLu {
  int m = 0;
  std::vector<double> a;  // row-major, L below diagonal (unit), U on/above
  std::vector<int> perm;  // row permutation

  bool factor(std::vector<double> matrix, int dim) {
    m = dim;
    a = std::move(matrix);
    perm.resize(m);
    for (int i = 0; i < m; ++i) perm[i] = i;
    for (int k = 0; k < m; ++k) {
      int piv = k;
      double best = std::fabs(a[static_cast<size_t>(k) * m + k]);
      for (int i = k + 1; i < m; ++i) {
        double v = std::fabs(a[static_cast<size_t>(i) * m + k]);
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best < kLuTol) return false;
      if (piv != k) {
        for (int j = 0; j < m; ++j)
          std::swap(a[static_cast<size_t>(piv) * m + j],
                    a[static_cast<size_t>(k) * m + j]);
        std::swap(perm[piv], perm[k]);
      }
      const double inv = 1.0 / a[static_cast<size_t>(k) * m + k];
      for (int i = k + 1; i < m; ++i) {
        double f = a[static_cast<size_t>(i) * m + k] * inv;
        a[static_cast<size_t>(i) * m + k] = f;
        if (f == 0.0) continue;
        const double* uk = &a[static_cast<size_t>(k) * m];
        double* ui = &a[static_cast<size_t>(i) * m];
        for (int j = k + 1; j < m; ++j) ui[j] -= f * uk[j];
      }
    }
    return true;
  }

  // Solve B z = v in place (v permuted copy internally).
  void ftran(std::vector<double>& v, std::vector<double>& scratch) const {
    scratch.resize(m);
    for (int i = 0; i < m; ++i) scratch[i] = v[perm[i]];
    for (int i = 1; i < m; ++i) {
      double s = scratch[i];
      const double* row = &a[static_cast<size_t>(i) * m];
      for (int j = 0; j < i; ++j) s -= row[j] * scratch[j];
      scratch[i] = s;
    }
    for (int i = m - 1; i >= 0; --i) {
      double s = scratch[i];
      const double* row = &a[static_cast<size_t>(i) * m];
      for (int j = i + 1; j < m; ++j) s -= row[j] * scratch[j];
      scratch[i] = s / row[i];
    }
    v = scratch;
  }

  // Solve B^T z = w in place.
  void btran(std::vector<double>& w, std::vector<double>& scratch) const {
    scratch = w;
    // U^T y = w  (forward)
    for (int i = 0; i < m; ++i) {
      double s = scratch[i];
      for (int j = 0; j < i; ++j)
        s -= a[static_cast<size_t>(j) * m + i] * scratch[j];
      scratch[i] = s / a[static_cast<size_t>(i) * m + i];
    }
    // L^T z = y  (backward, unit diagonal)
    for (int i = m - 1; i >= 0; --i) {
      double s = scratch[i];
      for (int j = i + 1; j < m; ++j)
        s -= a[static_cast<size_t>(j) * m + i] * scratch[j];
      scratch[i] = s;
    }
    for (int i = 0; i < m; ++i) w[perm[i]] = scratch[i];
  }
};

struct Eta {
  int row;
  std::vector<double> alpha;  // pivot column after FTRAN
};

}  // namespace

struct SimplexSolver::Impl {
  const LpProblem& p;
  int n, m;          // structural vars, rows
  int n_art = 0;     // artificial columns appended after slacks
  int total() const { return n + m + n_art; }

  // Column-wise structural matrix.
  std::vector<int> col_start, col_row;
  std::vector<double> col_val;

  std::vector<double> lo, hi, cost;  // per column, phase-2 cost
  std::vector<double> x;
  std::vector<signed char> status;
  std::vector<int> basic;       // column basic in each row slot
  std::vector<int> art_row;     // artificial column -> its row
  std::vector<char> in_phase1_art;

  DenseLu lu;
  std::vector<Eta> etas;
  int refactor_interval = 100;
  std::vector<double> work, work2, ybuf, alpha;
  double cost_scale = 1.0;
  double rhs_scale = 1.0;

  long iterations = 0;
  long iteration_limit = 0;
  int degen_run = 0;
  bool bland = false;

  explicit Impl(const LpProblem& prob) : p(prob), n(prob.num_vars), m(prob.num_rows()) {
    // transpose rows to columns
    col_start.assign(n + 1, 0);
    for (size_t k = 0; k < p.cols.size(); ++k) ++col_start[p.cols[k] + 1];
    for (int j = 0; j < n; ++j) col_start[j + 1] += col_start[j];
    col_row.resize(p.cols.size());
    col_val.resize(p.cols.size());
    std::vector<int> fill(col_start.begin(), col_start.end() - 1);
    for (int r = 0; r < m; ++r) {
      for (int k = p.row_start[r]; k < p.row_start[r + 1]; ++k) {
        int j = p.cols[k];
        col_row[fill[j]] = r;
        col_val[fill[j]] = p.vals[k];
        ++fill[j];
      }
    }
    refactor_interval = std::max(60, std::min(250, 40 + m / 8));
  }

  bool is_slack(int j) const { return j >= n && j < n + m; }
  bool is_artificial(int j) const { return j >= n + m; }
  int slack_row(int j) const { return j - n; }

  // Column of the (extended) matrix applied to a dense vector slot.
  void add_column_times(int j, double mult, std::vector<double>& out) const {
    if (mult == 0.0) return;
    if (j < n) {
      for (int k = col_start[j]; k < col_start[j + 1]; ++k)
        out[col_row[k]] += mult * col_val[k];
    } else if (is_slack(j)) {
      out[slack_row(j)] += mult;
    } else {
      out[art_row[j - n - m]] += mult;
    }
  }

  double column_dot(int j, const std::vector<double>& y) const {
    if (j < n) {
      double s = 0.0;
      for (int k = col_start[j]; k < col_start[j + 1]; ++k)
        s += y[col_row[k]] * col_val[k];
      return s;
    }
    if (is_slack(j)) return y[slack_row(j)];
    return y[art_row[j - n - m]];
  }

  void build_bounds() {
    const int t = n + m;  // artificials appended later
    lo.assign(t, 0.0);
    hi.assign(t, 0.0);
    cost.assign(t, 0.0);
    for (int j = 0; j < n; ++j) {
      lo[j] = p.lo[j];
      hi[j] = p.hi[j];
      cost[j] = p.c[j];
    }
    for (int r = 0; r < m; ++r) {
      switch (p.rel[r]) {
        case Relation::kLe:
          lo[n + r] = 0.0;
          hi[n + r] = kPlusInf;
          break;
        case Relation::kGe:
          lo[n + r] = -kPlusInf;
          hi[n + r] = 0.0;
          break;
        case Relation::kEq:
          lo[n + r] = 0.0;
          hi[n + r] = 0.0;
          break;
      }
    }
    double cmax = 1.0;
    for (int j = 0; j < n; ++j) cmax = std::max(cmax, std::fabs(p.c[j]));
    cost_scale = cmax;
    rhs_scale = 1.0;
    for (double b : p.rhs) rhs_scale = std::max(rhs_scale, std::fabs(b));
  }

  double nonbasic_value(int j) const {
    switch (status[j]) {
      case kAtLower: return lo[j];
      case kAtUpper: return hi[j];
      case kFreeNonbasic: return 0.0;
      default: return x[j];
    }
  }

  signed char default_status(int j) const {
    const bool lf = std::isfinite(lo[j]), hf = std::isfinite(hi[j]);
    if (lf && hf) return std::fabs(lo[j]) <= std::fabs(hi[j]) ? kAtLower : kAtUpper;
    if (lf) return kAtLower;
    if (hf) return kAtUpper;
    return kFreeNonbasic;
  }

  bool refactorize() {
    std::vector<double> dense(static_cast<size_t>(m) * m, 0.0);
    std::vector<double> colbuf(m);
    for (int slot = 0; slot < m; ++slot) {
      std::fill(colbuf.begin(), colbuf.end(), 0.0);
      add_column_times(basic[slot], 1.0, colbuf);
      for (int r = 0; r < m; ++r) dense[static_cast<size_t>(r) * m + slot] = colbuf[r];
    }
    etas.clear();
    return lu.factor(std::move(dense), m);
  }

  void recompute_basics() {
    std::vector<double> rhs(p.rhs);
    for (int j = 0; j < total(); ++j) {
      if (status[j] == kBasic) continue;
      x[j] = nonbasic_value(j);
      add_column_times(j, -x[j], rhs);
    }
    if (m == 0) return;
    lu.ftran(rhs, work);
    for (const Eta& e : etas) apply_eta_ftran(e, rhs);
    for (int slot = 0; slot < m; ++slot) x[basic[slot]] = rhs[slot];
  }

  static void apply_eta_ftran(const Eta& e, std::vector<double>& v) {
    const double zr = v[e.row] / e.alpha[e.row];
    if (zr == 0.0) {
      v[e.row] = 0.0;
      return;
    }
    const int mm = static_cast<int>(e.alpha.size());
    for (int i = 0; i < mm; ++i) v[i] -= e.alpha[i] * zr;
    v[e.row] = zr;
  }

  static void apply_eta_btran(const Eta& e, std::vector<double>& w) {
    double t = 0.0;
    const int mm = static_cast<int>(e.alpha.size());
    for (int i = 0; i < mm; ++i) t += e.alpha[i] * w[i];
    w[e.row] -= (t - w[e.row]) / e.alpha[e.row];
    // note: derived from E^T w with E = I - (alpha - e_r) e_r^T / alpha_r
  }

  void ftran(std::vector<double>& v) {
    lu.ftran(v, work);
    for (const Eta& e : etas) apply_eta_ftran(e, v);
  }
  void btran(std::vector<double>& w) {
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) apply_eta_btran(*it, w);
    lu.btran(w, work);
  }

  // One simplex phase with the given cost vector (already stored in `cost`
  // for phase 2, or the phase-1 artificial costs).
  enum class PhaseOutcome { kOptimal, kUnbounded, kIterLimit, kTrouble };

  PhaseOutcome run_phase(const std::vector<double>& phase_cost, double dtol) {
    while (true) {
      if (iterations >= iteration_limit) return PhaseOutcome::kIterLimit;
      // duals for current basis
      ybuf.assign(m, 0.0);
      for (int slot = 0; slot < m; ++slot) ybuf[slot] = phase_cost[basic[slot]];
      if (m > 0) btran(ybuf);

      // pricing
      int enter = -1;
      double best = 0.0;
      int sigma = +1;
      for (int j = 0; j < total(); ++j) {
        const signed char st = status[j];
        if (st == kBasic) continue;
        if (lo[j] == hi[j]) continue;  // fixed
        const double d = phase_cost[j] - column_dot(j, ybuf);
        double score = 0.0;
        int dir = 0;
        if (st == kAtLower && d < -dtol) {
          score = -d;
          dir = +1;
        } else if (st == kAtUpper && d > dtol) {
          score = d;
          dir = -1;
        } else if (st == kFreeNonbasic && std::fabs(d) > dtol) {
          score = std::fabs(d);
          dir = d < 0 ? +1 : -1;
        }
        if (dir == 0) continue;
        if (bland) {
          enter = j;
          sigma = dir;
          break;
        }
        if (score > best + 1e-15) {
          best = score;
          enter = j;
          sigma = dir;
        }
      }
      if (enter < 0) return PhaseOutcome::kOptimal;

      // direction of basics
      alpha.assign(m, 0.0);
      add_column_times(enter, 1.0, alpha);
      if (m > 0) ftran(alpha);

      // ratio test: smallest step that parks a basic variable (or the
      // entering variable itself) on a bound
      double theta = kPlusInf;
      if (std::isfinite(lo[enter]) && std::isfinite(hi[enter]))
        theta = hi[enter] - lo[enter];
      int leave_slot = -1;  // -1: entering flips to its other bound
      double leave_piv = 0.0;
      for (int slot = 0; slot < m; ++slot) {
        const double rate = -sigma * alpha[slot];
        if (std::fabs(rate) <= kPivTol) continue;
        const int b = basic[slot];
        double room;
        if (rate > 0.0) {
          if (!std::isfinite(hi[b])) continue;
          room = hi[b] - x[b];
        } else {
          if (!std::isfinite(lo[b])) continue;
          room = x[b] - lo[b];
        }
        if (room < 0.0) room = 0.0;
        const double t = room / std::fabs(rate);
        if (t < theta - 1e-12) {
          theta = t;
          leave_slot = slot;
          leave_piv = alpha[slot];
        } else if (t <= theta + 1e-12 && leave_slot >= 0) {
          // tie between rows: favor the larger pivot for stability
          // (lowest leaving index under Bland's rule)
          const bool take = bland
                                ? basic[slot] < basic[leave_slot]
                                : std::fabs(alpha[slot]) > std::fabs(leave_piv);
          if (take) {
            leave_slot = slot;
            leave_piv = alpha[slot];
          }
        }
      }

      if (!std::isfinite(theta)) return PhaseOutcome::kUnbounded;
      ++iterations;

      if (theta <= kDegenStep) {
        if (++degen_run > kBlandAfter) bland = true;
      } else {
        degen_run = 0;
        bland = false;
      }

      // apply step to basics
      if (theta != 0.0) {
        for (int slot = 0; slot < m; ++slot) {
          if (alpha[slot] == 0.0) continue;
          x[basic[slot]] -= sigma * theta * alpha[slot];
        }
      }
      if (leave_slot < 0) {
        // entering flips to its other bound
        status[enter] = (sigma > 0) ? kAtUpper : kAtLower;
        x[enter] = nonbasic_value(enter);
        continue;
      }

      const int leaving = basic[leave_slot];
      const double rate = -sigma * alpha[leave_slot];
      status[leaving] = rate > 0 ? kAtUpper : kAtLower;
      if (lo[leaving] == hi[leaving]) status[leaving] = kAtLower;
      x[leaving] = nonbasic_value(leaving);

      x[enter] = nonbasic_value(enter) + sigma * theta;
      status[enter] = kBasic;
      basic[leave_slot] = enter;

      etas.push_back({leave_slot, alpha});
      if (static_cast<int>(etas.size()) >= refactor_interval) {
        if (!refactorize()) return PhaseOutcome::kTrouble;
        recompute_basics();
      }
    }
  }

  // Try to drive still-basic artificials out of the basis; returns false if
  // any artificial keeps a significantly nonzero value.
  void retire_artificials() {
    for (int a = 0; a < n_art; ++a) {
      const int col = n + m + a;
      lo[col] = 0.0;
      hi[col] = 0.0;
      cost[col] = 0.0;
      if (status[col] != kBasic) {
        status[col] = kAtLower;
        x[col] = 0.0;
      }
    }
    // Basic artificials stay pinned at zero by their fixed bounds; rows they
    // cover are redundant for the current basis.
  }

  LpResult finish(LpStatus st) {
    LpResult out;
    out.status = st;
    out.iterations = iterations;
    out.x.assign(n, 0.0);
    for (int j = 0; j < n; ++j) out.x[j] = x[j];
    out.objective = 0.0;
    for (int j = 0; j < n; ++j) out.objective += p.c[j] * x[j];
    out.basis.assign(status.begin(), status.begin() + n + m);
    if (st == LpStatus::kOptimal && m > 0) {
      ybuf.assign(m, 0.0);
      for (int slot = 0; slot < m; ++slot) ybuf[slot] = cost[basic[slot]];
      btran(ybuf);
      out.duals = ybuf;
      out.reduced.assign(n, 0.0);
      for (int j = 0; j < n; ++j)
        out.reduced[j] = p.c[j] - column_dot(j, ybuf);
    } else if (st == LpStatus::kOptimal) {
      out.duals.clear();
      out.reduced.assign(p.c.begin(), p.c.end());
    }
    return out;
  }

  double primal_infeasibility() const {
    double worst = 0.0;
    for (int j = 0; j < total(); ++j) {
      if (std::isfinite(lo[j])) worst = std::max(worst, lo[j] - x[j]);
      if (std::isfinite(hi[j])) worst = std::max(worst, x[j] - hi[j]);
    }
    return worst;
  }
};

SimplexSolver::SimplexSolver(const LpProblem& prob) : prob_(prob) {}

LpResult SimplexSolver::solve(const std::vector<signed char>* warm_basis,
                              long iteration_limit) {
  Impl im(prob_);
  const int n = im.n, m = im.m;
  im.build_bounds();
  im.iteration_limit =
      iteration_limit > 0 ? iteration_limit : 50000L + 120L * m;

  // ---- initial basis ----------------------------------------------------
  bool warm_ok = false;
  if (warm_basis && static_cast<int>(warm_basis->size()) <= n + m &&
      static_cast<int>(warm_basis->size()) >= n) {
    im.status.assign(n + m, kAtLower);
    for (int j = 0; j < n + m; ++j) {
      signed char st = j < static_cast<int>(warm_basis->size())
                           ? (*warm_basis)[j]
                           : kBasic;  // rows added since: slack basic
      // repair statuses that no longer match the bounds
      if (st == kAtLower && !std::isfinite(im.lo[j])) st = im.default_status(j);
      if (st == kAtUpper && !std::isfinite(im.hi[j])) st = im.default_status(j);
      im.status[j] = st;
    }
    im.basic.clear();
    for (int j = 0; j < n + m; ++j)
      if (im.status[j] == kBasic) im.basic.push_back(j);
    if (static_cast<int>(im.basic.size()) == m) {
      im.x.assign(n + m, 0.0);
      if (im.refactorize()) {
        im.recompute_basics();
        if (im.primal_infeasibility() <= kFeasTol) warm_ok = true;
      }
    }
  }

  if (!warm_ok) {
    // slack basis; infeasible rows get an artificial column
    im.status.assign(n + m, kAtLower);
    im.basic.assign(m, 0);
    for (int j = 0; j < n; ++j) im.status[j] = im.default_status(j);
    std::vector<double> act(m, 0.0);
    for (int j = 0; j < n; ++j) {
      double v = (im.status[j] == kAtLower)   ? im.lo[j]
                 : (im.status[j] == kAtUpper) ? im.hi[j]
                                              : 0.0;
      im.add_column_times(j, v, act);
    }
    std::vector<int> art_rows;
    for (int r = 0; r < m; ++r) {
      const double v = prob_.rhs[r] - act[r];
      const int sc = n + r;
      if (v >= im.lo[sc] - 1e-12 && v <= im.hi[sc] + 1e-12) {
        im.status[sc] = kBasic;
        im.basic[r] = sc;
      } else {
        // park the slack at its bound nearest the residual
        im.status[sc] = (v > im.hi[sc]) ? kAtUpper : kAtLower;
        art_rows.push_back(r);
      }
    }
    im.n_art = static_cast<int>(art_rows.size());
    im.art_row = art_rows;
    im.lo.resize(n + m + im.n_art);
    im.hi.resize(n + m + im.n_art);
    im.cost.resize(n + m + im.n_art, 0.0);
    im.status.resize(n + m + im.n_art, kAtLower);
    im.x.assign(n + m + im.n_art, 0.0);
    for (int a = 0; a < im.n_art; ++a) {
      const int r = art_rows[a];
      const int col = n + m + a;
      const int sc = n + r;
      double v = prob_.rhs[r] - act[r] -
                 ((im.status[sc] == kAtUpper) ? im.hi[sc] : im.lo[sc]);
      if (v >= 0) {
        im.lo[col] = 0.0;
        im.hi[col] = kPlusInf;
      } else {
        im.lo[col] = -kPlusInf;
        im.hi[col] = 0.0;
      }
      im.status[col] = kBasic;
      im.basic[r] = col;
    }
    if (!im.refactorize()) {
      LpResult bad;
      bad.status = LpStatus::kIterLimit;
      return bad;
    }
    im.recompute_basics();

    if (im.n_art > 0) {
      std::vector<double> c1(im.total(), 0.0);
      for (int a = 0; a < im.n_art; ++a) {
        const int col = n + m + a;
        c1[col] = std::isfinite(im.hi[col]) ? -1.0 : 1.0;  // minimize |value|
      }
      auto out = im.run_phase(c1, 1e-9);
      if (out == Impl::PhaseOutcome::kIterLimit) return im.finish(LpStatus::kIterLimit);
      if (out == Impl::PhaseOutcome::kTrouble) return im.finish(LpStatus::kIterLimit);
      double infeas = 0.0;
      for (int a = 0; a < im.n_art; ++a) infeas += std::fabs(im.x[n + m + a]);
      if (infeas > 1e-7 * im.rhs_scale) {
        return im.finish(LpStatus::kInfeasible);
      }
      im.retire_artificials();
      if (!im.refactorize()) return im.finish(LpStatus::kIterLimit);
      im.recompute_basics();
    }
  } else {
    im.x.resize(n + m);
  }

  // ---- phase 2 -----------------------------------------------------------
  std::vector<double> c2(im.total(), 0.0);
  for (int j = 0; j < n; ++j) c2[j] = prob_.c[j];
  const double dtol = 1e-9 * std::max(1.0, im.cost_scale);
  auto out = im.run_phase(c2, dtol);
  im.cost = c2;

  switch (out) {
    case Impl::PhaseOutcome::kUnbounded:
      return im.finish(LpStatus::kUnbounded);
    case Impl::PhaseOutcome::kIterLimit:
    case Impl::PhaseOutcome::kTrouble:
      return im.finish(LpStatus::kIterLimit);
    case Impl::PhaseOutcome::kOptimal:
      break;
  }

  // final consistency: refactor once and re-verify; retry the phase if the
  // eta-accumulated point drifted
  if (!im.refactorize()) return im.finish(LpStatus::kIterLimit);
  im.recompute_basics();
  if (im.primal_infeasibility() > kFeasTol) {
    auto again = im.run_phase(c2, dtol);
    if (again != Impl::PhaseOutcome::kOptimal)
      return im.finish(LpStatus::kIterLimit);
    if (!im.refactorize()) return im.finish(LpStatus::kIterLimit);
    im.recompute_basics();
    if (im.primal_infeasibility() > 10 * kFeasTol)
      return im.finish(LpStatus::kIterLimit);
  }
  return im.finish(LpStatus::kOptimal);
}

}  // namespace matchforge::lp
