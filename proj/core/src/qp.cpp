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
// Convex QP: minimize c.x + sum_k w_k (e_k.x - f_k)^2 over bounds and a
// small number of general rows. Inequalities become equalities with slack
// variables; the primal active-set loop works on the bound constraints with
// the equality rows kept in the KKT system (range-space form, CG solves for
// the Hessian, which carries a tiny ridge so it is positive definite).

#include <algorithm>
#include <cmath>
#include <vector>

#include "backend_internal.hpp"
#include "lp_core.hpp"

namespace matchforge::backend {

namespace {

struct Qp {
  const OptModel& model;
  int n0;  // model variables
  int n;   // + slacks
  int k;   // equality rows after slackification
  std::vector<double> c, lo, hi;
  // least-squares rows (CSR)
  std::vector<int> e_start, e_col;
  std::vector<double> e_val, e_weight, e_target;
  // equality rows (CSR), includes slack coefficients
  std::vector<int> g_start, g_col;
  std::vector<double> g_val, g_rhs;

  double ridge = 0.0;

  std::vector<char> at_lo, at_hi;
  std::vector<double> x;
  std::vector<double> mu;  // equality multipliers from the last KKT solve

  explicit Qp(const OptModel& m) : model(m), n0(m.num_vars()) {
    int slacks = 0;
    for (int r = 0; r < m.num_rows(); ++r) {
      if (m.row(r).rel != Relation::kEq) ++slacks;
    }
    n = n0 + slacks;
    k = m.num_rows();
    c.assign(n, 0.0);
    lo.assign(n, -kInf);
    hi.assign(n, kInf);
    for (int j = 0; j < n0; ++j) {
      c[j] = m.var(j).obj;
      lo[j] = m.var(j).lo;
      hi[j] = m.var(j).hi;
    }
    g_start.push_back(0);
    int next_slack = n0;
    for (int r = 0; r < m.num_rows(); ++r) {
      const auto& row = m.row(r);
      for (const LinearTerm& t : row.terms) {
        g_col.push_back(t.var);
        g_val.push_back(t.coef);
      }
      if (row.rel != Relation::kEq) {
        const int s = next_slack++;
        if (row.rel == Relation::kLe) {
          lo[s] = 0.0;  // a.x + s = rhs, s >= 0
        } else {
          hi[s] = 0.0;
        }
        g_col.push_back(s);
        g_val.push_back(1.0);
      }
      g_start.push_back(static_cast<int>(g_col.size()));
      g_rhs.push_back(row.rhs);
    }
    e_start.push_back(0);
    for (const auto& t : m.squared_terms()) {
      for (const LinearTerm& lt : t.expr) {
        e_col.push_back(lt.var);
        e_val.push_back(lt.coef);
      }
      e_start.push_back(static_cast<int>(e_col.size()));
      e_weight.push_back(t.weight);
      e_target.push_back(t.target);
    }
    // ridge scaled to the largest Hessian diagonal entry
    std::vector<double> diag(n, 0.0);
    hessian_diag(diag);
    double dmax = 1.0;
    for (double d : diag) dmax = std::max(dmax, d);
    ridge = 1e-10 * dmax;
  }

  void hessian_diag(std::vector<double>& diag) const {
    for (size_t kk = 0; kk < e_weight.size(); ++kk) {
      for (int t = e_start[kk]; t < e_start[kk + 1]; ++t) {
        diag[e_col[t]] += 2.0 * e_weight[kk] * e_val[t] * e_val[t];
      }
    }
  }

  // out = H v, with v assumed zero on the active set already.
  void apply_h(const std::vector<double>& v, std::vector<double>& out) const {
    for (int j = 0; j < n; ++j) out[j] = ridge * v[j];
    for (size_t kk = 0; kk < e_weight.size(); ++kk) {
      double dot = 0.0;
      for (int t = e_start[kk]; t < e_start[kk + 1]; ++t)
        dot += e_val[t] * v[e_col[t]];
      if (dot == 0.0) continue;
      const double scale = 2.0 * e_weight[kk] * dot;
      for (int t = e_start[kk]; t < e_start[kk + 1]; ++t)
        out[e_col[t]] += scale * e_val[t];
    }
  }

  void gradient(std::vector<double>& g) const {
    g = c;
    for (int j = 0; j < n; ++j) g[j] += ridge * x[j];
    for (size_t kk = 0; kk < e_weight.size(); ++kk) {
      double dot = -e_target[kk];
      for (int t = e_start[kk]; t < e_start[kk + 1]; ++t)
        dot += e_val[t] * x[e_col[t]];
      const double scale = 2.0 * e_weight[kk] * dot;
      for (int t = e_start[kk]; t < e_start[kk + 1]; ++t)
        g[e_col[t]] += scale * e_val[t];
    }
  }

  bool is_free(int j) const { return !at_lo[j] && !at_hi[j]; }

  // Preconditioned CG for H_FF y = b (b zero on active set).
  void cg_solve(const std::vector<double>& b, std::vector<double>& y,
                std::vector<double>& diag) const {
    const int maxit = 400 + 2 * n;
    y.assign(n, 0.0);
    std::vector<double> r = b, z(n), p(n), hp(n);
    double bnorm = 0.0;
    for (int j = 0; j < n; ++j) bnorm = std::max(bnorm, std::fabs(b[j]));
    if (bnorm == 0.0) return;
    const double tol = 1e-13 * bnorm;
    auto precond = [&](const std::vector<double>& in, std::vector<double>& out) {
      for (int j = 0; j < n; ++j)
        out[j] = is_free(j) ? in[j] / (diag[j] + ridge) : 0.0;
    };
    precond(r, z);
    p = z;
    double rz = 0.0;
    for (int j = 0; j < n; ++j) rz += r[j] * z[j];
    for (int it = 0; it < maxit; ++it) {
      apply_h(p, hp);
      for (int j = 0; j < n; ++j)
        if (!is_free(j)) hp[j] = 0.0;
      double php = 0.0;
      for (int j = 0; j < n; ++j) php += p[j] * hp[j];
      if (php <= 0.0) break;
      const double alpha = rz / php;
      double rmax = 0.0;
      for (int j = 0; j < n; ++j) {
        y[j] += alpha * p[j];
        r[j] -= alpha * hp[j];
        rmax = std::max(rmax, std::fabs(r[j]));
      }
      if (rmax <= tol) break;
      precond(r, z);
      double rz_new = 0.0;
      for (int j = 0; j < n; ++j) rz_new += r[j] * z[j];
      const double beta = rz_new / rz;
      rz = rz_new;
      for (int j = 0; j < n; ++j) p[j] = z[j] + beta * p[j];
    }
  }

  double row_value(int r, const std::vector<double>& v) const {
    double s = 0.0;
    for (int t = g_start[r]; t < g_start[r + 1]; ++t)
      s += g_val[t] * v[g_col[t]];
    return s;
  }

  // d restricted to free vars with G d = resid; also fills mu.
  void kkt_step(const std::vector<double>& g, std::vector<double>& d) {
    std::vector<double> diag(n, 0.0);
    hessian_diag(diag);

    std::vector<double> gm(n, 0.0);
    for (int j = 0; j < n; ++j) gm[j] = is_free(j) ? -g[j] : 0.0;
    std::vector<double> d0(n);
    cg_solve(gm, d0, diag);

    // range-space system for the equality multipliers
    std::vector<std::vector<double>> z(k, std::vector<double>(n, 0.0));
    std::vector<double> grow(n);
    for (int r = 0; r < k; ++r) {
      std::fill(grow.begin(), grow.end(), 0.0);
      for (int t = g_start[r]; t < g_start[r + 1]; ++t)
        if (is_free(g_col[t])) grow[g_col[t]] = g_val[t];
      cg_solve(grow, z[r], diag);
    }
    // S mu = G d0 - resid, resid = h - G x
    std::vector<double> rhs(k);
    for (int r = 0; r < k; ++r) {
      rhs[r] = row_value(r, d0) - (g_rhs[r] - row_value(r, x));
    }
    std::vector<std::vector<double>> S(k, std::vector<double>(k, 0.0));
    for (int r = 0; r < k; ++r) {
      for (int cidx = 0; cidx < k; ++cidx) S[r][cidx] = row_value(r, z[cidx]);
      S[r][r] += 1e-13 * (1.0 + std::fabs(S[r][r]));
    }
    mu.assign(k, 0.0);
    // small dense Gaussian elimination with partial pivoting
    {
      std::vector<int> idx(k);
      for (int i = 0; i < k; ++i) idx[i] = i;
      for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int i = col + 1; i < k; ++i)
          if (std::fabs(S[i][col]) > std::fabs(S[piv][col])) piv = i;
        std::swap(S[col], S[piv]);
        std::swap(rhs[col], rhs[piv]);
        if (std::fabs(S[col][col]) < 1e-300) continue;
        for (int i = col + 1; i < k; ++i) {
          const double f = S[i][col] / S[col][col];
          if (f == 0.0) continue;
          for (int j2 = col; j2 < k; ++j2) S[i][j2] -= f * S[col][j2];
          rhs[i] -= f * rhs[col];
        }
      }
      for (int i = k - 1; i >= 0; --i) {
        double s = rhs[i];
        for (int j2 = i + 1; j2 < k; ++j2) s -= S[i][j2] * mu[j2];
        mu[i] = std::fabs(S[i][i]) < 1e-300 ? 0.0 : s / S[i][i];
      }
    }
    d = d0;
    for (int r = 0; r < k; ++r) {
      if (mu[r] == 0.0) continue;
      for (int j = 0; j < n; ++j) d[j] -= mu[r] * z[r][j];
    }
    for (int j = 0; j < n; ++j)
      if (!is_free(j)) d[j] = 0.0;
  }
};

}  // namespace

OptSolution solve_qp(const OptModel& model, const SolveLimits& limits) {
  (void)limits;
  if (model.sense() == Sense::kMaximize) {
    throw Error(Errc::kMalformedModel,
                "quadratic objectives are supported for minimization only");
  }
  if (model.num_rows() > 50) {
    throw Error(Errc::kModelTooLarge,
                "QP path supports at most 50 general rows");
  }

  Qp qp(model);
  const int n = qp.n, n0 = qp.n0, k = qp.k;

  // ---- feasible start -----------------------------------------------------
  qp.x.assign(n, 0.0);
  bool started = false;
  if (static_cast<int>(model.warm_start().size()) == n0) {
    std::vector<double> cand(n, 0.0);
    for (int j = 0; j < n0; ++j) cand[j] = model.warm_start()[j];
    bool ok = true;
    for (int j = 0; j < n0 && ok; ++j)
      ok = cand[j] >= qp.lo[j] - 1e-9 && cand[j] <= qp.hi[j] + 1e-9;
    // derive slack values from their rows
    int next_slack = n0;
    for (int r = 0; r < model.num_rows() && ok; ++r) {
      if (model.row(r).rel == Relation::kEq) {
        ok = std::fabs(model.row_activity(r, cand) - model.row(r).rhs) <= 1e-7;
        continue;
      }
      double s = model.row(r).rhs - model.row_activity(r, cand);
      cand[next_slack] = s;
      ok = s >= qp.lo[next_slack] - 1e-9 && s <= qp.hi[next_slack] + 1e-9;
      ++next_slack;
    }
    if (ok) {
      qp.x = cand;
      started = true;
    }
  }
  if (!started) {
    // vertex of the feasible region via the simplex with a zero objective
    lp::LpProblem prob;
    prob.num_vars = n0;
    prob.c.assign(n0, 0.0);
    prob.lo.assign(qp.lo.begin(), qp.lo.begin() + n0);
    prob.hi.assign(qp.hi.begin(), qp.hi.begin() + n0);
    for (int r = 0; r < model.num_rows(); ++r)
      prob.add_row(model.row(r).terms, model.row(r).rel, model.row(r).rhs);
    lp::SimplexSolver solver(prob);
    lp::LpResult res = solver.solve();
    if (res.status == lp::LpStatus::kInfeasible) {
      OptSolution out;
      out.status = SolveStatus::kInfeasible;
      return out;
    }
    if (res.status != lp::LpStatus::kOptimal) {
      throw Error(Errc::kNumericalFailure, "QP phase-1 did not converge");
    }
    for (int j = 0; j < n0; ++j) qp.x[j] = res.x[j];
    int next_slack = n0;
    for (int r = 0; r < model.num_rows(); ++r) {
      if (model.row(r).rel == Relation::kEq) continue;
      qp.x[next_slack++] = model.row(r).rhs - model.row_activity(r, res.x);
    }
  }

  // clamp onto bounds and record the initial active set
  qp.at_lo.assign(n, 0);
  qp.at_hi.assign(n, 0);
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(qp.lo[j]) && qp.x[j] <= qp.lo[j] + 1e-12) {
      qp.x[j] = qp.lo[j];
      qp.at_lo[j] = 1;
    } else if (std::isfinite(qp.hi[j]) && qp.x[j] >= qp.hi[j] - 1e-12) {
      qp.x[j] = qp.hi[j];
      qp.at_hi[j] = 1;
    }
  }

  // ---- active-set loop ----------------------------------------------------
  std::vector<double> g(n), d(n);
  std::vector<int> cooldown(n, -1);
  const int maxit = 600 + 4 * n;
  bool converged = false;
  for (int it = 0; it < maxit; ++it) {
    qp.gradient(g);
    qp.kkt_step(g, d);

    double dmax = 0.0;
    for (int j = 0; j < n; ++j) dmax = std::max(dmax, std::fabs(d[j]));
    const double xscale = [&] {
      double s = 1.0;
      for (int j = 0; j < n; ++j) s = std::max(s, std::fabs(qp.x[j]));
      return s;
    }();

    if (dmax <= 1e-11 * xscale) {
      // multiplier check on the active bounds
      double gscale = 1.0;
      for (int j = 0; j < n; ++j) gscale = std::max(gscale, std::fabs(g[j]));
      const double mtol = 1e-9 * gscale;
      int release = -1;
      double worst = mtol;
      for (int j = 0; j < n; ++j) {
        if (qp.lo[j] == qp.hi[j]) continue;
        if (cooldown[j] >= it) continue;
        double lam = g[j];
        for (int r = 0; r < k; ++r) {
          for (int t = qp.g_start[r]; t < qp.g_start[r + 1]; ++t)
            if (qp.g_col[t] == j) lam += qp.g_val[t] * qp.mu[r];
        }
        if (qp.at_lo[j] && -lam > worst) {
          worst = -lam;
          release = j;
        } else if (qp.at_hi[j] && lam > worst) {
          worst = lam;
          release = j;
        }
      }
      if (release < 0) {
        converged = true;
        break;
      }
      qp.at_lo[release] = qp.at_hi[release] = 0;
      cooldown[release] = it + 2;
      continue;
    }

    // ratio test against the bounds of free variables
    double alpha = 1.0;
    int blocker = -1;
    bool block_hi = false;
    for (int j = 0; j < n; ++j) {
      if (!qp.is_free(j) || d[j] == 0.0) continue;
      if (d[j] > 0 && std::isfinite(qp.hi[j])) {
        const double a = (qp.hi[j] - qp.x[j]) / d[j];
        if (a < alpha - 1e-15) {
          alpha = std::max(0.0, a);
          blocker = j;
          block_hi = true;
        }
      } else if (d[j] < 0 && std::isfinite(qp.lo[j])) {
        const double a = (qp.lo[j] - qp.x[j]) / d[j];
        if (a < alpha - 1e-15) {
          alpha = std::max(0.0, a);
          blocker = j;
          block_hi = false;
        }
      }
    }
    for (int j = 0; j < n; ++j) qp.x[j] += alpha * d[j];
    if (blocker >= 0) {
      qp.x[blocker] = block_hi ? qp.hi[blocker] : qp.lo[blocker];
      (block_hi ? qp.at_hi : qp.at_lo)[blocker] = 1;
    }
  }

  if (!converged) {
    // accept only if the KKT residual is already tiny
    qp.gradient(g);
    qp.kkt_step(g, d);
    double dmax = 0.0;
    for (int j = 0; j < n; ++j) dmax = std::max(dmax, std::fabs(d[j]));
    if (dmax > 1e-6) {
      throw Error(Errc::kNumericalFailure, "QP active-set loop stalled");
    }
  }

  OptSolution out;
  out.status = SolveStatus::kOptimal;
  out.has_solution = true;
  out.x.assign(qp.x.begin(), qp.x.begin() + n0);
  out.objective = model.objective_value(out.x);
  out.best_bound = out.objective;
  out.duals.assign(k, 0.0);
  for (int r = 0; r < k; ++r) out.duals[r] = -qp.mu[r];
  return out;
}

}  // namespace matchforge::backend
