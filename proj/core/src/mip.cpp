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
// Best-first branch & bound with depth-first plunging. Node relaxations are
// solved over a growing working set of rows: any dropped row keeps the node
// LP a relaxation, and rows enter as soon as a node solution violates them,
// so bounds stay valid and reported solutions satisfy the whole model.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <memory>
#include <queue>
#include <vector>

#include "backend_internal.hpp"
#include "lp_core.hpp"

namespace matchforge::backend {

namespace {

constexpr double kIntTol = 1e-6;
constexpr long kNodeLimit = 5'000'000;

struct Clock {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double limit;
  explicit Clock(double lim) : limit(lim) {}
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
  bool expired() const { return elapsed() >= limit; }
};

struct Node {
  long id = 0;
  double bound = -kInf;
  int depth = 0;
  int parent = -1;
  int branch_var = -1;
  double lo = 0.0, hi = 0.0;  // override for branch_var
  std::shared_ptr<std::vector<signed char>> basis;
};

struct Mip {
  const OptModel& model;
  const SolveLimits& limits;
  Clock clock;
  int n;
  bool maximize;
  std::vector<double> c;  // internal minimize costs
  std::vector<double> root_lo, root_hi;
  std::vector<char> is_int;

  std::vector<int> active;  // append-only working row set
  std::vector<char> is_active;

  std::deque<Node> nodes;
  std::vector<long> plunge;  // node ids (stack)
  std::priority_queue<std::pair<double, long>,
                      std::vector<std::pair<double, long>>,
                      std::greater<std::pair<double, long>>>
      open;

  double ub = kInf;  // internal sense
  std::vector<double> best_x;
  bool hit_time = false;
  long processed = 0;

  Mip(const OptModel& m, const SolveLimits& lim)
      : model(m), limits(lim), clock(lim.time_limit_sec), n(m.num_vars()),
        maximize(m.sense() == Sense::kMaximize) {
    c.resize(n);
    root_lo.resize(n);
    root_hi.resize(n);
    is_int.resize(n);
    for (int j = 0; j < n; ++j) {
      const auto& v = model.var(j);
      c[j] = maximize ? -v.obj : v.obj;
      root_lo[j] = v.lo;
      root_hi[j] = v.hi;
      is_int[j] = v.kind == VarKind::kBinary;
    }
    // Normal rows are always active. Cut rows form a separation pool and
    // enter when a node solution violates them. Lazy rows stay out of the
    // relaxations until an integral candidate violates one. Dropping rows
    // keeps every node LP a relaxation.
    is_active.assign(model.num_rows(), 0);
    for (int r = 0; r < model.num_rows(); ++r) {
      if (model.row(r).kind == RowKind::kNormal) activate(r);
    }
  }

  void activate(int r) {
    if (is_active[r]) return;
    is_active[r] = 1;
    active.push_back(r);
  }

  double gap_abs() const {
    return std::max(1e-9, limits.rel_gap * (1.0 + std::fabs(ub)));
  }

  double internal_obj(const std::vector<double>& x) const {
    double v = 0.0;
    for (int j = 0; j < n; ++j) v += c[j] * x[j];
    return v;
  }

  // ---- presolve: iterated bound tightening over every row ----------------
  bool tighten_bounds() {
    const double eps = 1e-9;
    for (int pass = 0; pass < 8; ++pass) {
      bool changed = false;
      for (int r = 0; r < model.num_rows(); ++r) {
        const auto& row = model.row(r);
        double minact = 0.0, maxact = 0.0;
        int min_inf = 0, max_inf = 0;
        for (const LinearTerm& t : row.terms) {
          const double lo = root_lo[t.var], hi = root_hi[t.var];
          if (t.coef > 0) {
            if (std::isfinite(lo)) minact += t.coef * lo; else ++min_inf;
            if (std::isfinite(hi)) maxact += t.coef * hi; else ++max_inf;
          } else if (t.coef < 0) {
            if (std::isfinite(hi)) minact += t.coef * hi; else ++min_inf;
            if (std::isfinite(lo)) maxact += t.coef * lo; else ++max_inf;
          }
        }
        const bool need_le = row.rel != Relation::kGe;  // a.x <= rhs side
        const bool need_ge = row.rel != Relation::kLe;  // a.x >= rhs side
        if (need_le && min_inf == 0 && minact > row.rhs + 1e-6) return false;
        if (need_ge && max_inf == 0 && maxact < row.rhs - 1e-6) return false;
        for (const LinearTerm& t : row.terms) {
          if (t.coef == 0.0) continue;
          const double lo = root_lo[t.var], hi = root_hi[t.var];
          if (need_le) {
            // rest of the row at its minimum
            double rest;
            bool ok;
            if (t.coef > 0) {
              ok = (min_inf == 0 && std::isfinite(lo)) ||
                   (min_inf == 1 && !std::isfinite(lo));
              rest = minact - (std::isfinite(lo) ? t.coef * lo : 0.0);
              if (ok) {
                double nb = (row.rhs - rest) / t.coef;
                if (is_int[t.var]) nb = std::floor(nb + kIntTol);
                if (nb < root_hi[t.var] - eps) {
                  root_hi[t.var] = nb;
                  changed = true;
                }
              }
            } else {
              ok = (min_inf == 0 && std::isfinite(hi)) ||
                   (min_inf == 1 && !std::isfinite(hi));
              rest = minact - (std::isfinite(hi) ? t.coef * hi : 0.0);
              if (ok) {
                double nb = (row.rhs - rest) / t.coef;
                if (is_int[t.var]) nb = std::ceil(nb - kIntTol);
                if (nb > root_lo[t.var] + eps) {
                  root_lo[t.var] = nb;
                  changed = true;
                }
              }
            }
          }
          if (need_ge) {
            double rest;
            bool ok;
            if (t.coef > 0) {
              ok = (max_inf == 0 && std::isfinite(hi)) ||
                   (max_inf == 1 && !std::isfinite(hi));
              rest = maxact - (std::isfinite(hi) ? t.coef * hi : 0.0);
              if (ok) {
                double nb = (row.rhs - rest) / t.coef;
                if (is_int[t.var]) nb = std::ceil(nb - kIntTol);
                if (nb > root_lo[t.var] + eps) {
                  root_lo[t.var] = nb;
                  changed = true;
                }
              }
            } else {
              ok = (max_inf == 0 && std::isfinite(lo)) ||
                   (max_inf == 1 && !std::isfinite(lo));
              rest = maxact - (std::isfinite(lo) ? t.coef * lo : 0.0);
              if (ok) {
                double nb = (row.rhs - rest) / t.coef;
                if (is_int[t.var]) nb = std::floor(nb + kIntTol);
                if (nb < root_hi[t.var] - eps) {
                  root_hi[t.var] = nb;
                  changed = true;
                }
              }
            }
          }
        }
      }
      for (int j = 0; j < n; ++j) {
        if (root_lo[j] > root_hi[j] + 1e-9) return false;
        if (root_lo[j] > root_hi[j]) root_lo[j] = root_hi[j];
      }
      if (!changed) break;
    }
    return true;
  }

  // ---- candidate handling -------------------------------------------------
  // Snap integer entries; returns false if any is too far from an integer.
  static bool snap_integers(const std::vector<char>& is_int,
                            std::vector<double>& x) {
    for (size_t j = 0; j < x.size(); ++j) {
      if (!is_int[j]) continue;
      const double r = std::round(x[j]);
      if (std::fabs(x[j] - r) > 1e-5) return false;
      x[j] = r;
    }
    return true;
  }

  bool verify_candidate(const std::vector<double>& x,
                        std::vector<int>* violated_rows) const {
    bool ok = true;
    for (int j = 0; j < n; ++j) {
      const auto& v = model.var(j);
      if (x[j] < v.lo - 1e-6 || x[j] > v.hi + 1e-6) return false;
      if (is_int[j] && std::fabs(x[j] - std::round(x[j])) > kIntTol) return false;
    }
    for (int r = 0; r < model.num_rows(); ++r) {
      const double tol = 1e-6 * std::max(1.0, std::fabs(model.row(r).rhs));
      if (model.row_violation(r, x) > tol) {
        ok = false;
        if (violated_rows) {
          if (!is_active[r]) violated_rows->push_back(r);
        } else {
          return false;
        }
      }
    }
    return ok;
  }

  void offer_incumbent(const std::vector<double>& x) {
    const double obj = internal_obj(x);
    if (obj < ub - 1e-12) {
      ub = obj;
      best_x = x;
    }
  }

  // ---- node LP ------------------------------------------------------------
  struct NodeLpOut {
    lp::LpStatus status;
    std::vector<double> x;
    double obj = 0.0;
    std::shared_ptr<std::vector<signed char>> basis;
  };

  NodeLpOut solve_node_lp(const std::vector<double>& lo,
                          const std::vector<double>& hi,
                          const std::vector<signed char>* warm) {
    lp::LpProblem prob;
    prob.num_vars = n;
    prob.c = c;
    prob.lo = lo;
    prob.hi = hi;
    for (int r : active) {
      prob.add_row(model.row(r).terms, model.row(r).rel, model.row(r).rhs);
    }
    lp::SimplexSolver solver(prob);
    lp::LpResult res = solver.solve(warm);
    if (res.status == lp::LpStatus::kIterLimit && warm != nullptr) {
      res = solver.solve(nullptr);
    }
    if (res.status == lp::LpStatus::kIterLimit) {
      res = solver.solve(nullptr, 400000L + 500L * static_cast<long>(active.size()));
    }
    if (res.status == lp::LpStatus::kIterLimit) {
      throw Error(Errc::kNumericalFailure, "node relaxation did not converge");
    }
    NodeLpOut out;
    out.status = res.status;
    out.x = std::move(res.x);
    out.obj = res.objective;
    out.basis = std::make_shared<std::vector<signed char>>(std::move(res.basis));
    return out;
  }

  void materialize_bounds(int node_id, std::vector<double>& lo,
                          std::vector<double>& hi) const {
    lo = root_lo;
    hi = root_hi;
    int cur = node_id;
    while (cur >= 0) {
      const Node& nd = nodes[cur];
      if (nd.branch_var >= 0) {
        lo[nd.branch_var] = std::max(lo[nd.branch_var], nd.lo);
        hi[nd.branch_var] = std::min(hi[nd.branch_var], nd.hi);
      }
      cur = nd.parent;
    }
  }

  // Returns true if the node produced children.
  bool process(long node_id) {
    std::vector<double> lo, hi;
    materialize_bounds(static_cast<int>(node_id), lo, hi);
    std::shared_ptr<std::vector<signed char>> warm = nodes[node_id].basis;

    NodeLpOut lpout;
    while (true) {
      if (clock.expired()) {
        hit_time = true;
        return false;
      }
      lpout = solve_node_lp(lo, hi, warm ? warm.get() : nullptr);
      if (lpout.status == lp::LpStatus::kInfeasible) return false;
      if (lpout.status == lp::LpStatus::kUnbounded) {
        // all-binary models are boxed; unbounded means continuous vars run
        // away without their rows active
        size_t before = active.size();
        for (int r = 0; r < model.num_rows(); ++r) activate(r);
        if (active.size() == before) {
          throw Error(Errc::kMalformedModel, "integer model is unbounded");
        }
        warm = nullptr;
        continue;
      }
      if (lpout.obj >= ub - gap_abs()) return false;

      // cut separation at the node solution; one representative per group
      std::vector<std::pair<double, int>> cuts;
      for (int r = 0; r < model.num_rows(); ++r) {
        if (is_active[r] || model.row(r).kind != RowKind::kCut) continue;
        const double v = model.row_violation(r, lpout.x);
        if (v > std::max(1e-4, row_tolerance(model, r)))
          cuts.push_back({-v, r});
      }
      if (!cuts.empty()) {
        std::sort(cuts.begin(), cuts.end());
        std::vector<char> group_used;
        int added = 0;
        for (const auto& [neg, r] : cuts) {
          const int g = model.row(r).cut_group;
          if (g >= 0) {
            if (g >= static_cast<int>(group_used.size()))
              group_used.resize(g + 1, 0);
            if (group_used[g]) continue;
            group_used[g] = 1;
          }
          activate(r);
          if (++added >= 200) break;
        }
        warm = lpout.basis;
        continue;
      }

      // completion heuristic: may turn a partially fractional point into a
      // full feasible candidate (bound unaffected)
      if (model.completion()) {
        std::vector<double> cand = lpout.x;
        if (model.completion()(cand) && verify_candidate(cand, nullptr)) {
          offer_incumbent(cand);
          if (lpout.obj >= ub - gap_abs()) return false;
        }
      }
      break;
    }

    // branching / integral handling
    int branch_var = -1;
    int best_prio = std::numeric_limits<int>::min();
    double best_frac_score = -1.0;
    for (int j = 0; j < n; ++j) {
      if (!is_int[j]) continue;
      const double f = lpout.x[j] - std::floor(lpout.x[j]);
      const double dist = std::min(f, 1.0 - f);
      if (dist <= kIntTol) continue;
      const int prio = model.var(j).branch_priority;
      const double score = 0.5 - std::fabs(f - 0.5);
      if (prio > best_prio ||
          (prio == best_prio && score > best_frac_score + 1e-12)) {
        best_prio = prio;
        best_frac_score = score;
        branch_var = j;
      }
    }

    if (branch_var < 0) {
      std::vector<double> raw = lpout.x;
      if (snap_integers(is_int, raw)) {
        std::vector<int> to_activate;
        if (verify_candidate(raw, &to_activate)) {
          offer_incumbent(raw);
          return false;
        }
        if (!to_activate.empty()) {
          for (int r : to_activate) activate(r);
          // reprocess this node with the new rows
          nodes[node_id].basis = lpout.basis;
          plunge.push_back(node_id);
          return true;
        }
      }
      // Rounding broke feasibility against already-active rows; the node
      // bound still protects correctness, so give up on this node only when
      // it cannot improve the incumbent.
      if (lpout.obj >= ub - gap_abs()) return false;
      throw Error(Errc::kNumericalFailure,
                  "integral relaxation point failed verification");
    }

    const double f = lpout.x[branch_var] - std::floor(lpout.x[branch_var]);
    Node down, up;
    down.parent = up.parent = static_cast<int>(node_id);
    down.depth = up.depth = nodes[node_id].depth + 1;
    down.bound = up.bound = lpout.obj;
    down.branch_var = up.branch_var = branch_var;
    down.lo = -kInf;
    down.hi = std::floor(lpout.x[branch_var]);
    up.lo = std::ceil(lpout.x[branch_var]);
    up.hi = kInf;
    down.basis = up.basis = lpout.basis;

    const bool up_first = f > 0.5;
    Node first = up_first ? up : down;
    Node second = up_first ? down : up;
    first.id = static_cast<long>(nodes.size());
    nodes.push_back(first);
    second.id = static_cast<long>(nodes.size());
    nodes.push_back(second);
    open.push({second.bound, second.id});
    plunge.push_back(first.id);
    return true;
  }

  OptSolution run() {
    OptSolution out;
    if (!tighten_bounds()) {
      out.status = SolveStatus::kInfeasible;
      return out;
    }
    if (!model.warm_start().empty() &&
        static_cast<int>(model.warm_start().size()) == n) {
      std::vector<double> cand = model.warm_start();
      if (snap_integers(is_int, cand) && verify_candidate(cand, nullptr)) {
        offer_incumbent(cand);
      }
    }

    Node root;
    root.id = 0;
    root.bound = -kInf;
    nodes.push_back(root);
    plunge.push_back(0);

    double open_min_bound = -kInf;
    while (!plunge.empty() || !open.empty()) {
      if (clock.expired()) {
        hit_time = true;
        break;
      }
      if (processed > kNodeLimit) {
        hit_time = true;
        break;
      }
      long id;
      if (!plunge.empty()) {
        id = plunge.back();
        plunge.pop_back();
      } else {
        auto [bound, nid] = open.top();
        open.pop();
        if (bound >= ub - gap_abs()) continue;
        id = nid;
      }
      ++processed;
      process(id);
      static const bool trace = std::getenv("MATCHFORGE_MIP_TRACE") != nullptr;
      if (trace && processed % 200 == 0) {
        std::fprintf(stderr,
                     "[mip] nodes=%ld open=%zu plunge=%zu lb=%.8g ub=%.8g "
                     "rows=%zu t=%.1fs\n",
                     processed, open.size(), plunge.size(),
                     open.empty() ? -kInf : open.top().first, ub,
                     active.size(), clock.elapsed());
      }
    }

    // best bound over remaining nodes
    open_min_bound = ub;
    if (hit_time) {
      while (!open.empty()) {
        open_min_bound = std::min(open_min_bound, open.top().first);
        break;  // heap top is the minimum
      }
      for (long id : plunge)
        open_min_bound = std::min(open_min_bound, nodes[id].bound);
    }

    if (!best_x.empty()) {
      out.has_solution = true;
      out.x = best_x;
      out.objective = (maximize ? -ub : ub) + model.objective_offset();
      out.best_bound =
          (maximize ? -open_min_bound : open_min_bound) + model.objective_offset();
      out.status = hit_time ? SolveStatus::kTimeLimit : SolveStatus::kOptimal;
    } else {
      out.status = hit_time ? SolveStatus::kTimeLimit : SolveStatus::kInfeasible;
    }
    return out;
  }
};

}  // namespace

OptSolution solve_mip(const OptModel& model, const SolveLimits& limits) {
  Mip mip(model, limits);
  return mip.run();
}

}  // namespace backend
