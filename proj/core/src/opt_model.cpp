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

#include "matchforge/opt_model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "backend_internal.hpp"
#include "lp_core.hpp"

namespace matchforge {

namespace {

// Merge duplicate variable references so rows are canonical.
std::vector<LinearTerm> canonical_terms(std::vector<LinearTerm> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const LinearTerm& a, const LinearTerm& b) { return a.var < b.var; });
  std::vector<LinearTerm> out;
  for (const LinearTerm& t : terms) {
    if (!out.empty() && out.back().var == t.var) {
      out.back().coef += t.coef;
    } else {
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace

int OptModel::add_var(const std::string& name, VarKind kind, double lo,
                      double hi, double obj) {
  Var v;
  v.name = name;
  v.kind = kind;
  if (kind == VarKind::kBinary) {
    lo = std::max(lo, 0.0);
    hi = std::min(hi, 1.0);
    ++num_binary_;
  }
  v.lo = lo;
  v.hi = hi;
  v.obj = obj;
  vars_.push_back(std::move(v));
  return static_cast<int>(vars_.size()) - 1;
}

void OptModel::set_var_bounds(int var, double lo, double hi) {
  vars_[var].lo = lo;
  vars_[var].hi = hi;
}

void OptModel::set_branch_priority(int var, int priority) {
  vars_[var].branch_priority = priority;
}

int OptModel::add_row(const std::string& name, std::vector<LinearTerm> terms,
                      Relation rel, double rhs, RowKind kind, int cut_group) {
  Row r;
  r.name = name;
  r.terms = canonical_terms(std::move(terms));
  r.rel = rel;
  r.rhs = rhs;
  r.kind = kind;
  r.cut_group = cut_group;
  rows_.push_back(std::move(r));
  return static_cast<int>(rows_.size()) - 1;
}

void OptModel::add_squared_deviation(double weight, std::vector<LinearTerm> expr,
                                     double target) {
  SquaredTerm t;
  t.weight = weight;
  t.expr = canonical_terms(std::move(expr));
  t.target = target;
  squared_.push_back(std::move(t));
}

double OptModel::objective_value(const std::vector<double>& x) const {
  double v = obj_offset_;
  for (int j = 0; j < num_vars(); ++j) v += vars_[j].obj * x[j];
  for (const SquaredTerm& t : squared_) {
    double e = -t.target;
    for (const LinearTerm& lt : t.expr) e += lt.coef * x[lt.var];
    v += t.weight * e * e;
  }
  return v;
}

double OptModel::row_activity(int r, const std::vector<double>& x) const {
  double a = 0.0;
  for (const LinearTerm& t : rows_[r].terms) a += t.coef * x[t.var];
  return a;
}

double OptModel::row_violation(int r, const std::vector<double>& x) const {
  const double a = row_activity(r, x);
  const Row& row = rows_[r];
  switch (row.rel) {
    case Relation::kLe: return std::max(0.0, a - row.rhs);
    case Relation::kGe: return std::max(0.0, row.rhs - a);
    case Relation::kEq: return std::fabs(a - row.rhs);
  }
  return 0.0;
}

void OptModel::check_well_formed() const {
  std::unordered_set<std::string> names;
  for (const Var& v : vars_) {
    if (!names.insert(v.name).second) {
      throw Error(Errc::kMalformedModel, "duplicate variable name '" + v.name + "'");
    }
    if (!(v.lo <= v.hi)) {
      throw Error(Errc::kMalformedModel, "inverted bounds on '" + v.name + "'");
    }
  }
  std::unordered_set<std::string> row_names;
  for (const Row& r : rows_) {
    if (!row_names.insert(r.name).second) {
      throw Error(Errc::kMalformedModel, "duplicate row name '" + r.name + "'");
    }
    for (const LinearTerm& t : r.terms) {
      if (t.var < 0 || t.var >= num_vars()) {
        throw Error(Errc::kMalformedModel,
                    "row '" + r.name + "' references an undeclared variable");
      }
      if (!std::isfinite(t.coef)) {
        throw Error(Errc::kMalformedModel,
                    "row '" + r.name + "' has a non-finite coefficient");
      }
    }
  }
  for (const SquaredTerm& t : squared_) {
    if (t.weight < 0.0) {
      throw Error(Errc::kMalformedModel, "squared-deviation weight must be >= 0");
    }
    for (const LinearTerm& lt : t.expr) {
      if (lt.var < 0 || lt.var >= num_vars()) {
        throw Error(Errc::kMalformedModel,
                    "squared term references an undeclared variable");
      }
    }
  }
}

const char* solve_status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "Optimal";
    case SolveStatus::kInfeasible: return "Infeasible";
    case SolveStatus::kUnbounded: return "Unbounded";
    case SolveStatus::kTimeLimit: return "TimeLimit";
  }
  return "Unknown";
}

OptSolution solve(const OptModel& model, const SolveLimits& limits) {
  const char* env = std::getenv("MATCHFORGE_BACKEND");
  std::string backend = env ? env : "builtin";
  if (backend != "builtin" && !backend.empty()) {
    throw Error(Errc::kBackendUnavailable, "unknown backend '" + backend + "'");
  }
  model.check_well_formed();

  const auto start = std::chrono::steady_clock::now();
  OptSolution out;
  if (model.has_quadratic_objective()) {
    if (model.has_integer_vars()) {
      throw Error(Errc::kMalformedModel,
                  "quadratic objectives require all-continuous models");
    }
    out = backend::solve_qp(model, limits);
  } else if (model.has_integer_vars()) {
    out = backend::solve_mip(model, limits);
  } else {
    for (int r = 0; r < model.num_rows(); ++r) {
      if (model.row(r).kind == RowKind::kCut) {
        throw Error(Errc::kMalformedModel,
                    "cut rows are only meaningful with integer variables");
      }
    }
    out = backend::solve_lp(model, limits);
  }
  out.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

namespace backend {

OptSolution solve_lp(const OptModel& model, const SolveLimits& limits) {
  (void)limits;
  const int n = model.num_vars();
  const int num_rows = model.num_rows();
  const bool maximize = model.sense() == Sense::kMaximize;

  std::vector<int> active;
  std::vector<char> is_active(num_rows, 0);
  // Equalities are almost always binding; seed the working set with them.
  for (int r = 0; r < num_rows; ++r) {
    if (model.row(r).rel == Relation::kEq || num_rows <= 400) {
      active.push_back(r);
      is_active[r] = 1;
    }
  }

  lp::LpResult res;
  std::vector<signed char> warm;
  bool have_warm = false;
  bool activated_all = false;
  while (true) {
    lp::LpProblem prob;
    prob.num_vars = n;
    prob.c.resize(n);
    prob.lo.resize(n);
    prob.hi.resize(n);
    for (int j = 0; j < n; ++j) {
      const auto& v = model.var(j);
      prob.c[j] = maximize ? -v.obj : v.obj;
      prob.lo[j] = v.lo;
      prob.hi[j] = v.hi;
    }
    for (int r : active) {
      prob.add_row(model.row(r).terms, model.row(r).rel, model.row(r).rhs);
    }
    lp::SimplexSolver solver(prob);
    res = solver.solve(have_warm ? &warm : nullptr);
    if (res.status == lp::LpStatus::kIterLimit) {
      if (have_warm) {  // retry cold once
        have_warm = false;
        continue;
      }
      throw Error(Errc::kNumericalFailure, "simplex did not converge");
    }
    if (res.status == lp::LpStatus::kInfeasible) {
      OptSolution out;
      out.status = SolveStatus::kInfeasible;
      return out;
    }
    if (res.status == lp::LpStatus::kUnbounded) {
      if (!activated_all && static_cast<int>(active.size()) < num_rows) {
        for (int r = 0; r < num_rows; ++r) {
          if (!is_active[r]) {
            active.push_back(r);
            is_active[r] = 1;
          }
        }
        activated_all = true;
        have_warm = false;
        continue;
      }
      OptSolution out;
      out.status = SolveStatus::kUnbounded;
      return out;
    }
    // optimal for the working set; pull in violated rows
    std::vector<std::pair<double, int>> violated;
    for (int r = 0; r < num_rows; ++r) {
      if (is_active[r]) continue;
      const double v = model.row_violation(r, res.x);
      if (v > row_tolerance(model, r)) violated.push_back({-v, r});
    }
    if (violated.empty()) break;
    std::sort(violated.begin(), violated.end());
    const int cap = 1000;
    for (int k = 0; k < static_cast<int>(violated.size()) && k < cap; ++k) {
      active.push_back(violated[k].second);
      is_active[violated[k].second] = 1;
    }
    warm = res.basis;
    have_warm = true;
  }

  OptSolution out;
  out.status = SolveStatus::kOptimal;
  out.has_solution = true;
  out.x = res.x;
  out.objective = (maximize ? -res.objective : res.objective) +
                  model.objective_offset();
  out.best_bound = out.objective;
  out.duals.assign(num_rows, 0.0);
  for (size_t k = 0; k < active.size(); ++k) {
    const double d = k < res.duals.size() ? res.duals[k] : 0.0;
    out.duals[active[k]] = maximize ? -d : d;
  }
  return out;
}

}  // namespace backend

}  // namespace matchforge
