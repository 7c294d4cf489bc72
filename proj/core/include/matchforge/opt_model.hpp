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

#ifndef MATCHFORGE_OPT_MODEL_HPP_
#define MATCHFORGE_OPT_MODEL_HPP_

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "matchforge/errors.hpp"

namespace matchforge {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { kContinuous, kBinary };
enum class Relation { kLe, kGe, kEq };
enum class Sense { kMinimize, kMaximize };

enum class RowKind {
  kNormal,
  // Enforced on every reported solution; kept out of relaxations until a
  // candidate violates one. Sound because dropping rows only relaxes.
  kLazy,
  // Must be valid for every integer-feasible point of the model; used to
  // tighten relaxations and otherwise redundant.
  kCut,
};

struct LinearTerm {
  int var;
  double coef;
};

// Solver-agnostic model: continuous/binary variables, linear constraints,
// and an objective that is linear plus optional squared-deviation terms
// sum_k w_k * (e_k . x - f_k)^2 (convex for w_k >= 0).
class OptModel {
 public:
  struct Var {
    std::string name;
    VarKind kind = VarKind::kContinuous;
    double lo = 0.0;
    double hi = kInf;
    double obj = 0.0;
    int branch_priority = 0;
  };
  struct Row {
    std::string name;
    std::vector<LinearTerm> terms;
    Relation rel = Relation::kLe;
    double rhs = 0.0;
    RowKind kind = RowKind::kNormal;
    // Cuts sharing a group are near-duplicates; the separator activates at
    // most one per group per round. -1 means ungrouped.
    int cut_group = -1;
  };
  struct SquaredTerm {
    double weight = 0.0;
    std::vector<LinearTerm> expr;
    double target = 0.0;
  };
  // Given a candidate with integral binaries, may overwrite auxiliary
  // variable entries with consistent values. Returns false to decline.
  using Completion = std::function<bool(std::vector<double>&)>;

  int add_var(const std::string& name, VarKind kind, double lo, double hi,
              double obj = 0.0);
  int add_binary(const std::string& name, double obj = 0.0) {
    return add_var(name, VarKind::kBinary, 0.0, 1.0, obj);
  }
  void set_sense(Sense sense) { sense_ = sense; }
  void set_objective_offset(double offset) { obj_offset_ = offset; }
  void set_var_bounds(int var, double lo, double hi);
  void set_var_objective(int var, double obj) { vars_[var].obj = obj; }
  void set_branch_priority(int var, int priority);

  int add_row(const std::string& name, std::vector<LinearTerm> terms,
              Relation rel, double rhs, RowKind kind = RowKind::kNormal,
              int cut_group = -1);

  void add_squared_deviation(double weight, std::vector<LinearTerm> expr,
                             double target);

  void set_warm_start(std::vector<double> x) { warm_start_ = std::move(x); }
  void set_completion(Completion fn) { completion_ = std::move(fn); }

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const Var& var(int v) const { return vars_[v]; }
  const Row& row(int r) const { return rows_[r]; }
  const std::vector<Var>& vars() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<SquaredTerm>& squared_terms() const { return squared_; }
  Sense sense() const { return sense_; }
  double objective_offset() const { return obj_offset_; }
  const std::vector<double>& warm_start() const { return warm_start_; }
  const Completion& completion() const { return completion_; }
  bool has_integer_vars() const { return num_binary_ > 0; }
  bool has_quadratic_objective() const { return !squared_.empty(); }

  // Linear-plus-quadratic objective of a point, in the model's sense.
  double objective_value(const std::vector<double>& x) const;
  double row_activity(int r, const std::vector<double>& x) const;
  // Violation of row r at x (0 when satisfied).
  double row_violation(int r, const std::vector<double>& x) const;

  // Throws kMalformedModel on duplicate names, bad variable references,
  // inverted bounds, or negative squared-term weights.
  void check_well_formed() const;

 private:
  std::vector<Var> vars_;
  std::vector<Row> rows_;
  std::vector<SquaredTerm> squared_;
  Sense sense_ = Sense::kMinimize;
  double obj_offset_ = 0.0;
  int num_binary_ = 0;
  std::vector<double> warm_start_;
  Completion completion_;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kTimeLimit };

const char* solve_status_name(SolveStatus status);

struct SolveLimits {
  double time_limit_sec = kInf;
  double rel_gap = 1e-6;
};

struct OptSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  bool has_solution = false;
  std::vector<double> x;
  // Row duals as d(objective)/d(rhs) in the model's sense; populated only
  // for all-continuous linear models with status kOptimal.
  std::vector<double> duals;
  double objective = 0.0;
  double best_bound = 0.0;
  double wall_time_sec = 0.0;
};

// Solves with the backend selected by MATCHFORGE_BACKEND (default
// "builtin"). Throws kBackendUnavailable for unknown backends and
// kMalformedModel for models the backend cannot represent.
OptSolution solve(const OptModel& model, const SolveLimits& limits = {});

// CPLEX-style LP-format dump for debugging; quadratic objective terms are
// expanded into the bracketed form.
void write_lp_format(const OptModel& model, const std::string& path);

}  // namespace matchforge

#endif  // MATCHFORGE_OPT_MODEL_HPP_
