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
// Internal LP machinery shared by the LP/MIP/QP paths. Not installed.

#ifndef MATCHFORGE_SRC_LP_CORE_HPP_
#define MATCHFORGE_SRC_LP_CORE_HPP_

#include <cstdint>
#include <vector>

#include "matchforge/opt_model.hpp"

namespace matchforge::lp {

// Column status codes for basis bookkeeping.
enum BasisStatus : signed char {
  kAtLower = 0,
  kAtUpper = 1,
  kBasic = 2,
  kFreeNonbasic = 3,  // both bounds infinite, parked at zero
};

// min c.x  s.t.  per-row a.x (<=, >=, =) rhs,  lo <= x <= hi.
// Rows are stored sparsely per row.
struct LpProblem {
  int num_vars = 0;
  std::vector<double> c;
  std::vector<double> lo, hi;
  std::vector<int> row_start{0};
  std::vector<int> cols;
  std::vector<double> vals;
  std::vector<Relation> rel;
  std::vector<double> rhs;

  int num_rows() const { return static_cast<int>(rel.size()); }
  void add_row(const std::vector<LinearTerm>& terms, Relation r, double b) {
    for (const LinearTerm& t : terms) {
      cols.push_back(t.var);
      vals.push_back(t.coef);
    }
    row_start.push_back(static_cast<int>(cols.size()));
    rel.push_back(r);
    rhs.push_back(b);
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterLimit };

struct LpResult {
  LpStatus status = LpStatus::kIterLimit;
  std::vector<double> x;        // structural values
  std::vector<double> duals;    // per row, d(obj)/d(rhs), minimize sense
  std::vector<double> reduced;  // structural reduced costs
  double objective = 0.0;
  long iterations = 0;
  // Status per column (structural then one slack per row), reusable as a
  // warm start after bound changes or row additions.
  std::vector<signed char> basis;
};

// Bounded-variable two-phase primal simplex with a dense LU of the basis,
// product-form eta updates, and periodic refactorization.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LpProblem& prob);

  // warm basis: column statuses from a previous solve of a problem with the
  // same columns; missing/extra rows get basic slacks. May be null.
  LpResult solve(const std::vector<signed char>* warm_basis = nullptr,
                 long iteration_limit = -1);

 private:
  struct Impl;
  const LpProblem& prob_;
};

}  // namespace matchforge::lp

#endif  // MATCHFORGE_SRC_LP_CORE_HPP_
