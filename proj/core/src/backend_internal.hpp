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
// Internal backend entry points. Not installed.

#ifndef MATCHFORGE_SRC_BACKEND_INTERNAL_HPP_
#define MATCHFORGE_SRC_BACKEND_INTERNAL_HPP_

#include <vector>

#include "matchforge/opt_model.hpp"

namespace matchforge::backend {

// Continuous linear path: primal simplex with row generation over a working
// subset (rows enter when the current point violates them; a point that is
// optimal for the working set and satisfies every row is optimal overall,
// inactive rows take zero duals).
OptSolution solve_lp(const OptModel& model, const SolveLimits& limits);

// Best-first branch & bound with plunging, working-set row generation,
// bound-tightening presolve, warm-started node LPs, and an optional
// caller-supplied completion heuristic for auxiliary variables.
OptSolution solve_mip(const OptModel& model, const SolveLimits& limits);

// Convex QP (linear + squared-deviation objective) via a primal active-set
// method on the bound constraints; general rows are converted to equalities
// with slack variables and handled in the KKT system.
OptSolution solve_qp(const OptModel& model, const SolveLimits& limits);

// Feasibility tolerance for row r at unit scale.
inline double row_tolerance(const OptModel& model, int r) {
  return 1e-7 * std::max(1.0, std::abs(model.row(r).rhs));
}

}  // namespace matchforge::backend

#endif  // MATCHFORGE_SRC_BACKEND_INTERNAL_HPP_
