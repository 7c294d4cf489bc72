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

#ifndef MATCHFORGE_FORWARD_HPP_
#define MATCHFORGE_FORWARD_HPP_

#include <optional>

#include "matchforge/instance.hpp"
#include "matchforge/inverse.hpp"

namespace matchforge {

// Objective weights: recovered stability cost, applicant rank fraction,
// program rank fraction. Must not all be zero.
struct WeightTriple {
  double stability = 1.0;
  double applicant_pref = 0.0;
  double program_pref = 0.0;
};

struct ForwardOptions {
  double time_limit_sec = 1e18;
  std::optional<Matching> warm_start;
};

// minimize  stability * b.x - applicant_pref * rfA.x - program_pref * rfP.x
// s.t. one program per applicant, capacities, at least min_matched assigned,
// and total travel at most travel_target (pass kInf to drop the row).
// Throws kInfeasibleTarget when the target cuts off every matching.
Matching solve_school(const ValidatedInstance& inst, const CostVector& cost,
                      const WeightTriple& weights, int min_matched,
                      double travel_target, const ForwardOptions& options = {});

// Same objective; the travel row is replaced by a couples constraint: at
// least couples_target partner pairs co-assigned, linearized with one
// auxiliary variable per (couple, shared program).
Matching solve_residency(const ValidatedInstance& inst, const CostVector& cost,
                         const WeightTriple& weights, int min_matched,
                         int couples_target,
                         const ForwardOptions& options = {});

}  // namespace matchforge

#endif  // MATCHFORGE_FORWARD_HPP_
