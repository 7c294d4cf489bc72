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

#ifndef MATCHFORGE_EXACT_HPP_
#define MATCHFORGE_EXACT_HPP_

#include <optional>

#include "matchforge/blocking.hpp"
#include "matchforge/instance.hpp"

namespace matchforge {

struct ExactOptions {
  double time_limit_sec = 1e18;
  // Model-size guard: the formulation carries a row per (pair, preferred
  // applicant) combination and grows fast with |S|.
  int pair_cap = 5000;
  // Feasible matching used as an initial incumbent. When absent and the
  // deferred-acceptance matching is feasible (stable, so any budget works),
  // it seeds the search.
  std::optional<Matching> warm_start;
  bool seed_with_da = true;
};

struct ExactResult {
  Matching matching;
  // Recounted by the oracle, never read from solver variables.
  BlockingReport blocking;
  double travel = 0.0;
  bool time_limit_hit = false;
  double best_bound = 0.0;
};

// Minimum-travel assignment subject to matching at least min_matched
// applicants and creating at most `budget` blocking pairs, with the
// blocking-pair definition carried by binary indicator variables and their
// linking constraints. Throws kInfeasibleBudget when no matching satisfies
// the counts, kModelTooLarge over the pair cap, kTimeLimit when the limit
// expires with no incumbent.
ExactResult solve_exact(const ValidatedInstance& inst, long long budget,
                        int min_matched, const ExactOptions& options = {});

}  // namespace matchforge

#endif  // MATCHFORGE_EXACT_HPP_
