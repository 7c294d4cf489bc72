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

#ifndef MATCHFORGE_PIPELINE_HPP_
#define MATCHFORGE_PIPELINE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "matchforge/forward.hpp"
#include "matchforge/instance.hpp"
#include "matchforge/inverse.hpp"
#include "matchforge/metrics.hpp"

namespace matchforge {

// Target of the forward stage: a travel bound (school mode) or a
// co-location count (residency mode). Exactly one must be set.
struct ForwardTarget {
  std::optional<double> travel;
  std::optional<int> couples;
};

struct PipelineParams {
  std::optional<int> min_matched;  // default: reference matched count
  std::vector<WeightTriple> grid;  // default: default_weight_grid()
  double lambda_reg = 1.0;
  int jobs = 1;
  double time_limit_sec = 1e18;
};

// {0, 0.25, 0.5, 0.75, 1}^3 without the all-zero triple.
std::vector<WeightTriple> default_weight_grid();

struct GridPoint {
  WeightTriple weights;
  bool ok = false;
  std::string error;
  long long bp_count = 0;
  double bp_pct = 0.0;
  double travel = 0.0;
  Matching matching;
};

struct GridSearchResult {
  WeightTriple weights;
  Matching matching;
  std::vector<GridPoint> points;  // one per grid entry, in grid order
};

// Evaluates every weight triple and returns the one whose solution has the
// fewest oracle-counted blocking pairs (ties: lowest travel, then
// lexicographically smallest weights). Throws kAllInfeasible when no grid
// point yields a solution.
GridSearchResult grid_search_lambda(const ValidatedInstance& inst,
                                    const CostVector& cost,
                                    const ForwardTarget& target,
                                    int min_matched,
                                    const std::vector<WeightTriple>& grid,
                                    int jobs, double time_limit_sec);

struct Algo1Result {
  Matching matching;
  MetricsReport metrics;  // baseline = the reference stable matching
  WeightTriple weights;
  CostVector cost;
  Matching reference;  // step-1 stable matching
};

// Stable matching (deferred acceptance unless x_ref is supplied) ->
// cost recovery -> multi-objective assignment at the target.
Algo1Result run_algorithm1(const ValidatedInstance& inst,
                           const ForwardTarget& target,
                           const PipelineParams& params,
                           const Matching* x_ref = nullptr);

// ---- experiment harnesses -------------------------------------------------

struct TravelSweepRow {
  std::string method;  // "da" baseline or "inverse"
  double target = 0.0;
  bool ok = true;
  std::string error;
  int matched = 0;
  double avg_travel = 0.0;
  double travel_reduction_pct = 0.0;
  long long bp_count = 0;
  double bp_pct = 0.0;
  WeightTriple weights;
};
std::vector<TravelSweepRow> sweep_travel(const ValidatedInstance& inst,
                                         const std::vector<double>& targets,
                                         const PipelineParams& params);
Table travel_sweep_table(const std::vector<TravelSweepRow>& rows);

struct MatchedSweepRow {
  std::string method;
  int target_matched = 0;
  bool ok = true;
  std::string error;
  int matched = 0;
  double avg_travel = 0.0;
  long long bp_count = 0;
  double bp_pct = 0.0;
  WeightTriple weights;
};
// Travel fixed at the baseline's total travel while the required matched
// count varies.
std::vector<MatchedSweepRow> sweep_min_matched(
    const ValidatedInstance& inst, const std::vector<int>& matched_targets,
    const PipelineParams& params);
Table matched_sweep_table(const std::vector<MatchedSweepRow>& rows);

struct CoupleSweepRow {
  std::string method;
  int target_couples = 0;
  bool ok = true;
  std::string error;
  int matched = 0;
  int couples_same_location = 0;
  long long bp_count = 0;
  double bp_pct = 0.0;
  WeightTriple weights;
};
std::vector<CoupleSweepRow> sweep_couples(const ValidatedInstance& inst,
                                          const std::vector<int>& targets,
                                          const PipelineParams& params);
Table couple_sweep_table(const std::vector<CoupleSweepRow>& rows);

struct CompareRow {
  long long budget = 0;
  bool exact_ok = false;
  std::string exact_error;
  bool exact_time_limit = false;
  double exact_travel = 0.0;
  double exact_bp_pct = 0.0;
  long long exact_bp_count = 0;
  bool inverse_ok = false;
  std::string inverse_error;
  double inverse_travel = 0.0;
  double inverse_bp_pct = 0.0;
  long long inverse_bp_count = 0;
  WeightTriple inverse_weights;
};
// For each budget: exact minimum-travel solve, then the inverse pipeline at
// that travel target; blocking percentages always come from the oracle.
std::vector<CompareRow> compare_exact_inverse(const ValidatedInstance& inst,
                                              const std::vector<long long>& budgets,
                                              const PipelineParams& params,
                                              double exact_time_limit_sec);
Table compare_table(const std::vector<CompareRow>& rows);

}  // namespace matchforge

#endif  // MATCHFORGE_PIPELINE_HPP_
