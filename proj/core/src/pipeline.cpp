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

#include "matchforge/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "matchforge/blocking.hpp"
#include "matchforge/deferred_acceptance.hpp"
#include "matchforge/exact.hpp"
#include "matchforge/thread_pool.hpp"

namespace matchforge {

std::vector<WeightTriple> default_weight_grid() {
  static const double kLevels[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<WeightTriple> grid;
  for (double a : kLevels)
    for (double b : kLevels)
      for (double c : kLevels) {
        if (a == 0.0 && b == 0.0 && c == 0.0) continue;
        grid.push_back({a, b, c});
      }
  return grid;
}

namespace {

void check_target(const ForwardTarget& target) {
  if (target.travel.has_value() == target.couples.has_value()) {
    throw Error(Errc::kUsage,
                "exactly one of travel/couples target must be set");
  }
}

bool weights_less(const WeightTriple& a, const WeightTriple& b) {
  if (a.stability != b.stability) return a.stability < b.stability;
  if (a.applicant_pref != b.applicant_pref)
    return a.applicant_pref < b.applicant_pref;
  return a.program_pref < b.program_pref;
}

std::string weights_str(const WeightTriple& w) {
  return format_g6(w.stability) + "/" + format_g6(w.applicant_pref) + "/" +
         format_g6(w.program_pref);
}

}  // namespace

GridSearchResult grid_search_lambda(const ValidatedInstance& inst,
                                    const CostVector& cost,
                                    const ForwardTarget& target,
                                    int min_matched,
                                    const std::vector<WeightTriple>& grid,
                                    int jobs, double time_limit_sec) {
  check_target(target);
  if (grid.empty()) throw Error(Errc::kUsage, "weight grid is empty");

  std::vector<GridPoint> points(grid.size());
  parallel_for(static_cast<int>(grid.size()), jobs, [&](int t) {
    GridPoint& pt = points[t];
    pt.weights = grid[t];
    try {
      ForwardOptions opts;
      opts.time_limit_sec = time_limit_sec;
      Matching m =
          target.travel.has_value()
              ? solve_school(inst, cost, grid[t], min_matched, *target.travel,
                             opts)
              : solve_residency(inst, cost, grid[t], min_matched,
                                *target.couples, opts);
      pt.bp_count = count_blocking(inst, m);
      pt.bp_pct = inst.num_pairs() > 0
                      ? static_cast<double>(pt.bp_count) / inst.num_pairs()
                      : 0.0;
      pt.travel = total_travel(inst, m);
      pt.matching = std::move(m);
      pt.ok = true;
    } catch (const Error& e) {
      pt.error = e.what();
    }
  });

  int best = -1;
  for (int t = 0; t < static_cast<int>(points.size()); ++t) {
    if (!points[t].ok) continue;
    if (best < 0) {
      best = t;
      continue;
    }
    const GridPoint& a = points[t];
    const GridPoint& b = points[best];
    if (a.bp_count != b.bp_count) {
      if (a.bp_count < b.bp_count) best = t;
    } else if (a.travel != b.travel) {
      if (a.travel < b.travel) best = t;
    } else if (weights_less(a.weights, b.weights)) {
      best = t;
    }
  }
  if (best < 0) {
    throw Error(Errc::kAllInfeasible,
                "every grid point failed; first: " + points.front().error);
  }
  GridSearchResult out;
  out.weights = points[best].weights;
  out.matching = points[best].matching;
  out.points = std::move(points);
  return out;
}

Algo1Result run_algorithm1(const ValidatedInstance& inst,
                           const ForwardTarget& target,
                           const PipelineParams& params,
                           const Matching* x_ref) {
  check_target(target);
  Algo1Result out;
  out.reference = x_ref != nullptr ? *x_ref : student_proposing_da(inst);
  const int min_matched =
      params.min_matched.value_or(out.reference.matched_count());
  out.cost = recover_cost(inst, out.reference, default_prior(inst),
                          params.lambda_reg);
  const std::vector<WeightTriple> grid =
      params.grid.empty() ? default_weight_grid() : params.grid;
  GridSearchResult gs =
      grid_search_lambda(inst, out.cost, target, min_matched, grid,
                         params.jobs, params.time_limit_sec);
  out.weights = gs.weights;
  out.matching = std::move(gs.matching);
  out.metrics = compute_metrics(inst, out.matching, &out.reference);
  return out;
}

// ---- sweeps -----------------------------------------------------------------

namespace {

struct Baseline {
  Matching da;
  CostVector cost;
  MetricsReport metrics;
  int min_matched;
};

Baseline make_baseline(const ValidatedInstance& inst,
                       const PipelineParams& params) {
  Baseline b{student_proposing_da(inst), {}, {}, 0};
  b.cost = recover_cost(inst, b.da, default_prior(inst), params.lambda_reg);
  b.metrics = compute_metrics(inst, b.da);
  b.min_matched = params.min_matched.value_or(b.da.matched_count());
  return b;
}

}  // namespace

std::vector<TravelSweepRow> sweep_travel(const ValidatedInstance& inst,
                                         const std::vector<double>& targets,
                                         const PipelineParams& params) {
  const Baseline base = make_baseline(inst, params);
  const double da_avg = base.metrics.avg_travel_miles;
  const std::vector<WeightTriple> grid =
      params.grid.empty() ? default_weight_grid() : params.grid;

  std::vector<TravelSweepRow> rows;
  {
    TravelSweepRow r;
    r.method = "da";
    r.target = base.metrics.total_travel;
    r.matched = base.metrics.matched_count;
    r.avg_travel = da_avg;
    r.travel_reduction_pct = 0.0;
    r.bp_count = base.metrics.bp_count;
    r.bp_pct = base.metrics.bp_pct;
    rows.push_back(r);
  }
  for (double target : targets) {
    TravelSweepRow r;
    r.method = "inverse";
    r.target = target;
    try {
      ForwardTarget ft;
      ft.travel = target;
      GridSearchResult gs =
          grid_search_lambda(inst, base.cost, ft, base.min_matched, grid,
                             params.jobs, params.time_limit_sec);
      MetricsReport m = compute_metrics(inst, gs.matching, &base.da);
      r.matched = m.matched_count;
      r.avg_travel = m.avg_travel_miles;
      r.travel_reduction_pct = m.travel_reduction_pct;
      r.bp_count = m.bp_count;
      r.bp_pct = m.bp_pct;
      r.weights = gs.weights;
    } catch (const Error& e) {
      r.ok = false;
      r.error = e.what();
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

Table travel_sweep_table(const std::vector<TravelSweepRow>& rows) {
  Table t;
  t.columns = {"method",        "target_travel", "status",
               "matched",       "avg_travel",    "travel_reduction_pct",
               "bp_count",      "bp_pct",        "w_stability",
               "w_applicant",   "w_program"};
  for (const auto& r : rows) {
    t.rows.push_back({r.method, format_g6(r.target),
                      r.ok ? "ok" : "error:" + r.error,
                      std::to_string(r.matched), format_g6(r.avg_travel),
                      format_g6(r.travel_reduction_pct),
                      std::to_string(r.bp_count), format_g6(r.bp_pct),
                      format_g6(r.weights.stability),
                      format_g6(r.weights.applicant_pref),
                      format_g6(r.weights.program_pref)});
  }
  return t;
}

std::vector<MatchedSweepRow> sweep_min_matched(
    const ValidatedInstance& inst, const std::vector<int>& matched_targets,
    const PipelineParams& params) {
  const Baseline base = make_baseline(inst, params);
  const std::vector<WeightTriple> grid =
      params.grid.empty() ? default_weight_grid() : params.grid;
  const double travel_cap = base.metrics.total_travel;

  std::vector<MatchedSweepRow> rows;
  {
    MatchedSweepRow r;
    r.method = "da";
    r.target_matched = base.da.matched_count();
    r.matched = base.da.matched_count();
    r.avg_travel = base.metrics.avg_travel_miles;
    r.bp_count = base.metrics.bp_count;
    r.bp_pct = base.metrics.bp_pct;
    rows.push_back(r);
  }
  for (int target : matched_targets) {
    MatchedSweepRow r;
    r.method = "inverse";
    r.target_matched = target;
    try {
      ForwardTarget ft;
      ft.travel = travel_cap;
      GridSearchResult gs = grid_search_lambda(
          inst, base.cost, ft, target, grid, params.jobs, params.time_limit_sec);
      MetricsReport m = compute_metrics(inst, gs.matching, &base.da);
      r.matched = m.matched_count;
      r.avg_travel = m.avg_travel_miles;
      r.bp_count = m.bp_count;
      r.bp_pct = m.bp_pct;
      r.weights = gs.weights;
    } catch (const Error& e) {
      r.ok = false;
      r.error = e.what();
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

Table matched_sweep_table(const std::vector<MatchedSweepRow>& rows) {
  Table t;
  t.columns = {"method",   "target_matched", "status",     "matched",
               "avg_travel", "bp_count",     "bp_pct",     "w_stability",
               "w_applicant", "w_program"};
  for (const auto& r : rows) {
    t.rows.push_back({r.method, std::to_string(r.target_matched),
                      r.ok ? "ok" : "error:" + r.error,
                      std::to_string(r.matched), format_g6(r.avg_travel),
                      std::to_string(r.bp_count), format_g6(r.bp_pct),
                      format_g6(r.weights.stability),
                      format_g6(r.weights.applicant_pref),
                      format_g6(r.weights.program_pref)});
  }
  return t;
}

std::vector<CoupleSweepRow> sweep_couples(const ValidatedInstance& inst,
                                          const std::vector<int>& targets,
                                          const PipelineParams& params) {
  const Baseline base = make_baseline(inst, params);
  const std::vector<WeightTriple> grid =
      params.grid.empty() ? default_weight_grid() : params.grid;

  std::vector<CoupleSweepRow> rows;
  {
    CoupleSweepRow r;
    r.method = "da";
    r.target_couples = base.metrics.couples_same_location;
    r.matched = base.da.matched_count();
    r.couples_same_location = base.metrics.couples_same_location;
    r.bp_count = base.metrics.bp_count;
    r.bp_pct = base.metrics.bp_pct;
    rows.push_back(r);
  }
  for (int target : targets) {
    CoupleSweepRow r;
    r.method = "inverse";
    r.target_couples = target;
    try {
      ForwardTarget ft;
      ft.couples = target;
      GridSearchResult gs = grid_search_lambda(
          inst, base.cost, ft, base.min_matched, grid, params.jobs,
          params.time_limit_sec);
      MetricsReport m = compute_metrics(inst, gs.matching, &base.da);
      r.matched = m.matched_count;
      r.couples_same_location = m.couples_same_location;
      r.bp_count = m.bp_count;
      r.bp_pct = m.bp_pct;
      r.weights = gs.weights;
    } catch (const Error& e) {
      r.ok = false;
      r.error = e.what();
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

Table couple_sweep_table(const std::vector<CoupleSweepRow>& rows) {
  Table t;
  t.columns = {"method",  "target_couples", "status",
               "matched", "couples_same_location", "bp_count",
               "bp_pct",  "w_stability",    "w_applicant", "w_program"};
  for (const auto& r : rows) {
    t.rows.push_back({r.method, std::to_string(r.target_couples),
                      r.ok ? "ok" : "error:" + r.error,
                      std::to_string(r.matched),
                      std::to_string(r.couples_same_location),
                      std::to_string(r.bp_count), format_g6(r.bp_pct),
                      format_g6(r.weights.stability),
                      format_g6(r.weights.applicant_pref),
                      format_g6(r.weights.program_pref)});
  }
  return t;
}

std::vector<CompareRow> compare_exact_inverse(
    const ValidatedInstance& inst, const std::vector<long long>& budgets,
    const PipelineParams& params, double exact_time_limit_sec) {
  const Baseline base = make_baseline(inst, params);
  const std::vector<WeightTriple> grid =
      params.grid.empty() ? default_weight_grid() : params.grid;

  std::vector<long long> order(budgets.begin(), budgets.end());
  std::sort(order.begin(), order.end());

  std::vector<CompareRow> rows;
  std::optional<Matching> chain;  // warm start across nested budgets
  for (long long budget : order) {
    CompareRow row;
    row.budget = budget;
    try {
      ExactOptions opts;
      opts.time_limit_sec = exact_time_limit_sec;
      if (chain.has_value()) opts.warm_start = chain;
      ExactResult ex = solve_exact(inst, budget, base.min_matched, opts);
      row.exact_ok = true;
      row.exact_time_limit = ex.time_limit_hit;
      row.exact_travel = ex.travel;
      row.exact_bp_count = ex.blocking.count;
      row.exact_bp_pct = ex.blocking.pct_of_admissible;
      chain = ex.matching;
    } catch (const Error& e) {
      row.exact_error = e.what();
    }
    if (row.exact_ok) {
      try {
        ForwardTarget ft;
        ft.travel = row.exact_travel;
        GridSearchResult gs = grid_search_lambda(
            inst, base.cost, ft, base.min_matched, grid, params.jobs,
            params.time_limit_sec);
        MetricsReport m = compute_metrics(inst, gs.matching, &base.da);
        row.inverse_ok = true;
        row.inverse_travel = m.total_travel;
        row.inverse_bp_count = m.bp_count;
        row.inverse_bp_pct = m.bp_pct;
        row.inverse_weights = gs.weights;
      } catch (const Error& e) {
        row.inverse_error = e.what();
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Table compare_table(const std::vector<CompareRow>& rows) {
  Table t;
  t.columns = {"budget",          "exact_status",   "exact_travel",
               "exact_bp_count",  "exact_bp_pct",   "inverse_status",
               "inverse_travel",  "inverse_bp_count", "inverse_bp_pct",
               "gap_bp_pct",      "w_stability",    "w_applicant",
               "w_program"};
  for (const auto& r : rows) {
    std::string exact_status = r.exact_ok
                                   ? (r.exact_time_limit ? "time_limit" : "ok")
                                   : "error:" + r.exact_error;
    std::string inverse_status =
        r.inverse_ok ? "ok"
                     : (r.inverse_error.empty() ? "skipped"
                                                : "error:" + r.inverse_error);
    t.rows.push_back(
        {std::to_string(r.budget), exact_status, format_g6(r.exact_travel),
         std::to_string(r.exact_bp_count), format_g6(r.exact_bp_pct),
         inverse_status, format_g6(r.inverse_travel),
         std::to_string(r.inverse_bp_count), format_g6(r.inverse_bp_pct),
         format_g6(r.inverse_bp_pct - r.exact_bp_pct),
         format_g6(r.inverse_weights.stability),
         format_g6(r.inverse_weights.applicant_pref),
         format_g6(r.inverse_weights.program_pref)});
  }
  return t;
}

}  // namespace matchforge
