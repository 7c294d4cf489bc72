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

#include "matchforge/forward.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "matchforge/opt_model.hpp"

namespace matchforge {

namespace {

void check_common(const ValidatedInstance& inst, const CostVector& cost,
                  const WeightTriple& w, int min_matched) {
  if (static_cast<PairIndex>(cost.b.size()) != inst.num_pairs()) {
    throw Error(Errc::kMalformedModel, "cost vector is not indexed by S");
  }
  if (w.stability == 0.0 && w.applicant_pref == 0.0 && w.program_pref == 0.0) {
    throw Error(Errc::kUsage, "objective weights must not all be zero");
  }
  if (min_matched >
      std::min<long long>(inst.num_applicants(), inst.total_capacity())) {
    throw Error(Errc::kInfeasibleTarget,
                "min_matched exceeds what any matching can reach");
  }
}

// Pair objective: stability cost against both rank-fraction rewards.
double pair_cost(const ValidatedInstance& inst, const CostVector& cost,
                 const WeightTriple& w, PairIndex s) {
  return w.stability * cost.b[s] -
         w.applicant_pref * inst.rank_fraction_applicant(s) -
         w.program_pref * inst.rank_fraction_program(s);
}

void add_assignment_rows(const ValidatedInstance& inst, OptModel& model,
                         int min_matched) {
  for (ApplicantId i = 0; i < inst.num_applicants(); ++i) {
    std::vector<LinearTerm> terms;
    for (PairIndex s : inst.pref_list(i)) terms.push_back({s, 1.0});
    if (!terms.empty()) {
      model.add_row("unique_" + std::to_string(i), std::move(terms),
                    Relation::kLe, 1.0);
    }
  }
  for (ProgramId j = 0; j < inst.num_programs(); ++j) {
    std::vector<LinearTerm> terms;
    for (PairIndex s : inst.roster_list(j)) terms.push_back({s, 1.0});
    if (!terms.empty()) {
      model.add_row("capacity_" + std::to_string(j), std::move(terms),
                    Relation::kLe, inst.capacity(j));
    }
  }
  if (min_matched > 0) {
    std::vector<LinearTerm> terms;
    for (PairIndex s = 0; s < inst.num_pairs(); ++s) terms.push_back({s, 1.0});
    model.add_row("min_matched", std::move(terms), Relation::kGe,
                  static_cast<double>(min_matched));
  }
}

void set_warm_from_matching(const ValidatedInstance& inst, OptModel& model,
                            const Matching& m, int extra_vars) {
  std::vector<double> v(inst.num_pairs() + extra_vars, 0.0);
  for (ApplicantId i = 0; i < inst.num_applicants(); ++i) {
    ProgramId j = m.program_of(i);
    if (j == kNoProgram) continue;
    v[inst.pair_index(i, j)] = 1.0;
  }
  model.set_warm_start(std::move(v));
}

Matching extract_matching(const ValidatedInstance& inst,
                          const std::vector<double>& x) {
  Matching m(inst.num_applicants(), inst.num_programs());
  for (PairIndex s = 0; s < inst.num_pairs(); ++s) {
    if (x[s] > 0.5) m.assign(inst.pair_applicant(s), inst.pair_program(s));
  }
  return m;
}

OptSolution run(OptModel& model, const ForwardOptions& options,
                const char* what) {
  SolveLimits limits;
  limits.time_limit_sec = options.time_limit_sec;
  OptSolution sol = solve(model, limits);
  if (sol.status == SolveStatus::kInfeasible) {
    throw Error(Errc::kInfeasibleTarget, std::string(what) +
                                             ": target cuts off every "
                                             "feasible matching");
  }
  if (!sol.has_solution) {
    throw Error(Errc::kTimeLimit,
                std::string(what) + ": time limit with no incumbent");
  }
  return sol;
}

}  // namespace

Matching solve_school(const ValidatedInstance& inst, const CostVector& cost,
                      const WeightTriple& weights, int min_matched,
                      double travel_target, const ForwardOptions& options) {
  check_common(inst, cost, weights, min_matched);

  OptModel model;
  for (PairIndex s = 0; s < inst.num_pairs(); ++s) {
    model.add_binary("x_" + std::to_string(s),
                     pair_cost(inst, cost, weights, s));
  }
  add_assignment_rows(inst, model, min_matched);
  if (std::isfinite(travel_target)) {
    std::vector<LinearTerm> terms;
    for (PairIndex s = 0; s < inst.num_pairs(); ++s) {
      terms.push_back({s, inst.pair_distance(s)});
    }
    model.add_row("travel_target", std::move(terms), Relation::kLe,
                  travel_target);
  }
  if (options.warm_start.has_value()) {
    set_warm_from_matching(inst, model, *options.warm_start, 0);
  }

  OptSolution sol = run(model, options, "school assignment");
  return extract_matching(inst, sol.x);
}

Matching solve_residency(const ValidatedInstance& inst, const CostVector& cost,
                         const WeightTriple& weights, int min_matched,
                         int couples_target, const ForwardOptions& options) {
  check_common(inst, cost, weights, min_matched);
  const auto& couples = inst.couple_pairs();
  if (couples_target > 0 && couples.empty()) {
    throw Error(Errc::kInfeasibleTarget,
                "couples target set on an instance without couples");
  }
  if (couples_target > static_cast<int>(couples.size())) {
    throw Error(Errc::kInfeasibleTarget,
                "couples target exceeds the number of couples");
  }

  OptModel model;
  for (PairIndex s = 0; s < inst.num_pairs(); ++s) {
    model.add_binary("x_" + std::to_string(s),
                     pair_cost(inst, cost, weights, s));
  }
  add_assignment_rows(inst, model, min_matched);

  // y_{c,j} = 1 iff both members of couple c sit at program j.
  struct CoupleVar {
    int var;
    PairIndex sa, sb;
  };
  std::vector<CoupleVar> couple_vars;
  if (couples_target > 0) {
    std::vector<LinearTerm> target_terms;
    for (size_t c = 0; c < couples.size(); ++c) {
      const ApplicantId a = couples[c][0];
      const ApplicantId b = couples[c][1];
      for (PairIndex sa : inst.pref_list(a)) {
        const ProgramId j = inst.pair_program(sa);
        const PairIndex sb = inst.pair_index(b, j);
        if (sb == kNoPair) continue;  // shared sets make this impossible
        const std::string tag =
            "c" + std::to_string(c) + "_p" + std::to_string(j);
        const int y = model.add_binary("y_" + tag);
        couple_vars.push_back({y, sa, sb});
        model.add_row("colocate_a_" + tag, {{y, 1.0}, {sa, -1.0}},
                      Relation::kLe, 0.0);
        model.add_row("colocate_b_" + tag, {{y, 1.0}, {sb, -1.0}},
                      Relation::kLe, 0.0);
        model.add_row("colocate_and_" + tag,
                      {{y, 1.0}, {sa, -1.0}, {sb, -1.0}}, Relation::kGe, -1.0);
        target_terms.push_back({y, 1.0});
      }
    }
    model.add_row("couples_target", std::move(target_terms), Relation::kGe,
                  static_cast<double>(couples_target));
  }

  if (options.warm_start.has_value()) {
    set_warm_from_matching(inst, model, *options.warm_start,
                           model.num_vars() - inst.num_pairs());
    // warm start vector needs consistent y values
    auto ws = model.warm_start();
    for (const CoupleVar& cv : couple_vars) {
      ws[cv.var] = (ws[cv.sa] > 0.5 && ws[cv.sb] > 0.5) ? 1.0 : 0.0;
    }
    model.set_warm_start(std::move(ws));
  }

  OptSolution sol = run(model, options, "residency assignment");

  // the linearization must be exact in any returned solution
  for (const CoupleVar& cv : couple_vars) {
    const double y = std::round(sol.x[cv.var]);
    const double prod = std::round(sol.x[cv.sa]) * std::round(sol.x[cv.sb]);
    if (y != prod) {
      throw Error(Errc::kNumericalFailure,
                  "couple linearization variable differs from the product");
    }
  }
  return extract_matching(inst, sol.x);
}

}  // namespace matchforge
