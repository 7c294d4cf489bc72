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

#include "matchforge/exact.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "matchforge/deferred_acceptance.hpp"
#include "matchforge/opt_model.hpp"

namespace matchforge {

namespace {

// Variable layout inside the model.
struct Layout {
  int x0, z0, y0, r0, w0, a0;
  int num_pairs, num_applicants, num_programs;
  int x(PairIndex s) const { return x0 + s; }
  int z(ApplicantId i) const { return z0 + i; }
  int y(ProgramId j) const { return y0 + j; }
  int r(PairIndex s) const { return r0 + s; }
  int w(PairIndex s) const { return w0 + s; }
  int a(PairIndex s) const { return a0 + s; }
};

// Fill the indicator variables from an integral assignment part; the values
// chosen are the unique tight ones, so every linking row holds.
bool complete_indicators(const ValidatedInstance& inst, const Layout& ly,
                         std::vector<double>& v) {
  const int ni = inst.num_applicants();
  const int nj = inst.num_programs();
  for (PairIndex s = 0; s < inst.num_pairs(); ++s) {
    const double xv = v[ly.x(s)];
    if (std::fabs(xv - std::round(xv)) > 1e-6) return false;
    v[ly.x(s)] = std::round(xv);
  }
  std::vector<int> fill(nj, 0);
  std::vector<double> matched_p(ni, -1.0);
  for (PairIndex s = 0; s < inst.num_pairs(); ++s) {
    if (v[ly.x(s)] > 0.5) {
      ++fill[inst.pair_program(s)];
      matched_p[inst.pair_applicant(s)] = inst.pair_p(s);
    }
  }
  for (ApplicantId i = 0; i < ni; ++i)
    v[ly.z(i)] = matched_p[i] < 0.0 ? 1.0 : 0.0;
  for (ProgramId j = 0; j < nj; ++j)
    v[ly.y(j)] = fill[j] < inst.capacity(j) ? 1.0 : 0.0;
  // per-program utility of the worst admitted applicant
  std::vector<double> minq(nj, kInf);
  for (PairIndex s = 0; s < inst.num_pairs(); ++s) {
    if (v[ly.x(s)] > 0.5) {
      ProgramId j = inst.pair_program(s);
      minq[j] = std::min(minq[j], inst.pair_q(s));
    }
  }
  for (PairIndex s = 0; s < inst.num_pairs(); ++s) {
    const ApplicantId i = inst.pair_applicant(s);
    const ProgramId j = inst.pair_program(s);
    const double r =
        (matched_p[i] < 0.0 || matched_p[i] < inst.pair_p(s)) ? 1.0 : 0.0;
    const double w =
        (fill[j] < inst.capacity(j) ||
         (fill[j] > 0 && minq[j] < inst.pair_q(s)))
            ? 1.0
            : 0.0;
    v[ly.r(s)] = r;
    v[ly.w(s)] = w;
    v[ly.a(s)] = (r > 0.5 && w > 0.5) ? 1.0 : 0.0;
  }
  return true;
}

}  // namespace

ExactResult solve_exact(const ValidatedInstance& inst, long long budget,
                        int min_matched, const ExactOptions& options) {
  const int ni = inst.num_applicants();
  const int nj = inst.num_programs();
  const PairIndex ns = inst.num_pairs();

  if (budget < 0) throw Error(Errc::kInfeasibleBudget, "budget must be >= 0");
  if (min_matched > std::min<long long>(ni, inst.total_capacity())) {
    throw Error(Errc::kInfeasibleBudget,
                "min_matched " + std::to_string(min_matched) +
                    " exceeds what any matching can reach");
  }
  if (ns > options.pair_cap) {
    throw Error(Errc::kModelTooLarge,
                "instance has " + std::to_string(ns) +
                    " admissible pairs; cap is " +
                    std::to_string(options.pair_cap));
  }

  OptModel model;
  Layout ly;
  ly.num_pairs = ns;
  ly.num_applicants = ni;
  ly.num_programs = nj;
  ly.x0 = 0;
  for (PairIndex s = 0; s < ns; ++s)
    model.add_binary("x_" + std::to_string(s), inst.pair_distance(s));
  ly.z0 = model.num_vars();
  for (ApplicantId i = 0; i < ni; ++i)
    model.add_binary("z_" + std::to_string(i));
  ly.y0 = model.num_vars();
  for (ProgramId j = 0; j < nj; ++j)
    model.add_binary("y_" + std::to_string(j));
  ly.r0 = model.num_vars();
  for (PairIndex s = 0; s < ns; ++s)
    model.add_binary("r_" + std::to_string(s));
  ly.w0 = model.num_vars();
  for (PairIndex s = 0; s < ns; ++s)
    model.add_binary("w_" + std::to_string(s));
  ly.a0 = model.num_vars();
  for (PairIndex s = 0; s < ns; ++s)
    model.add_binary("a_" + std::to_string(s));

  for (PairIndex s = 0; s < ns; ++s) model.set_branch_priority(ly.x(s), 10);
  for (PairIndex s = 0; s < ns; ++s) model.set_branch_priority(ly.a(s), 5);

  // z_i = 1 - sum of i's assignments
  for (ApplicantId i = 0; i < ni; ++i) {
    std::vector<LinearTerm> terms{{ly.z(i), 1.0}};
    for (PairIndex s : inst.pref_list(i)) terms.push_back({ly.x(s), 1.0});
    model.add_row("stu_unmatched_" + std::to_string(i), std::move(terms),
                  Relation::kEq, 1.0, RowKind::kLazy);
  }
  // y_j <= C_j - fill_j <= C_j y_j
  for (ProgramId j = 0; j < nj; ++j) {
    const double cj = inst.capacity(j);
    std::vector<LinearTerm> lhs{{ly.y(j), 1.0}};
    std::vector<LinearTerm> rhs{{ly.y(j), cj}};
    for (PairIndex s : inst.roster_list(j)) {
      lhs.push_back({ly.x(s), 1.0});
      rhs.push_back({ly.x(s), 1.0});
    }
    model.add_row("under_cap_ub_" + std::to_string(j), std::move(lhs),
                  Relation::kLe, cj);
    model.add_row("under_cap_lb_" + std::to_string(j), std::move(rhs),
                  Relation::kGe, cj);
  }
  // r_s = z_i + assignments of i to programs worse than s
  for (PairIndex s = 0; s < ns; ++s) {
    const ApplicantId i = inst.pair_applicant(s);
    std::vector<LinearTerm> terms{{ly.r(s), 1.0}, {ly.z(i), -1.0}};
    for (PairIndex k : inst.pref_list(i)) {
      if (inst.pair_p(k) < inst.pair_p(s)) terms.push_back({ly.x(k), -1.0});
    }
    model.add_row("stu_unhappy_" + std::to_string(s), std::move(terms),
                  Relation::kEq, 0.0, RowKind::kLazy);
  }
  // w_s >= y_j; w_s >= x_k for every admitted-below-i candidate k;
  // w_s <= y_j + sum of those x_k
  for (PairIndex s = 0; s < ns; ++s) {
    const ProgramId j = inst.pair_program(s);
    model.add_row("sch_unhappy_cap_" + std::to_string(s),
                  {{ly.w(s), 1.0}, {ly.y(j), -1.0}}, Relation::kGe, 0.0,
                  RowKind::kLazy);
    std::vector<LinearTerm> ub{{ly.w(s), 1.0}, {ly.y(j), -1.0}};
    int t = 0;
    for (PairIndex k : inst.roster_list(j)) {
      if (!(inst.pair_q(k) < inst.pair_q(s))) continue;
      model.add_row(
          "sch_unhappy_" + std::to_string(s) + "_" + std::to_string(t++),
          {{ly.w(s), 1.0}, {ly.x(k), -1.0}}, Relation::kGe, 0.0,
          RowKind::kLazy);
      ub.push_back({ly.x(k), -1.0});
    }
    model.add_row("sch_unhappy_ub_" + std::to_string(s), std::move(ub),
                  Relation::kLe, 0.0, RowKind::kLazy);
  }
  // blocking indicator and budget
  for (PairIndex s = 0; s < ns; ++s) {
    model.add_row("blocking_" + std::to_string(s),
                  {{ly.r(s), 1.0}, {ly.w(s), 1.0}, {ly.a(s), -1.0}},
                  Relation::kLe, 1.0, RowKind::kLazy);
  }
  {
    std::vector<LinearTerm> terms;
    for (PairIndex s = 0; s < ns; ++s) terms.push_back({ly.a(s), 1.0});
    model.add_row("blocking_number", std::move(terms), Relation::kLe,
                  static_cast<double>(budget));
  }
  // assignment polytope
  for (ApplicantId i = 0; i < ni; ++i) {
    std::vector<LinearTerm> terms;
    for (PairIndex s : inst.pref_list(i)) terms.push_back({ly.x(s), 1.0});
    model.add_row("unique_" + std::to_string(i), std::move(terms),
                  Relation::kLe, 1.0);
  }
  for (ProgramId j = 0; j < nj; ++j) {
    std::vector<LinearTerm> terms;
    for (PairIndex s : inst.roster_list(j)) terms.push_back({ly.x(s), 1.0});
    model.add_row("capacity_" + std::to_string(j), std::move(terms),
                  Relation::kLe, inst.capacity(j));
  }
  {
    std::vector<LinearTerm> terms;
    for (PairIndex s = 0; s < ns; ++s) terms.push_back({ly.x(s), 1.0});
    model.add_row("min_matched", std::move(terms), Relation::kGe,
                  static_cast<double>(min_matched));
  }
  // Strengthening cuts, one per pair: either i holds a program at least as
  // good as j, or j is filled with applicants it prefers to i, or (i, j) is
  // charged to the blocking budget. Valid for every integral solution of the
  // indicator system.
  for (PairIndex s = 0; s < ns; ++s) {
    const ApplicantId i = inst.pair_applicant(s);
    const ProgramId j = inst.pair_program(s);
    const double cj = inst.capacity(j);
    if (cj <= 0) continue;
    std::vector<LinearTerm> terms{{ly.a(s), cj}};
    for (PairIndex k : inst.pref_list(i)) {
      if (inst.pair_p(k) >= inst.pair_p(s)) terms.push_back({ly.x(k), cj});
    }
    for (PairIndex k : inst.roster_list(j)) {
      if (inst.pair_q(k) > inst.pair_q(s)) terms.push_back({ly.x(k), 1.0});
    }
    model.add_row("stab_cut_" + std::to_string(s), std::move(terms),
                  Relation::kGe, cj, RowKind::kCut, s);
  }
  // Unit-coefficient companions: admitting an applicant that j likes less
  // than i makes (i, j) blocking unless i holds something at least as good.
  for (PairIndex s = 0; s < ns; ++s) {
    const ApplicantId i = inst.pair_applicant(s);
    const ProgramId j = inst.pair_program(s);
    std::vector<LinearTerm> held{{ly.a(s), 1.0}};
    for (PairIndex k : inst.pref_list(i)) {
      if (inst.pair_p(k) >= inst.pair_p(s)) held.push_back({ly.x(k), 1.0});
    }
    int t = 0;
    for (PairIndex k : inst.roster_list(j)) {
      if (!(inst.pair_q(k) < inst.pair_q(s))) continue;
      std::vector<LinearTerm> terms = held;
      terms.push_back({ly.x(k), -1.0});
      model.add_row(
          "pref_cut_" + std::to_string(s) + "_" + std::to_string(t++),
          std::move(terms), Relation::kGe, 0.0, RowKind::kCut, s);
    }
  }

  model.set_completion([&inst, ly](std::vector<double>& v) {
    return complete_indicators(inst, ly, v);
  });

  // Initial incumbent: caller-provided matching, else deferred acceptance
  // (stable, hence feasible at any budget once it meets min_matched).
  auto matching_to_vector = [&](const Matching& m) {
    std::vector<double> v(model.num_vars(), 0.0);
    for (ApplicantId i = 0; i < ni; ++i) {
      ProgramId j = m.program_of(i);
      if (j == kNoProgram) continue;
      v[ly.x(inst.pair_index(i, j))] = 1.0;
    }
    complete_indicators(inst, ly, v);
    return v;
  };
  if (options.warm_start.has_value()) {
    model.set_warm_start(matching_to_vector(*options.warm_start));
  } else if (options.seed_with_da) {
    Matching da = student_proposing_da(inst);
    if (da.matched_count() >= min_matched) {
      model.set_warm_start(matching_to_vector(da));
    }
  }

  SolveLimits limits;
  limits.time_limit_sec = options.time_limit_sec;
  OptSolution sol = solve(model, limits);

  if (sol.status == SolveStatus::kInfeasible) {
    throw Error(Errc::kInfeasibleBudget,
                "no matching reaches " + std::to_string(min_matched) +
                    " assignments within " + std::to_string(budget) +
                    " blocking pairs");
  }
  if (!sol.has_solution) {
    throw Error(Errc::kTimeLimit, "time limit hit with no incumbent");
  }

  ExactResult out;
  out.time_limit_hit = sol.status == SolveStatus::kTimeLimit;
  out.best_bound = sol.best_bound;
  out.matching = Matching(ni, nj);
  for (PairIndex s = 0; s < ns; ++s) {
    if (sol.x[ly.x(s)] > 0.5) {
      out.matching.assign(inst.pair_applicant(s), inst.pair_program(s));
    }
  }
  out.travel = total_travel(inst, out.matching);
  out.blocking = count_blocking_pairs(inst, out.matching);
  if (out.blocking.count > budget) {
    throw Error(Errc::kNumericalFailure,
                "returned matching exceeds the blocking budget: " +
                    std::to_string(out.blocking.count) + " > " +
                    std::to_string(budget));
  }
  return out;
}

}  // namespace matchforge
