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
// The certificate constraints fix part of the solution outright: strong
// duality forces u_i = 0 for unmatched applicants and v_j = 0 for
// under-capacity programs (each term of the residual sum is sign-constrained),
// and support slackness pins b = u + v + w there. Writing off-support costs
// as b = u + v + w + s with a slack s >= 0 absorbs dual feasibility, which
// leaves a convex QP over (u, v, w, s) with sign bounds and the single
// normalization equality. Residuals are evaluated against the original
// constraint families after solving.

#include "matchforge/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "matchforge/opt_model.hpp"

namespace matchforge {

std::vector<double> default_prior(const ValidatedInstance& inst) {
  const PairIndex ns = inst.num_pairs();
  if (ns == 0) return {};
  return std::vector<double>(ns, 1.0 / static_cast<double>(ns));
}

CostVector recover_cost(const ValidatedInstance& inst, const Matching& x_ref,
                        const std::vector<double>& b_bar, double lambda_reg,
                        const InverseOptions& options) {
  require_feasible(inst, x_ref);
  const int ni = inst.num_applicants();
  const int nj = inst.num_programs();
  const PairIndex ns = inst.num_pairs();
  if (static_cast<PairIndex>(b_bar.size()) != ns) {
    throw Error(Errc::kMalformedModel, "prior size differs from |S|");
  }
  if (ns == 0) {
    throw Error(Errc::kInfeasibleInverse, "instance has no admissible pairs");
  }
  if (lambda_reg < 0) {
    throw Error(Errc::kMalformedModel, "lambda_reg must be >= 0");
  }
  const int n_matched = x_ref.matched_count();

  OptModel model;
  std::vector<int> u_var(ni, -1), v_var(nj, -1);
  for (ApplicantId i = 0; i < ni; ++i) {
    if (x_ref.is_matched(i)) {
      u_var[i] = model.add_var("u_" + std::to_string(i),
                               VarKind::kContinuous, -kInf, 0.0);
    }
  }
  for (ProgramId j = 0; j < nj; ++j) {
    if (x_ref.fill(j) >= inst.capacity(j)) {
      v_var[j] = model.add_var("v_" + std::to_string(j),
                               VarKind::kContinuous, -kInf, 0.0);
    }
  }
  const int w_var = model.add_var("w", VarKind::kContinuous, 0.0, kInf);
  std::vector<int> s_var(ns, -1);
  std::vector<char> on_support(ns, 0);
  for (PairIndex s = 0; s < ns; ++s) {
    const ApplicantId i = inst.pair_applicant(s);
    on_support[s] = x_ref.program_of(i) == inst.pair_program(s) ? 1 : 0;
    if (!on_support[s]) {
      s_var[s] = model.add_var("s_" + std::to_string(s), VarKind::kContinuous,
                               0.0, kInf);
    }
  }

  auto b_expr = [&](PairIndex s) {
    std::vector<LinearTerm> terms;
    const ApplicantId i = inst.pair_applicant(s);
    const ProgramId j = inst.pair_program(s);
    if (u_var[i] >= 0) terms.push_back({u_var[i], 1.0});
    if (v_var[j] >= 0) terms.push_back({v_var[j], 1.0});
    terms.push_back({w_var, 1.0});
    if (s_var[s] >= 0) terms.push_back({s_var[s], 1.0});
    return terms;
  };

  // normalization: sum of all pair costs equals one
  {
    std::vector<LinearTerm> terms;
    for (PairIndex s = 0; s < ns; ++s) {
      auto e = b_expr(s);
      terms.insert(terms.end(), e.begin(), e.end());
    }
    model.add_row("normalization", std::move(terms), Relation::kEq, 1.0);
  }

  // objective: support cost (dropped when lambda = 0, see header) plus the
  // squared deviation from the prior over every pair
  const bool projection_only = lambda_reg == 0.0;
  if (!projection_only) {
    // linear part: sum over support pairs of (u_i + v_j + w)
    std::vector<double> lin(model.num_vars(), 0.0);
    for (PairIndex s = 0; s < ns; ++s) {
      if (!on_support[s]) continue;
      for (const LinearTerm& t : b_expr(s)) lin[t.var] += t.coef;
    }
    for (int vidx = 0; vidx < model.num_vars(); ++vidx) {
      if (lin[vidx] != 0.0) model.set_var_objective(vidx, lin[vidx]);
    }
  }
  const double weight = projection_only ? 1.0 : lambda_reg;
  for (PairIndex s = 0; s < ns; ++s) {
    model.add_squared_deviation(weight, b_expr(s), b_bar[s]);
  }

  // feasible start: uniform costs via w alone
  {
    std::vector<double> x0(model.num_vars(), 0.0);
    x0[w_var] = 1.0 / static_cast<double>(ns);
    model.set_warm_start(std::move(x0));
  }

  SolveLimits limits;
  limits.time_limit_sec = options.time_limit_sec;
  OptSolution sol = solve(model, limits);
  if (sol.status == SolveStatus::kInfeasible) {
    throw Error(Errc::kInfeasibleInverse,
                "certificate system infeasible for the reference matching");
  }
  if (sol.status != SolveStatus::kOptimal) {
    throw Error(Errc::kNumericalFailure, "inverse solve did not converge");
  }

  CostVector cost;
  cost.lambda_reg = lambda_reg;
  cost.u.assign(ni, 0.0);
  cost.v.assign(nj, 0.0);
  for (ApplicantId i = 0; i < ni; ++i)
    if (u_var[i] >= 0) cost.u[i] = std::min(0.0, sol.x[u_var[i]]);
  for (ProgramId j = 0; j < nj; ++j)
    if (v_var[j] >= 0) cost.v[j] = std::min(0.0, sol.x[v_var[j]]);
  cost.w = std::max(0.0, sol.x[w_var]);
  cost.b.assign(ns, 0.0);
  for (PairIndex s = 0; s < ns; ++s) {
    const ApplicantId i = inst.pair_applicant(s);
    const ProgramId j = inst.pair_program(s);
    double b = cost.u[i] + cost.v[j] + cost.w;
    if (s_var[s] >= 0) b += std::max(0.0, sol.x[s_var[s]]);
    cost.b[s] = b;
  }

  // residuals against the original certificate constraints
  auto& res = cost.residuals;
  double support_cost = 0.0;
  for (PairIndex s = 0; s < ns; ++s) {
    const ApplicantId i = inst.pair_applicant(s);
    const ProgramId j = inst.pair_program(s);
    const double slack = cost.b[s] - cost.u[i] - cost.v[j] - cost.w;
    res.max_dual_infeasibility = std::max(res.max_dual_infeasibility, -slack);
    if (on_support[s]) {
      res.max_slackness_violation =
          std::max(res.max_slackness_violation, std::fabs(slack));
      support_cost += cost.b[s];
    }
  }
  double dual_obj = n_matched * cost.w;
  for (ApplicantId i = 0; i < ni; ++i) dual_obj += cost.u[i];
  for (ProgramId j = 0; j < nj; ++j) dual_obj += inst.capacity(j) * cost.v[j];
  res.duality_gap = std::fabs(support_cost - dual_obj);
  double total = 0.0;
  for (double b : cost.b) total += b;
  res.normalization_error = std::fabs(total - 1.0);

  if (res.normalization_error > 1e-8 || res.max_dual_infeasibility > 1e-8 ||
      res.max_slackness_violation > 1e-8 || res.duality_gap > 1e-6) {
    throw Error(Errc::kNumericalFailure,
                "certificate residuals exceed tolerances (norm " +
                    std::to_string(res.normalization_error) + ", dual " +
                    std::to_string(res.max_dual_infeasibility) + ", slack " +
                    std::to_string(res.max_slackness_violation) + ", gap " +
                    std::to_string(res.duality_gap) + ")");
  }

  if (options.verify_forward) {
    OptModel fwd;
    for (PairIndex s = 0; s < ns; ++s) {
      fwd.add_var("x_" + std::to_string(s), VarKind::kContinuous, 0.0, 1.0,
                  cost.b[s]);
    }
    for (ApplicantId i = 0; i < ni; ++i) {
      std::vector<LinearTerm> terms;
      for (PairIndex s : inst.pref_list(i)) terms.push_back({s, 1.0});
      if (!terms.empty())
        fwd.add_row("unique_" + std::to_string(i), std::move(terms),
                    Relation::kLe, 1.0);
    }
    for (ProgramId j = 0; j < nj; ++j) {
      std::vector<LinearTerm> terms;
      for (PairIndex s : inst.roster_list(j)) terms.push_back({s, 1.0});
      if (!terms.empty())
        fwd.add_row("capacity_" + std::to_string(j), std::move(terms),
                    Relation::kLe, inst.capacity(j));
    }
    {
      std::vector<LinearTerm> terms;
      for (PairIndex s = 0; s < ns; ++s) terms.push_back({s, 1.0});
      fwd.add_row("min_matched", std::move(terms), Relation::kGe,
                  static_cast<double>(n_matched));
    }
    OptSolution lp = solve(fwd);
    if (lp.status != SolveStatus::kOptimal) {
      throw Error(Errc::kNumericalFailure, "forward re-solve failed");
    }
    res.forward_gap = lp.objective - support_cost;
    if (std::fabs(res.forward_gap) > 1e-6 * (1.0 + std::fabs(support_cost))) {
      throw Error(Errc::kNumericalFailure,
                  "forward re-solve gap " + std::to_string(res.forward_gap));
    }
  }
  return cost;
}

std::string cost_vector_to_json_string(const ValidatedInstance& inst,
                                       const CostVector& cost) {
  nlohmann::json doc;
  doc["lambda"] = cost.lambda_reg;
  nlohmann::json pairs = nlohmann::json::array();
  for (PairIndex s = 0; s < inst.num_pairs(); ++s) {
    pairs.push_back({{"applicant", inst.applicant_name(inst.pair_applicant(s))},
                     {"program", inst.program_name(inst.pair_program(s))},
                     {"b", cost.b[s]}});
  }
  doc["pairs"] = pairs;
  nlohmann::json u = nlohmann::json::object(), v = nlohmann::json::object();
  for (ApplicantId i = 0; i < inst.num_applicants(); ++i)
    u[inst.applicant_name(i)] = cost.u[i];
  for (ProgramId j = 0; j < inst.num_programs(); ++j)
    v[inst.program_name(j)] = cost.v[j];
  doc["certificate"] = {{"u", u}, {"v", v}, {"w", cost.w}};
  doc["residuals"] = {
      {"duality_gap", cost.residuals.duality_gap},
      {"max_dual_infeasibility", cost.residuals.max_dual_infeasibility},
      {"max_slackness_violation", cost.residuals.max_slackness_violation},
      {"normalization_error", cost.residuals.normalization_error},
      {"forward_gap", cost.residuals.forward_gap}};
  return doc.dump(2) + "\n";
}

CostVector cost_vector_from_json_string(const ValidatedInstance& inst,
                                        const std::string& text) {
  try {
    nlohmann::json doc = nlohmann::json::parse(text);
    CostVector cost;
    cost.lambda_reg = doc.at("lambda").get<double>();
    cost.b.assign(inst.num_pairs(), 0.0);
    std::vector<char> seen(inst.num_pairs(), 0);
    for (const auto& e : doc.at("pairs")) {
      const ApplicantId i =
          inst.applicant_by_name(e.at("applicant").get<std::string>());
      const ProgramId j =
          inst.program_by_name(e.at("program").get<std::string>());
      const PairIndex s = inst.pair_index(i, j);
      if (s == kNoPair) {
        throw Error(Errc::kPairNotAdmissible,
                    "cost entry for a pair outside the admissible set");
      }
      cost.b[s] = e.at("b").get<double>();
      seen[s] = 1;
    }
    for (PairIndex s = 0; s < inst.num_pairs(); ++s) {
      if (!seen[s]) {
        throw Error(Errc::kIoError, "cost vector misses admissible pairs");
      }
    }
    cost.u.assign(inst.num_applicants(), 0.0);
    cost.v.assign(inst.num_programs(), 0.0);
    const auto& cert = doc.at("certificate");
    for (ApplicantId i = 0; i < inst.num_applicants(); ++i) {
      cost.u[i] = cert.at("u").at(inst.applicant_name(i)).get<double>();
    }
    for (ProgramId j = 0; j < inst.num_programs(); ++j) {
      cost.v[j] = cert.at("v").at(inst.program_name(j)).get<double>();
    }
    cost.w = cert.at("w").get<double>();
    return cost;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kIoError, std::string("cost vector JSON: ") + e.what());
  }
}

void save_cost_vector(const ValidatedInstance& inst, const CostVector& cost,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIoError, "cannot write '" + path + "'");
  out << cost_vector_to_json_string(inst, cost);
}

CostVector load_cost_vector(const ValidatedInstance& inst,
                            const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return cost_vector_from_json_string(inst, buf.str());
}

}  // namespace matchforge
