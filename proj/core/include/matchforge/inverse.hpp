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

#ifndef MATCHFORGE_INVERSE_HPP_
#define MATCHFORGE_INVERSE_HPP_

#include <string>
#include <vector>

#include "matchforge/instance.hpp"

namespace matchforge {

// Stability cost vector recovered from a reference matching, together with
// the dual certificate that makes the reference optimal for the relaxed
// assignment LP:
//   u_i + v_j + w <= b[s]            for every admissible pair s = (i, j)
//   (b[s] - u_i - v_j - w) = 0       on the support of the reference
//   sum_s b[s] * xref[s] = sum_i u_i + sum_j C_j v_j + N w
//   sum_s b[s] = 1
// with u <= 0, v <= 0, w >= 0.
struct CostVector {
  std::vector<double> b;  // per pair index
  std::vector<double> u;  // per applicant, <= 0
  std::vector<double> v;  // per program, <= 0
  double w = 0.0;
  double lambda_reg = 1.0;
  struct Residuals {
    double duality_gap = 0.0;
    double max_dual_infeasibility = 0.0;
    double max_slackness_violation = 0.0;
    double normalization_error = 0.0;
    double forward_gap = 0.0;  // forward LP re-solve objective minus b.xref
  } residuals;
};

// Uniform prior 1/|S| per admissible pair.
std::vector<double> default_prior(const ValidatedInstance& inst);

struct InverseOptions {
  // Re-solve the relaxed forward LP under the recovered costs and require
  // its optimum to match b.xref.
  bool verify_forward = true;
  double time_limit_sec = 1e18;
};

// Minimizes b.xref + lambda * ||b - b_bar||^2 over the certificate
// constraints above. With lambda = 0 the linear objective admits no
// minimizer whenever off-support pairs exist (costs can sink without bound
// against compensating slacks), so the prior projection min ||b - b_bar||^2
// is returned instead; every certificate constraint still holds.
CostVector recover_cost(const ValidatedInstance& inst, const Matching& x_ref,
                        const std::vector<double>& b_bar, double lambda_reg,
                        const InverseOptions& options = {});

std::string cost_vector_to_json_string(const ValidatedInstance& inst,
                                       const CostVector& cost);
CostVector cost_vector_from_json_string(const ValidatedInstance& inst,
                                        const std::string& text);
void save_cost_vector(const ValidatedInstance& inst, const CostVector& cost,
                      const std::string& path);
CostVector load_cost_vector(const ValidatedInstance& inst,
                            const std::string& path);

}  // namespace matchforge

#endif  // MATCHFORGE_INVERSE_HPP_
