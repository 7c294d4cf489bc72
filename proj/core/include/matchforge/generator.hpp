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

#ifndef MATCHFORGE_GENERATOR_HPP_
#define MATCHFORGE_GENERATOR_HPP_

#include <cstdint>
#include <vector>

#include "matchforge/instance.hpp"

namespace matchforge {

// Configuration of the synthetic school-choice / residency generator.
//
// Applicants and programs are placed uniformly in a square sized so that the
// maximum possible pairwise distance is 15 miles. Applicant i draws a
// distance-sensitivity type phi from phi_values and a list length k from
// rank_range, scores every program with
//
//   p[i][j] = (phi/2) * (1 - dhat[i][j]) + (phi/2) * quality[j]
//             + (1 - phi) * X[i][j],
//
// where dhat is the distance normalized by the instance-wide maximum,
// quality[j] ~ U(0,1) and X[i][j] ~ U(0,1), and ranks its top-k programs.
// Programs score exactly the applicants that ranked them with
//
//   q[i][j] = mu * (1 - dhat[i][j]) + (1 - mu) * Y[i][j].
//
// With literal_distance_term the raw (unnormalized) distance enters with a
// positive sign instead of (1 - dhat); that variant makes farther programs
// more attractive and exists for comparison runs only.
//
// Index-scaled 1e-9 perturbations are added to p and q so every preference
// list is strictly ordered.
struct GenConfig {
  int n_applicants = 0;
  int n_programs = 0;
  // Sum of program capacities divided by n_applicants.
  double total_capacity_factor = 1.0;
  std::vector<double> phi_values = {0.0, 0.25, 0.5, 0.75, 1.0};
  double mu = 0.75;
  int rank_min = 2;
  int rank_max = 9;
  int couples_count = 0;  // even; applicants 0..couples_count-1 are paired
  std::uint64_t seed = 0;
  bool literal_distance_term = false;
};

// Throws kInfeasibleConfig on an invalid configuration.
void check_config(const GenConfig& config);

Instance gen_school_instance(const GenConfig& config);

// Same placement and scoring; additionally pairs applicants (0,1), (2,3), ...
// into couples_count/2 couples. Each couple shares one jointly drawn
// valid-program set (the lower-id member's top-k) but orders it by its own
// utilities.
Instance gen_residency_instance(const GenConfig& config);

}  // namespace matchforge

#endif  // MATCHFORGE_GENERATOR_HPP_
