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

#ifndef MATCHFORGE_BLOCKING_HPP_
#define MATCHFORGE_BLOCKING_HPP_

#include <string>
#include <utility>
#include <vector>

#include "matchforge/instance.hpp"

namespace matchforge {

// Ground-truth stability evaluation. A pair (i, j) blocks a matching when
//   (a) i is unmatched, or matched to a program it likes less than j, and
//   (b) j is under capacity, or admits an applicant it likes less than i.
struct BlockingReport {
  long long count = 0;
  std::vector<std::pair<ApplicantId, ProgramId>> pairs;
  // count / |S|, as a fraction of the admissible pairs.
  double pct_of_admissible = 0.0;
};

// Pointwise check; throws kPairNotAdmissible when (i, j) is not in S.
bool is_blocking_pair(const ValidatedInstance& inst, const Matching& m,
                      ApplicantId i, ProgramId j);

// Exact count over all of S in O(|S| + sum of capacities) using cached
// per-program worst-admitted utilities. Throws kInfeasibleMatching on a
// capacity or admissibility violation.
BlockingReport count_blocking_pairs(const ValidatedInstance& inst,
                                    const Matching& m);

// Count-only variant used in hot loops; same result as the report's count.
long long count_blocking(const ValidatedInstance& inst, const Matching& m);

// 0.5 * (max preference-list length + 2 * max capacity): the constant that
// bounds |BP(x) - BP(x')| against the l1 distance of the 0/1 pair encodings.
double lipschitz_bound(const ValidatedInstance& inst);

// l1 distance of two matchings in the |S|-dimensional 0/1 encoding: a
// reassignment contributes 2, a bare match/unmatch contributes 1.
long long matching_l1_distance(const ValidatedInstance& inst, const Matching& a,
                               const Matching& b);

// Runs both DA directions and compares the invariants the lone stable
// matched-set theorem guarantees: matched applicant sets, per-program fills,
// and rosters at under-capacity programs.
struct RuralHospitalsReport {
  bool same_matched_applicants = false;
  bool same_program_fills = false;
  bool same_under_capacity_rosters = false;
  bool identical_matchings = false;
  bool all_pass() const {
    return same_matched_applicants && same_program_fills &&
           same_under_capacity_rosters;
  }
};
RuralHospitalsReport rural_hospitals_audit(const ValidatedInstance& inst);

std::string blocking_report_to_json_string(const ValidatedInstance& inst,
                                           const BlockingReport& report);

}  // namespace matchforge

#endif  // MATCHFORGE_BLOCKING_HPP_
