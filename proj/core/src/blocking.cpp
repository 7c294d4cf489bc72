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

#include "matchforge/blocking.hpp"

#include <limits>

#include "json.hpp"
#include "matchforge/deferred_acceptance.hpp"

namespace matchforge {

namespace {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

// Per-applicant utility of the current match and per-program worst admitted
// utility; everything the pairwise test needs in O(1).
struct MatchState {
  std::vector<double> matched_p;  // -inf when unmatched
  std::vector<double> min_admitted_q;  // +inf when empty
};

MatchState build_state(const ValidatedInstance& inst, const Matching& m) {
  MatchState st;
  st.matched_p.assign(inst.num_applicants(), kMinusInf);
  st.min_admitted_q.assign(inst.num_programs(),
                           std::numeric_limits<double>::infinity());
  for (ApplicantId i = 0; i < inst.num_applicants(); ++i) {
    ProgramId j = m.program_of(i);
    if (j == kNoProgram) continue;
    PairIndex s = inst.pair_index(i, j);
    st.matched_p[i] = inst.pair_p(s);
    st.min_admitted_q[j] = std::min(st.min_admitted_q[j], inst.pair_q(s));
  }
  return st;
}

inline bool blocks(const ValidatedInstance& inst, const Matching& m,
                   const MatchState& st, PairIndex s) {
  const ApplicantId i = inst.pair_applicant(s);
  const ProgramId j = inst.pair_program(s);
  if (!(inst.pair_p(s) > st.matched_p[i])) return false;
  if (m.fill(j) < inst.capacity(j)) return true;
  return inst.pair_q(s) > st.min_admitted_q[j];
}

}  // namespace

bool is_blocking_pair(const ValidatedInstance& inst, const Matching& m,
                      ApplicantId i, ProgramId j) {
  PairIndex s = inst.pair_index(i, j);
  if (s == kNoPair) {
    throw Error(Errc::kPairNotAdmissible,
                "pair (" + inst.applicant_name(i) + ", " +
                    inst.program_name(j) + ") is not admissible");
  }
  MatchState st = build_state(inst, m);
  return blocks(inst, m, st, s);
}

BlockingReport count_blocking_pairs(const ValidatedInstance& inst,
                                    const Matching& m) {
  require_feasible(inst, m);
  MatchState st = build_state(inst, m);
  BlockingReport report;
  for (PairIndex s = 0; s < inst.num_pairs(); ++s) {
    if (blocks(inst, m, st, s)) {
      ++report.count;
      report.pairs.push_back({inst.pair_applicant(s), inst.pair_program(s)});
    }
  }
  report.pct_of_admissible =
      inst.num_pairs() == 0
          ? 0.0
          : static_cast<double>(report.count) / inst.num_pairs();
  return report;
}

long long count_blocking(const ValidatedInstance& inst, const Matching& m) {
  MatchState st = build_state(inst, m);
  long long count = 0;
  for (PairIndex s = 0; s < inst.num_pairs(); ++s) {
    if (blocks(inst, m, st, s)) ++count;
  }
  return count;
}

double lipschitz_bound(const ValidatedInstance& inst) {
  return 0.5 * (inst.max_pref_len() + 2.0 * inst.max_capacity());
}

long long matching_l1_distance(const ValidatedInstance& inst,
                               const Matching& a, const Matching& b) {
  long long dist = 0;
  for (ApplicantId i = 0; i < inst.num_applicants(); ++i) {
    ProgramId ja = a.program_of(i);
    ProgramId jb = b.program_of(i);
    if (ja == jb) continue;
    dist += (ja != kNoProgram) + (jb != kNoProgram);
  }
  return dist;
}

RuralHospitalsReport rural_hospitals_audit(const ValidatedInstance& inst) {
  const Matching ms = student_proposing_da(inst);
  const Matching mp = program_proposing_da(inst);

  RuralHospitalsReport report;
  report.identical_matchings = (ms == mp);

  report.same_matched_applicants = true;
  for (ApplicantId i = 0; i < inst.num_applicants(); ++i) {
    if (ms.is_matched(i) != mp.is_matched(i)) {
      report.same_matched_applicants = false;
      break;
    }
  }

  report.same_program_fills = true;
  report.same_under_capacity_rosters = true;
  for (ProgramId j = 0; j < inst.num_programs(); ++j) {
    if (ms.fill(j) != mp.fill(j)) report.same_program_fills = false;
  }
  for (ProgramId j = 0; j < inst.num_programs(); ++j) {
    if (ms.fill(j) >= inst.capacity(j)) continue;  // only under-capacity rosters
    for (ApplicantId i = 0; i < inst.num_applicants(); ++i) {
      if ((ms.program_of(i) == j) != (mp.program_of(i) == j)) {
        report.same_under_capacity_rosters = false;
        break;
      }
    }
    if (!report.same_under_capacity_rosters) break;
  }
  return report;
}

std::string blocking_report_to_json_string(const ValidatedInstance& inst,
                                           const BlockingReport& report) {
  nlohmann::json doc;
  doc["count"] = report.count;
  doc["pct_of_admissible"] = report.pct_of_admissible;
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [i, j] : report.pairs) {
    pairs.push_back({inst.applicant_name(i), inst.program_name(j)});
  }
  doc["pairs"] = pairs;
  return doc.dump(2) + "\n";
}

}  // namespace matchforge
