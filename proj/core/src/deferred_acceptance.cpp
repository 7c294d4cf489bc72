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

#include "matchforge/deferred_acceptance.hpp"

#include <queue>
#include <vector>

namespace matchforge {

Matching student_proposing_da(const ValidatedInstance& inst) {
  const int ni = inst.num_applicants();
  const int nj = inst.num_programs();
  Matching m(ni, nj);

  std::vector<int> next_choice(ni, 0);
  // Per program: admitted pairs as a min-heap on q, worst admit on top.
  auto worse = [&](PairIndex a, PairIndex b) {
    return inst.pair_q(a) > inst.pair_q(b);
  };
  std::vector<std::priority_queue<PairIndex, std::vector<PairIndex>,
                                  decltype(worse)>>
      admitted(nj, decltype(admitted)::value_type(worse));

  bool progress = true;
  while (progress) {
    progress = false;
    for (ApplicantId i = 0; i < ni; ++i) {
      if (m.is_matched(i)) continue;
      const auto prefs = inst.pref_list(i);
      if (next_choice[i] >= prefs.size()) continue;
      const PairIndex s = prefs[next_choice[i]++];
      progress = true;
      const ProgramId j = inst.pair_program(s);
      const int cap = inst.capacity(j);
      if (cap == 0) continue;
      if (m.fill(j) < cap) {
        m.assign(i, j);
        admitted[j].push(s);
      } else if (inst.pair_q(s) > inst.pair_q(admitted[j].top())) {
        const PairIndex worst = admitted[j].top();
        admitted[j].pop();
        m.unassign(inst.pair_applicant(worst));
        m.assign(i, j);
        admitted[j].push(s);
      }
    }
  }
  return m;
}

Matching program_proposing_da(const ValidatedInstance& inst) {
  const int ni = inst.num_applicants();
  const int nj = inst.num_programs();

  std::vector<int> next_candidate(nj, 0);
  std::vector<int> vacancies(nj);
  for (ProgramId j = 0; j < nj; ++j) vacancies[j] = inst.capacity(j);
  std::vector<PairIndex> held(ni, kNoPair);

  bool progress = true;
  while (progress) {
    progress = false;
    for (ProgramId j = 0; j < nj; ++j) {
      const auto& roster = inst.roster_list(j);
      while (vacancies[j] > 0 &&
             next_candidate[j] < static_cast<int>(roster.size())) {
        const PairIndex s = roster[next_candidate[j]++];
        progress = true;
        const ApplicantId i = inst.pair_applicant(s);
        if (held[i] == kNoPair) {
          held[i] = s;
          --vacancies[j];
        } else if (inst.pair_p(s) > inst.pair_p(held[i])) {
          ++vacancies[inst.pair_program(held[i])];
          held[i] = s;
          --vacancies[j];
        }
      }
    }
  }

  Matching m(ni, nj);
  for (ApplicantId i = 0; i < ni; ++i) {
    if (held[i] != kNoPair) m.assign(i, inst.pair_program(held[i]));
  }
  return m;
}

}  // namespace matchforge
