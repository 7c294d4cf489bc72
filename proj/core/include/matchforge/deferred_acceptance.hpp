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

#ifndef MATCHFORGE_DEFERRED_ACCEPTANCE_HPP_
#define MATCHFORGE_DEFERRED_ACCEPTANCE_HPP_

#include "matchforge/instance.hpp"

namespace matchforge {

// Many-to-one deferred acceptance with applicants proposing. Returns the
// applicant-optimal stable matching. Applicants with empty preference lists
// simply remain unmatched. Proposals within a round are made in applicant-id
// order; the outcome is order-independent under strict preferences, the
// fixed order only makes traces reproducible.
Matching student_proposing_da(const ValidatedInstance& inst);

// Mirror image with programs proposing down their rosters; returns the
// program-optimal stable matching.
Matching program_proposing_da(const ValidatedInstance& inst);

}  // namespace matchforge

#endif  // MATCHFORGE_DEFERRED_ACCEPTANCE_HPP_
