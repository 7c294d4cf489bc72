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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "matchforge/blocking.hpp"
#include "matchforge/deferred_acceptance.hpp"
#include "matchforge/generator.hpp"
#include "test_util.hpp"

using namespace matchforge;
using testutil::Entry;
using testutil::make_instance;

TEST_CASE("mutual 1x1 pair is matched") {
  auto vi = validate_instance(make_instance(1, {1}, {{0, 0, 1.0, 1.0, 0.0}}));
  const Matching ms = student_proposing_da(vi);
  CHECK(ms.program_of(0) == 0);
  const Matching mp = program_proposing_da(vi);
  CHECK(mp.program_of(0) == 0);
}

TEST_CASE("contested program resolves by program preference") {
  // both applicants prefer s0; s0 prefers a1, s1 prefers a0
  auto vi = validate_instance(make_instance(
      2, {1, 1},
      {{0, 0, 2.0, 1.0, 0.0}, {0, 1, 1.0, 2.0, 0.0},
       {1, 0, 2.0, 2.0, 0.0}, {1, 1, 1.0, 1.0, 0.0}}));
  const Matching m = student_proposing_da(vi);
  CHECK(m.program_of(0) == 1);
  CHECK(m.program_of(1) == 0);
  // brute force: this instance has a unique stable matching
  const auto stable = testutil::enumerate_stable_matchings(vi);
  REQUIRE(stable.size() == 1);
  CHECK(stable[0] == m);
  CHECK(program_proposing_da(vi) == m);
}

TEST_CASE("two-stable-matching cycle separates the proposing sides") {
  // a0: s1 > s0, a1: s0 > s1; s0 prefers a0, s1 prefers a1
  auto vi = validate_instance(make_instance(
      2, {1, 1},
      {{0, 0, 1.0, 2.0, 0.0}, {0, 1, 2.0, 1.0, 0.0},
       {1, 0, 2.0, 1.0, 0.0}, {1, 1, 1.0, 2.0, 0.0}}));
  const auto stable = testutil::enumerate_stable_matchings(vi);
  CHECK(stable.size() == 2);
  const Matching ms = student_proposing_da(vi);
  CHECK(ms.program_of(0) == 1);  // applicant optimal
  CHECK(ms.program_of(1) == 0);
  const Matching mp = program_proposing_da(vi);
  CHECK(mp.program_of(0) == 0);  // program optimal
  CHECK(mp.program_of(1) == 1);
}

TEST_CASE("capacity two admits both applicants") {
  auto vi = validate_instance(make_instance(
      2, {2}, {{0, 0, 1.0, 1.0, 0.0}, {1, 0, 1.0, 2.0, 0.0}}));
  const Matching m = student_proposing_da(vi);
  CHECK(m.fill(0) == 2);
}

TEST_CASE("zero-capacity programs never admit") {
  auto vi = validate_instance(make_instance(
      1, {0, 1}, {{0, 0, 2.0, 1.0, 0.0}, {0, 1, 1.0, 1.0, 0.0}}));
  const Matching m = student_proposing_da(vi);
  CHECK(m.program_of(0) == 1);
  CHECK(program_proposing_da(vi).program_of(0) == 1);
}

TEST_CASE("both directions are stable on random instances") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GenConfig cfg = testutil::small_config(60, 6, seed);
    auto vi = validate_instance(gen_school_instance(cfg));
    const Matching ms = student_proposing_da(vi);
    const Matching mp = program_proposing_da(vi);
    CHECK(testutil::brute_force_blocking(vi, ms) == 0);
    CHECK(testutil::brute_force_blocking(vi, mp) == 0);
  }
}

TEST_CASE("matched sets and fills agree across directions") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    GenConfig cfg = testutil::small_config(80, 7, seed * 31);
    auto vi = validate_instance(gen_school_instance(cfg));
    const RuralHospitalsReport report = rural_hospitals_audit(vi);
    CHECK(report.same_matched_applicants);
    CHECK(report.same_program_fills);
    CHECK(report.same_under_capacity_rosters);
  }
}

TEST_CASE("re-running on the matched restriction is idempotent") {
  GenConfig cfg = testutil::small_config(70, 6, 5);
  auto vi = validate_instance(gen_school_instance(cfg));
  const Matching m = student_proposing_da(vi);
  // restrict the instance to matched pairs only
  Instance narrowed = vi.raw();
  narrowed.pairs.clear();
  for (ApplicantId i = 0; i < vi.num_applicants(); ++i) {
    ProgramId j = m.program_of(i);
    if (j == kNoProgram) continue;
    const PairIndex s = vi.pair_index(i, j);
    narrowed.pairs.push_back(
        {i, j, vi.pair_p(s), vi.pair_q(s), vi.pair_distance(s)});
  }
  auto nv = validate_instance(narrowed);
  const Matching again = student_proposing_da(nv);
  for (ApplicantId i = 0; i < vi.num_applicants(); ++i) {
    CHECK(again.program_of(i) == m.program_of(i));
  }
}
