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
#include "matchforge/rng.hpp"
#include "test_util.hpp"

using namespace matchforge;
using testutil::make_instance;

TEST_CASE("deferred-acceptance output has no blocking pair") {
  GenConfig cfg = testutil::small_config(50, 5, 9);
  auto vi = validate_instance(gen_school_instance(cfg));
  const Matching m = student_proposing_da(vi);
  for (PairIndex s = 0; s < vi.num_pairs(); ++s) {
    CHECK_FALSE(
        is_blocking_pair(vi, m, vi.pair_applicant(s), vi.pair_program(s)));
  }
  CHECK(count_blocking_pairs(vi, m).count == 0);
}

TEST_CASE("hand-evaluated pair on the 2x2 cycle") {
  // a0: s1 > s0; a1: s0 > s1; s0 prefers a0; s1 prefers a1
  auto vi = validate_instance(make_instance(
      2, {1, 1},
      {{0, 0, 1.0, 2.0, 0.0}, {0, 1, 2.0, 1.0, 0.0},
       {1, 0, 2.0, 1.0, 0.0}, {1, 1, 1.0, 2.0, 0.0}}));
  // assign both to their worse choice swapped: a0 -> s0, a1 -> s1 is stable
  // (it is the program-optimal matching); instead cross them badly:
  Matching m(2, 2);
  m.assign(0, 0);
  m.assign(1, 1);
  CHECK(count_blocking_pairs(vi, m).count == 0);
  // unmatched-both: every admissible pair blocks
  Matching empty(2, 2);
  const BlockingReport r = count_blocking_pairs(vi, empty);
  CHECK(r.count == vi.num_pairs());
  CHECK(r.pct_of_admissible == doctest::Approx(1.0));
  CHECK(is_blocking_pair(vi, empty, 0, 0));
}

TEST_CASE("blocked swap is detected on both sides") {
  // a0 holds s0 but prefers s1; s1 holds a1 but prefers a0
  auto vi = validate_instance(make_instance(
      2, {1, 1},
      {{0, 0, 1.0, 2.0, 0.0}, {0, 1, 2.0, 2.0, 0.0},
       {1, 1, 1.0, 1.0, 0.0}}));
  Matching m(2, 2);
  m.assign(0, 0);
  m.assign(1, 1);
  CHECK(is_blocking_pair(vi, m, 0, 1));
  CHECK(count_blocking_pairs(vi, m).count == 1);
}

TEST_CASE("inadmissible queries are rejected") {
  auto vi = validate_instance(make_instance(
      2, {1, 1}, {{0, 0, 1.0, 1.0, 0.0}, {1, 1, 1.0, 1.0, 0.0}}));
  Matching m(2, 2);
  CHECK_THROWS_AS(is_blocking_pair(vi, m, 0, 1), Error);
}

TEST_CASE("over-capacity matchings are refused") {
  auto vi = validate_instance(make_instance(
      2, {1}, {{0, 0, 1.0, 1.0, 0.0}, {1, 0, 2.0, 2.0, 0.0}}));
  Matching m(2, 1);
  m.assign(0, 0);
  m.assign(1, 0);
  CHECK_THROWS_AS(count_blocking_pairs(vi, m), Error);
}

TEST_CASE("fast counter equals brute force on random pairs") {
  SplitMix64 rng(1234);
  int done = 0;
  std::uint64_t seed = 1;
  while (done < 200) {
    GenConfig cfg = testutil::small_config(
        6 + static_cast<int>(rng.next_below(25)), 3 + static_cast<int>(rng.next_below(4)),
        seed++);
    cfg.rank_min = std::min(2, cfg.n_programs);
    cfg.rank_max = std::min(5, cfg.n_programs);
    auto vi = validate_instance(gen_school_instance(cfg));
    for (int k = 0; k < 4 && done < 200; ++k, ++done) {
      const Matching m = testutil::random_feasible_matching(vi, rng);
      CHECK(count_blocking_pairs(vi, m).count ==
            testutil::brute_force_blocking(vi, m));
    }
  }
}

TEST_CASE("single swap recount matches brute force") {
  GenConfig cfg = testutil::small_config(30, 5, 77);
  auto vi = validate_instance(gen_school_instance(cfg));
  Matching m = student_proposing_da(vi);
  // swap two matched applicants with interchangeable programs
  ApplicantId a = -1, b = -1;
  for (ApplicantId i = 0; i < vi.num_applicants() && a < 0; ++i) {
    for (ApplicantId k = i + 1; k < vi.num_applicants() && a < 0; ++k) {
      if (!m.is_matched(i) || !m.is_matched(k)) continue;
      if (m.program_of(i) == m.program_of(k)) continue;
      if (vi.pair_index(i, m.program_of(k)) != kNoPair &&
          vi.pair_index(k, m.program_of(i)) != kNoPair) {
        a = i;
        b = k;
      }
    }
  }
  REQUIRE(a >= 0);
  const ProgramId pa = m.program_of(a), pb = m.program_of(b);
  m.unassign(a);
  m.unassign(b);
  m.assign(a, pb);
  m.assign(b, pa);
  CHECK(count_blocking_pairs(vi, m).count ==
        testutil::brute_force_blocking(vi, m));
}

TEST_CASE("lipschitz constant from list length and capacity") {
  {
    std::vector<testutil::Entry> entries;
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 9; ++j)
        entries.push_back({i, j, 1.0 + j + 0.01 * i, 1.0 + i + 0.01 * j, 0.0});
    std::vector<int> caps(9, 1);
    caps[0] = 100;
    auto vi = validate_instance(make_instance(12, caps, entries));
    CHECK(vi.max_pref_len() == 9);
    CHECK(vi.max_capacity() == 100);
    CHECK(lipschitz_bound(vi) == doctest::Approx(104.5));
  }
  {
    auto vi = validate_instance(make_instance(
        1, {1, 1}, {{0, 0, 2.0, 1.0, 0.0}, {0, 1, 1.0, 1.0, 0.0}}));
    CHECK(lipschitz_bound(vi) == doctest::Approx(2.0));  // (2 + 2)/2
  }
  {
    auto vi = validate_instance(make_instance(1, {1}, {{0, 0, 1.0, 1.0, 0.0}}));
    CHECK(lipschitz_bound(vi) == doctest::Approx(1.5));
  }
}

TEST_CASE("l1 distance counts reassignments as two") {
  auto vi = validate_instance(make_instance(
      2, {1, 1},
      {{0, 0, 2.0, 1.0, 0.0}, {0, 1, 1.0, 1.0, 0.0}, {1, 0, 1.0, 2.0, 0.0}}));
  Matching a(2, 2), b(2, 2);
  a.assign(0, 0);
  b.assign(0, 1);
  CHECK(matching_l1_distance(vi, a, b) == 2);  // reassignment
  Matching c(2, 2);
  CHECK(matching_l1_distance(vi, a, c) == 1);  // unmatch
  CHECK(matching_l1_distance(vi, a, a) == 0);
}

TEST_CASE("empirical difference bound holds on random pairs") {
  GenConfig cfg = testutil::small_config(30, 5, 2024);
  auto vi = validate_instance(gen_school_instance(cfg));
  const double bound = lipschitz_bound(vi);
  SplitMix64 rng(555);
  for (int t = 0; t < 300; ++t) {
    const Matching x = testutil::random_feasible_matching(vi, rng);
    const Matching y = testutil::random_feasible_matching(vi, rng);
    const long long diff = std::llabs(count_blocking(vi, x) - count_blocking(vi, y));
    CHECK(static_cast<double>(diff) <=
          bound * static_cast<double>(matching_l1_distance(vi, x, y)) + 1e-9);
  }
}

TEST_CASE("rural audit passes on strict-preference instances") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    GenConfig cfg = testutil::small_config(40, 5, seed);
    auto vi = validate_instance(gen_school_instance(cfg));
    CHECK(rural_hospitals_audit(vi).all_pass());
  }
}

TEST_CASE("rural audit distinguishes identical from merely equivalent") {
  // unique stable matching: identical in both directions
  auto unique_vi = validate_instance(make_instance(
      2, {1, 1},
      {{0, 0, 2.0, 1.0, 0.0}, {0, 1, 1.0, 2.0, 0.0},
       {1, 0, 2.0, 2.0, 0.0}, {1, 1, 1.0, 1.0, 0.0}}));
  REQUIRE(testutil::enumerate_stable_matchings(unique_vi).size() == 1);
  CHECK(rural_hospitals_audit(unique_vi).identical_matchings);

  // two stable matchings: fills agree, assignments differ
  auto two_vi = validate_instance(make_instance(
      2, {1, 1},
      {{0, 0, 1.0, 2.0, 0.0}, {0, 1, 2.0, 1.0, 0.0},
       {1, 0, 2.0, 1.0, 0.0}, {1, 1, 1.0, 2.0, 0.0}}));
  const RuralHospitalsReport r = rural_hospitals_audit(two_vi);
  CHECK_FALSE(r.identical_matchings);
  CHECK(r.all_pass());
}
