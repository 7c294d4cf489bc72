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

#include <cmath>

#include "matchforge/deferred_acceptance.hpp"
#include "matchforge/exact.hpp"
#include "matchforge/generator.hpp"
#include "matchforge/opt_model.hpp"
#include "test_util.hpp"

using namespace matchforge;
using testutil::make_instance;

TEST_CASE("zero budget on a unique-stable instance returns that matching") {
  auto vi = validate_instance(make_instance(
      2, {1, 1},
      {{0, 0, 2.0, 1.0, 1.0}, {0, 1, 1.0, 2.0, 5.0},
       {1, 0, 2.0, 2.0, 2.0}, {1, 1, 1.0, 1.0, 3.0}}));
  REQUIRE(testutil::enumerate_stable_matchings(vi).size() == 1);
  const Matching da = student_proposing_da(vi);
  const ExactResult res = solve_exact(vi, 0, da.matched_count());
  CHECK(res.matching == da);
  CHECK(res.blocking.count == 0);
}

TEST_CASE("huge budget reduces to the unconstrained travel minimum") {
  GenConfig cfg = testutil::small_config(8, 3, 14);
  auto vi = validate_instance(gen_school_instance(cfg));
  const Matching da = student_proposing_da(vi);
  const int n = da.matched_count();
  const ExactResult res = solve_exact(vi, vi.num_pairs(), n);
  const double brute = testutil::brute_force_min_travel(vi, vi.num_pairs(), n);
  REQUIRE(!std::isnan(brute));
  CHECK(res.travel == doctest::Approx(brute).epsilon(1e-9));
}

TEST_CASE("exact optimum matches enumeration for every small budget") {
  for (std::uint64_t seed : {3ULL, 8ULL}) {
    GenConfig cfg = testutil::small_config(7, 3, seed);
    auto vi = validate_instance(gen_school_instance(cfg));
    const Matching da = student_proposing_da(vi);
    const int n = da.matched_count();
    for (long long budget : {0LL, 1LL, 2LL, 4LL}) {
      const double brute = testutil::brute_force_min_travel(vi, budget, n);
      REQUIRE(!std::isnan(brute));
      const ExactResult res = solve_exact(vi, budget, n);
      CHECK(res.travel == doctest::Approx(brute).epsilon(1e-9));
      CHECK(res.blocking.count <= budget);
    }
  }
}

TEST_CASE("impossible matched count is reported as infeasible") {
  auto vi = validate_instance(make_instance(1, {1}, {{0, 0, 1.0, 1.0, 0.0}}));
  CHECK_THROWS_AS(solve_exact(vi, 0, 99999), Error);
  try {
    solve_exact(vi, 0, 99999);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kInfeasibleBudget);
  }
}

TEST_CASE("stability and travel dominance at zero budget") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    GenConfig cfg = testutil::small_config(30, 4, seed * 7);
    auto vi = validate_instance(gen_school_instance(cfg));
    const Matching da = student_proposing_da(vi);
    const ExactResult res = solve_exact(vi, 0, da.matched_count());
    CHECK(res.blocking.count == 0);
    CHECK(res.travel <= total_travel(vi, da) + 1e-9);
  }
}

TEST_CASE("optimal travel is nonincreasing in the budget") {
  GenConfig cfg = testutil::small_config(25, 4, 41);
  auto vi = validate_instance(gen_school_instance(cfg));
  const Matching da = student_proposing_da(vi);
  double prev = kInf;
  std::optional<Matching> chain;
  for (long long budget = 0; budget <= 5; ++budget) {
    ExactOptions opts;
    if (chain) opts.warm_start = chain;
    const ExactResult res = solve_exact(vi, budget, da.matched_count(), opts);
    CHECK(res.travel <= prev + 1e-9);
    prev = res.travel;
    chain = res.matching;
  }
}

TEST_CASE("pair cap refuses oversized formulations") {
  GenConfig cfg = testutil::small_config(30, 4, 2);
  auto vi = validate_instance(gen_school_instance(cfg));
  ExactOptions opts;
  opts.pair_cap = 5;
  CHECK_THROWS_AS(solve_exact(vi, 0, 0, opts), Error);
}
