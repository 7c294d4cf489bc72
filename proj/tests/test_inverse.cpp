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

#include <cstdio>

#include "matchforge/deferred_acceptance.hpp"
#include "matchforge/generator.hpp"
#include "matchforge/inverse.hpp"
#include "matchforge/opt_model.hpp"
#include "test_util.hpp"

using namespace matchforge;
using testutil::make_instance;

namespace {

double support_cost(const ValidatedInstance& vi, const Matching& m,
                    const CostVector& cost) {
  double total = 0.0;
  for (ApplicantId i = 0; i < vi.num_applicants(); ++i) {
    if (m.is_matched(i)) total += cost.b[vi.pair_index(i, m.program_of(i))];
  }
  return total;
}

}  // namespace

TEST_CASE("one-pair instance pins the whole system by hand") {
  auto vi = validate_instance(make_instance(1, {1}, {{0, 0, 1.0, 1.0, 0.0}}));
  Matching m(1, 1);
  m.assign(0, 0);
  const CostVector cost = recover_cost(vi, m, default_prior(vi), 1.0);
  CHECK(cost.b[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(cost.u[0] == doctest::Approx(0.0));
  CHECK(cost.v[0] == doctest::Approx(0.0));
  CHECK(cost.w == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(cost.residuals.duality_gap <= 1e-8);
}

TEST_CASE("uniform prior values") {
  {
    std::vector<testutil::Entry> entries{{0, 0, 2.0, 1.0, 0.0},
                                         {0, 1, 1.0, 1.0, 0.0},
                                         {1, 0, 1.0, 2.0, 0.0},
                                         {1, 1, 2.0, 2.0, 0.0}};
    auto vi = validate_instance(make_instance(2, {1, 1}, entries));
    const auto prior = default_prior(vi);
    REQUIRE(prior.size() == 4);
    for (double p : prior) CHECK(p == doctest::Approx(0.25));
  }
  {
    auto vi = validate_instance(make_instance(1, {1}, {{0, 0, 1.0, 1.0, 0.0}}));
    CHECK(default_prior(vi) == std::vector<double>{1.0});
  }
  {
    GenConfig cfg = testutil::small_config(40, 5, 3);
    auto vi = validate_instance(gen_school_instance(cfg));
    double sum = 0.0;
    for (double p : default_prior(vi)) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("certificate residuals meet the advertised tolerances") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    GenConfig cfg = testutil::small_config(40, 5, seed * 13);
    auto vi = validate_instance(gen_school_instance(cfg));
    const Matching da = student_proposing_da(vi);
    const CostVector cost = recover_cost(vi, da, default_prior(vi), 1.0);
    CHECK(cost.residuals.normalization_error <= 1e-8);
    CHECK(cost.residuals.max_dual_infeasibility <= 1e-8);
    CHECK(cost.residuals.max_slackness_violation <= 1e-8);
    CHECK(cost.residuals.duality_gap <= 1e-6);
    CHECK(std::fabs(cost.residuals.forward_gap) <= 1e-6 * 10);
    for (double u : cost.u) CHECK(u <= 1e-12);
    for (double v : cost.v) CHECK(v <= 1e-12);
    CHECK(cost.w >= -1e-12);
    double total = 0.0;
    for (double b : cost.b) total += b;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("reference matching minimizes the recovered cost over matchings") {
  GenConfig cfg = testutil::small_config(7, 3, 21);
  auto vi = validate_instance(gen_school_instance(cfg));
  const Matching da = student_proposing_da(vi);
  const CostVector cost = recover_cost(vi, da, default_prior(vi), 1.0);
  const double ref_cost = support_cost(vi, da, cost);
  // enumeration oracle: no feasible matching with >= N matched costs less
  double best = kInf;
  testutil::enumerate_matchings(vi, [&](const Matching& m) {
    if (m.matched_count() < da.matched_count()) return;
    best = std::min(best, support_cost(vi, m, cost));
  });
  CHECK(ref_cost <= best + 1e-6);
}

TEST_CASE("program-proposing reference works as well") {
  GenConfig cfg = testutil::small_config(30, 4, 8);
  auto vi = validate_instance(gen_school_instance(cfg));
  const Matching mp = program_proposing_da(vi);
  const CostVector cost = recover_cost(vi, mp, default_prior(vi), 1.0);
  CHECK(cost.residuals.normalization_error <= 1e-8);
  CHECK(std::fabs(cost.residuals.forward_gap) <= 1e-5);
}

TEST_CASE("lambda zero still returns a normalized cost vector") {
  GenConfig cfg = testutil::small_config(20, 4, 5);
  auto vi = validate_instance(gen_school_instance(cfg));
  const Matching da = student_proposing_da(vi);
  const CostVector cost = recover_cost(vi, da, default_prior(vi), 0.0);
  double total = 0.0;
  for (double b : cost.b) total += b;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(cost.residuals.max_dual_infeasibility <= 1e-8);
}

TEST_CASE("prior must cover the admissible pairs") {
  auto vi = validate_instance(make_instance(1, {1}, {{0, 0, 1.0, 1.0, 0.0}}));
  Matching m(1, 1);
  m.assign(0, 0);
  CHECK_THROWS_AS(recover_cost(vi, m, {0.5, 0.5}, 1.0), Error);
}

TEST_CASE("regularization weight shapes the solution") {
  GenConfig cfg = testutil::small_config(25, 4, 33);
  auto vi = validate_instance(gen_school_instance(cfg));
  const Matching da = student_proposing_da(vi);
  const auto prior = default_prior(vi);
  const CostVector tight = recover_cost(vi, da, prior, 100.0);
  const CostVector loose = recover_cost(vi, da, prior, 0.01);
  auto deviation = [&](const CostVector& c) {
    double d = 0.0;
    for (PairIndex s = 0; s < vi.num_pairs(); ++s)
      d += (c.b[s] - prior[s]) * (c.b[s] - prior[s]);
    return d;
  };
  CHECK(deviation(tight) <= deviation(loose) + 1e-9);
}

TEST_CASE("cost vector JSON round-trips") {
  GenConfig cfg = testutil::small_config(15, 4, 44);
  auto vi = validate_instance(gen_school_instance(cfg));
  const Matching da = student_proposing_da(vi);
  const CostVector cost = recover_cost(vi, da, default_prior(vi), 1.0);
  const std::string path = "cost_roundtrip.json";
  save_cost_vector(vi, cost, path);
  const CostVector back = load_cost_vector(vi, path);
  REQUIRE(back.b.size() == cost.b.size());
  for (PairIndex s = 0; s < vi.num_pairs(); ++s)
    CHECK(back.b[s] == doctest::Approx(cost.b[s]).epsilon(1e-12));
  CHECK(back.w == doctest::Approx(cost.w).epsilon(1e-12));
  std::remove(path.c_str());
}
