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

#include <set>

#include "matchforge/generator.hpp"
#include "matchforge/instance.hpp"
#include "test_util.hpp"

using namespace matchforge;

TEST_CASE("same seed gives byte-identical instances") {
  GenConfig cfg = testutil::small_config(120, 8, 42);
  const std::string a = instance_to_json_string(gen_school_instance(cfg));
  const std::string b = instance_to_json_string(gen_school_instance(cfg));
  CHECK(a == b);
  cfg.seed = 43;
  CHECK(instance_to_json_string(gen_school_instance(cfg)) != a);
}

TEST_CASE("list lengths stay inside the configured rank range") {
  GenConfig cfg = testutil::small_config(300, 12, 7);
  cfg.rank_min = 2;
  cfg.rank_max = 9;
  auto vi = validate_instance(gen_school_instance(cfg));
  std::set<int> seen;
  for (ApplicantId i = 0; i < vi.num_applicants(); ++i) {
    CHECK(vi.pref_len(i) >= 2);
    CHECK(vi.pref_len(i) <= 9);
    seen.insert(vi.pref_len(i));
  }
  CHECK(seen.size() > 1);  // the range is actually sampled
}

TEST_CASE("full-scale config stays within the pair bound") {
  GenConfig cfg = testutil::small_config(16255, 92, 2017);
  const Instance inst = gen_school_instance(cfg);
  CHECK(static_cast<long long>(inst.pairs.size()) <= 9LL * 16255);
  CHECK(static_cast<int>(inst.pairs.size()) >= 2 * 16255);
  auto vi = validate_instance(inst);
  CHECK(vi.num_pairs() == static_cast<PairIndex>(inst.pairs.size()));
}

TEST_CASE("generated instances validate cleanly") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    GenConfig cfg = testutil::small_config(80, 6, seed);
    const auto violations = check_instance(gen_school_instance(cfg));
    CHECK(violations.empty());
  }
}

TEST_CASE("capacity factor controls the seat total") {
  GenConfig cfg = testutil::small_config(100, 7, 5);
  cfg.total_capacity_factor = 1.3;
  auto vi = validate_instance(gen_school_instance(cfg));
  CHECK(vi.total_capacity() == 130);
}

TEST_CASE("rank range larger than the program count is rejected") {
  GenConfig cfg = testutil::small_config(10, 4, 1);
  cfg.rank_max = 9;
  CHECK_THROWS_AS(gen_school_instance(cfg), Error);
}

TEST_CASE("couples pair the first applicants into an involution") {
  GenConfig cfg = testutil::small_config(30, 6, 11);
  cfg.couples_count = 6;
  auto vi = validate_instance(gen_residency_instance(cfg));
  CHECK(static_cast<int>(vi.couple_pairs().size()) == 3);
  for (const auto& c : vi.couple_pairs()) {
    CHECK(vi.partner(c[0]) == c[1]);
    CHECK(vi.partner(c[1]) == c[0]);
    // shared valid sets with independent orders
    std::set<ProgramId> pa, pb;
    for (PairIndex s : vi.pref_list(c[0])) pa.insert(vi.pair_program(s));
    for (PairIndex s : vi.pref_list(c[1])) pb.insert(vi.pair_program(s));
    CHECK(pa == pb);
  }
  CHECK(vi.partner(7) == kNoApplicant);

  cfg.couples_count = 0;
  auto nei = validate_instance(gen_residency_instance(cfg));
  CHECK(nei.couple_pairs().empty());
}

TEST_CASE("paper-scale couples count produces one thousand pairs") {
  GenConfig cfg = testutil::small_config(16255, 92, 99);
  cfg.couples_count = 2000;
  const Instance inst = gen_residency_instance(cfg);
  CHECK(static_cast<int>(inst.couples.size()) == 1000);
}

TEST_CASE("distance sensitivity drives preferences as configured") {
  // phi = 1: utility is a deterministic function of distance and quality
  GenConfig cfg = testutil::small_config(200, 10, 17);
  cfg.phi_values = {1.0};
  const Instance a = gen_school_instance(cfg);
  const Instance b = gen_school_instance(cfg);
  CHECK(instance_to_json_string(a) == instance_to_json_string(b));

  // phi = 0: preference order uncorrelated with distance on average
  cfg.phi_values = {0.0};
  auto vi = validate_instance(gen_school_instance(cfg));
  std::vector<double> rho;
  for (ApplicantId i = 0; i < vi.num_applicants(); ++i) {
    if (vi.pref_len(i) < 4) continue;
    std::vector<double> rank_pos, dist;
    const auto prefs = vi.pref_list(i);
    for (int k = 0; k < prefs.size(); ++k) {
      rank_pos.push_back(k);
      dist.push_back(vi.pair_distance(prefs[k]));
    }
    rho.push_back(testutil::spearman_rho(rank_pos, dist));
  }
  double mean = 0.0;
  for (double r : rho) mean += r;
  mean /= static_cast<double>(rho.size());
  CHECK(std::fabs(mean) < 0.15);

  // phi = 1 with the corrected sign: closer programs rank higher on average
  cfg.phi_values = {1.0};
  auto vi1 = validate_instance(gen_school_instance(cfg));
  std::vector<double> rho1;
  for (ApplicantId i = 0; i < vi1.num_applicants(); ++i) {
    if (vi1.pref_len(i) < 4) continue;
    std::vector<double> rank_pos, dist;
    const auto prefs = vi1.pref_list(i);
    for (int k = 0; k < prefs.size(); ++k) {
      rank_pos.push_back(k);
      dist.push_back(vi1.pair_distance(prefs[k]));
    }
    rho1.push_back(testutil::spearman_rho(rank_pos, dist));
  }
  double mean1 = 0.0;
  for (double r : rho1) mean1 += r;
  mean1 /= static_cast<double>(rho1.size());
  CHECK(mean1 > 0.3);  // farther programs sit lower in the list

}

TEST_CASE("literal distance flag flips the attraction") {
  GenConfig cfg = testutil::small_config(150, 8, 23);
  cfg.phi_values = {1.0};
  cfg.literal_distance_term = true;
  auto vi = validate_instance(gen_school_instance(cfg));
  // with a positive raw distance term, farther programs score higher
  double mean = 0.0;
  int n = 0;
  for (ApplicantId i = 0; i < vi.num_applicants(); ++i) {
    if (vi.pref_len(i) < 4) continue;
    std::vector<double> rank_pos, dist;
    const auto prefs = vi.pref_list(i);
    for (int k = 0; k < prefs.size(); ++k) {
      rank_pos.push_back(k);
      dist.push_back(vi.pair_distance(prefs[k]));
    }
    mean += testutil::spearman_rho(rank_pos, dist);
    ++n;
  }
  mean /= n;
  CHECK(mean < -0.5);
}

TEST_CASE("geometry keeps pairwise distances under the region diagonal") {
  GenConfig cfg = testutil::small_config(250, 15, 3);
  const Instance inst = gen_school_instance(cfg);
  for (const RawPair& e : inst.pairs) {
    CHECK(e.distance >= 0.0);
    CHECK(e.distance <= 15.0);
  }
}
