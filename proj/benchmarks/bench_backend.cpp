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

#include "benchmark/benchmark.h"
#include "matchforge/deferred_acceptance.hpp"
#include "matchforge/forward.hpp"
#include "matchforge/generator.hpp"
#include "matchforge/inverse.hpp"

namespace {

using namespace matchforge;

struct Prepared {
  ValidatedInstance vi;
  Matching da;
  CostVector cost;
};

Prepared make_prepared(int students, int schools) {
  GenConfig cfg;
  cfg.n_applicants = students;
  cfg.n_programs = schools;
  cfg.rank_min = 2;
  cfg.rank_max = std::min(9, schools);
  cfg.seed = 3;
  ValidatedInstance vi = validate_instance(gen_school_instance(cfg));
  Matching da = student_proposing_da(vi);
  CostVector cost = recover_cost(vi, da, default_prior(vi), 1.0);
  return {std::move(vi), std::move(da), std::move(cost)};
}

const Prepared& prepared(int, int) {
  static const Prepared p = make_prepared(200, 7);
  return p;
}

void BM_RecoverCost(benchmark::State& state) {
  const auto& p = prepared(static_cast<int>(state.range(0)),
                           static_cast<int>(state.range(1)));
  InverseOptions opts;
  opts.verify_forward = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        recover_cost(p.vi, p.da, default_prior(p.vi), 1.0, opts));
  }
}
BENCHMARK(BM_RecoverCost)->Args({200, 7})->Unit(benchmark::kMillisecond);

void BM_ForwardAssign(benchmark::State& state) {
  const auto& p = prepared(static_cast<int>(state.range(0)),
                           static_cast<int>(state.range(1)));
  const double travel = 0.95 * total_travel(p.vi, p.da);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_school(p.vi, p.cost, {1.0, 0.25, 0.25},
                                          p.da.matched_count(), travel));
  }
}
BENCHMARK(BM_ForwardAssign)->Args({200, 7})->Unit(benchmark::kMillisecond);

}  // namespace
