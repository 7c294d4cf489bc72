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
#include "matchforge/blocking.hpp"
#include "matchforge/deferred_acceptance.hpp"
#include "matchforge/generator.hpp"

namespace {

using namespace matchforge;

ValidatedInstance bench_instance(int students, int schools) {
  GenConfig cfg;
  cfg.n_applicants = students;
  cfg.n_programs = schools;
  cfg.rank_min = 2;
  cfg.rank_max = std::min(9, schools);
  cfg.seed = 1;
  return validate_instance(gen_school_instance(cfg));
}

void BM_Generate(benchmark::State& state) {
  GenConfig cfg;
  cfg.n_applicants = static_cast<int>(state.range(0));
  cfg.n_programs = static_cast<int>(state.range(1));
  cfg.rank_min = 2;
  cfg.rank_max = std::min(9, cfg.n_programs);
  cfg.seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen_school_instance(cfg));
  }
}
BENCHMARK(BM_Generate)->Args({1000, 20})->Args({16255, 92});

void BM_StudentDa(benchmark::State& state) {
  const ValidatedInstance vi = bench_instance(
      static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(student_proposing_da(vi));
  }
}
BENCHMARK(BM_StudentDa)->Args({1000, 20})->Args({16255, 92});

void BM_CountBlocking(benchmark::State& state) {
  const ValidatedInstance vi = bench_instance(
      static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const Matching m = student_proposing_da(vi);
  for (auto _ : state) {
    benchmark::DoNotOptimize(count_blocking(vi, m));
  }
}
BENCHMARK(BM_CountBlocking)->Args({1000, 20})->Args({16255, 92});

}  // namespace
