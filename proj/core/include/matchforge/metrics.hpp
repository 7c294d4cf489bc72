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

#ifndef MATCHFORGE_METRICS_HPP_
#define MATCHFORGE_METRICS_HPP_

#include <map>
#include <string>
#include <vector>

#include "matchforge/instance.hpp"

namespace matchforge {

// Assignment quality summary. Travel averages cover matched applicants only;
// bp_pct is the blocking-pair count divided by |S| (a fraction);
// travel_reduction_pct is a percentage relative to the baseline average.
struct MetricsReport {
  int matched_count = 0;
  int unmatched_count = 0;
  double avg_travel_miles = 0.0;
  double total_travel = 0.0;
  long long bp_count = 0;
  double bp_pct = 0.0;
  std::map<int, long long> rank_histogram;  // 1-based rank of match -> count
  int couples_same_location = 0;            // couple pairs co-assigned
  bool has_baseline = false;
  double travel_reduction_pct = 0.0;
};

// Blocking pairs are recomputed by the oracle, never taken from a solver.
MetricsReport compute_metrics(const ValidatedInstance& inst, const Matching& m,
                              const Matching* baseline = nullptr);

// exp(-(eps - L*sigma*sqrt(s))^2 / (2 L^2 sigma^2)); requires
// eps > L*sigma*sqrt(s), otherwise throws kHypothesisViolated.
double tail_bound(double eps, double sigma, double lipschitz, long long s_size);

// 6-significant-digit rendering used by every emitted file.
std::string format_g6(double v);

// Plain table with a fixed column order; cells are pre-rendered strings.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};
std::string table_to_csv(const Table& table);

std::string metrics_to_json_string(const MetricsReport& report);
MetricsReport metrics_from_json_string(const std::string& text);
std::string metrics_to_csv_string(const MetricsReport& report);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace matchforge

#endif  // MATCHFORGE_METRICS_HPP_
