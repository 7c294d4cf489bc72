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

#include "matchforge/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "matchforge/blocking.hpp"

namespace matchforge {

MetricsReport compute_metrics(const ValidatedInstance& inst, const Matching& m,
                              const Matching* baseline) {
  const BlockingReport blocking = count_blocking_pairs(inst, m);

  MetricsReport r;
  r.matched_count = m.matched_count();
  r.unmatched_count = inst.num_applicants() - r.matched_count;
  r.bp_count = blocking.count;
  r.bp_pct = blocking.pct_of_admissible;

  for (ApplicantId i = 0; i < inst.num_applicants(); ++i) {
    ProgramId j = m.program_of(i);
    if (j == kNoProgram) continue;
    PairIndex s = inst.pair_index(i, j);
    r.total_travel += inst.pair_distance(s);
    ++r.rank_histogram[inst.rank_in_pref(s)];
  }
  r.avg_travel_miles =
      r.matched_count > 0 ? r.total_travel / r.matched_count : 0.0;

  for (const auto& c : inst.couple_pairs()) {
    if (m.is_matched(c[0]) && m.program_of(c[0]) == m.program_of(c[1])) {
      ++r.couples_same_location;
    }
  }

  if (baseline != nullptr) {
    r.has_baseline = true;
    double base_total = 0.0;
    int base_matched = 0;
    for (ApplicantId i = 0; i < inst.num_applicants(); ++i) {
      ProgramId j = baseline->program_of(i);
      if (j == kNoProgram) continue;
      base_total += inst.pair_distance(inst.pair_index(i, j));
      ++base_matched;
    }
    const double base_avg = base_matched > 0 ? base_total / base_matched : 0.0;
    r.travel_reduction_pct =
        base_avg > 0.0 ? 100.0 * (base_avg - r.avg_travel_miles) / base_avg : 0.0;
  }
  return r;
}

double tail_bound(double eps, double sigma, double lipschitz, long long s_size) {
  if (!(sigma > 0.0) || !(lipschitz > 0.0) || s_size < 0) {
    throw Error(Errc::kHypothesisViolated,
                "tail bound requires sigma > 0, L > 0, |S| >= 0");
  }
  const double threshold =
      lipschitz * sigma * std::sqrt(static_cast<double>(s_size));
  if (!(eps > threshold)) {
    throw Error(Errc::kHypothesisViolated,
                "eps must exceed L*sigma*sqrt(|S|) = " + format_g6(threshold));
  }
  const double t = eps - threshold;
  return std::exp(-(t * t) / (2.0 * lipschitz * lipschitz * sigma * sigma));
}

std::string format_g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string table_to_csv(const Table& table) {
  std::string out;
  for (size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += row[c];
    }
    out += '\n';
  }
  return out;
}

namespace {

// Emitted numbers are rounded to 6 significant digits so that a report
// round-trips bit-exactly through its own serialization.
double g6(double v) { return std::stod(format_g6(v)); }

}  // namespace

std::string metrics_to_json_string(const MetricsReport& r) {
  nlohmann::json doc;
  doc["matched_count"] = r.matched_count;
  doc["unmatched_count"] = r.unmatched_count;
  doc["avg_travel_miles"] = g6(r.avg_travel_miles);
  doc["total_travel"] = g6(r.total_travel);
  doc["bp_count"] = r.bp_count;
  doc["bp_pct"] = g6(r.bp_pct);
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [rank, count] : r.rank_histogram)
    hist[std::to_string(rank)] = count;
  doc["rank_histogram"] = hist;
  doc["couples_same_location"] = r.couples_same_location;
  if (r.has_baseline) doc["travel_reduction_pct"] = g6(r.travel_reduction_pct);
  return doc.dump(2) + "\n";
}

MetricsReport metrics_from_json_string(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    MetricsReport r;
    r.matched_count = doc.at("matched_count").get<int>();
    r.unmatched_count = doc.at("unmatched_count").get<int>();
    r.avg_travel_miles = doc.at("avg_travel_miles").get<double>();
    r.total_travel = doc.at("total_travel").get<double>();
    r.bp_count = doc.at("bp_count").get<long long>();
    r.bp_pct = doc.at("bp_pct").get<double>();
    for (auto& [key, value] : doc.at("rank_histogram").items()) {
      r.rank_histogram[std::stoi(key)] = value.get<long long>();
    }
    r.couples_same_location = doc.at("couples_same_location").get<int>();
    if (doc.contains("travel_reduction_pct")) {
      r.has_baseline = true;
      r.travel_reduction_pct = doc.at("travel_reduction_pct").get<double>();
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kIoError, std::string("metrics JSON: ") + e.what());
  }
}

std::string metrics_to_csv_string(const MetricsReport& r) {
  Table t;
  t.columns = {"matched_count", "unmatched_count", "avg_travel_miles",
               "total_travel", "bp_count", "bp_pct", "rank_histogram",
               "couples_same_location", "travel_reduction_pct"};
  std::string hist;
  for (const auto& [rank, count] : r.rank_histogram) {
    if (!hist.empty()) hist += ';';
    hist += std::to_string(rank) + ":" + std::to_string(count);
  }
  t.rows.push_back({std::to_string(r.matched_count),
                    std::to_string(r.unmatched_count),
                    format_g6(r.avg_travel_miles), format_g6(r.total_travel),
                    std::to_string(r.bp_count), format_g6(r.bp_pct), hist,
                    std::to_string(r.couples_same_location),
                    r.has_baseline ? format_g6(r.travel_reduction_pct) : ""});
  return table_to_csv(t);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIoError, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(Errc::kIoError, "short write to '" + path + "'");
}

}  // namespace matchforge
