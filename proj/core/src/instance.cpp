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

#include "matchforge/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace matchforge {

namespace {

using json = nlohmann::json;

std::string pair_label(const Instance& raw, const RawPair& e) {
  std::string a = (e.applicant >= 0 &&
                   e.applicant < static_cast<int>(raw.applicant_names.size()))
                      ? raw.applicant_names[e.applicant]
                      : ("#" + std::to_string(e.applicant));
  std::string p = (e.program >= 0 &&
                   e.program < static_cast<int>(raw.program_names.size()))
                      ? raw.program_names[e.program]
                      : ("#" + std::to_string(e.program));
  return "(" + a + ", " + p + ")";
}

}  // namespace

std::vector<Violation> check_instance(const Instance& raw) {
  std::vector<Violation> out;
  const int ni = static_cast<int>(raw.applicant_names.size());
  const int nj = static_cast<int>(raw.program_names.size());

  if (static_cast<int>(raw.capacity.size()) != nj) {
    out.push_back({Errc::kNegativeCapacity,
                   "capacity table size differs from program count"});
    return out;
  }
  for (ProgramId j = 0; j < nj; ++j) {
    if (raw.capacity[j] < 0) {
      out.push_back({Errc::kNegativeCapacity,
                     "program " + raw.program_names[j] + " has capacity " +
                         std::to_string(raw.capacity[j])});
    }
  }

  std::vector<std::vector<std::pair<ProgramId, double>>> by_applicant(ni);
  std::vector<std::vector<std::pair<ApplicantId, double>>> by_program(nj);
  for (const RawPair& e : raw.pairs) {
    if (e.applicant < 0 || e.applicant >= ni || e.program < 0 ||
        e.program >= nj) {
      out.push_back({Errc::kUnknownId,
                     "preference entry " + pair_label(raw, e) +
                         " references an unknown id"});
      continue;
    }
    if (!(e.p > 0.0) || std::isnan(e.p)) {
      out.push_back({Errc::kNonpositiveUtility,
                     "p must be strictly positive at " + pair_label(raw, e)});
    }
    if (!(e.q > 0.0) || std::isnan(e.q)) {
      out.push_back({Errc::kNonpositiveUtility,
                     "q must be strictly positive at " + pair_label(raw, e)});
    }
    if (e.distance < 0.0 || std::isnan(e.distance)) {
      out.push_back({Errc::kNegativeDistance,
                     "distance must be nonnegative at " + pair_label(raw, e)});
    }
    by_applicant[e.applicant].push_back({e.program, e.p});
    by_program[e.program].push_back({e.applicant, e.q});
  }

  for (ApplicantId i = 0; i < ni; ++i) {
    auto& lst = by_applicant[i];
    std::sort(lst.begin(), lst.end());
    for (size_t k = 1; k < lst.size(); ++k) {
      if (lst[k].first == lst[k - 1].first) {
        out.push_back({Errc::kDuplicateRank,
                       "applicant " + raw.applicant_names[i] +
                           " ranks program " +
                           raw.program_names[lst[k].first] + " twice"});
      }
    }
    // Exact ties in p within one list break the strict preference order.
    std::vector<double> ps;
    ps.reserve(lst.size());
    for (auto& e : lst) ps.push_back(e.second);
    std::sort(ps.begin(), ps.end());
    for (size_t k = 1; k < ps.size(); ++k) {
      if (ps[k] == ps[k - 1]) {
        out.push_back({Errc::kTiedUtility,
                       "applicant " + raw.applicant_names[i] +
                           " has two programs with identical utility"});
        break;
      }
    }
  }
  for (ProgramId j = 0; j < nj; ++j) {
    auto& lst = by_program[j];
    std::vector<double> qs;
    qs.reserve(lst.size());
    for (auto& e : lst) qs.push_back(e.second);
    std::sort(qs.begin(), qs.end());
    for (size_t k = 1; k < qs.size(); ++k) {
      if (qs[k] == qs[k - 1]) {
        out.push_back({Errc::kTiedUtility,
                       "program " + raw.program_names[j] +
                           " has two applicants with identical utility"});
        break;
      }
    }
  }

  // Couples must form an involution without fixed points, and both members
  // must rank the same set of programs.
  std::vector<ApplicantId> partner(ni, kNoApplicant);
  for (const auto& c : raw.couples) {
    if (c[0] < 0 || c[0] >= ni || c[1] < 0 || c[1] >= ni) {
      out.push_back({Errc::kUnknownId, "couple references an unknown applicant"});
      continue;
    }
    if (c[0] == c[1]) {
      out.push_back({Errc::kBrokenCoupleInvolution,
                     "applicant " + raw.applicant_names[c[0]] +
                         " is paired with itself"});
      continue;
    }
    if (partner[c[0]] != kNoApplicant || partner[c[1]] != kNoApplicant) {
      out.push_back({Errc::kBrokenCoupleInvolution,
                     "applicant " + raw.applicant_names[c[0]] + " or " +
                         raw.applicant_names[c[1]] +
                         " appears in more than one couple"});
      continue;
    }
    partner[c[0]] = c[1];
    partner[c[1]] = c[0];
    auto programs_of = [&](ApplicantId i) {
      std::vector<ProgramId> v;
      for (auto& e : by_applicant[i]) v.push_back(e.first);
      return v;  // already sorted by program id
    };
    if (programs_of(c[0]) != programs_of(c[1])) {
      out.push_back({Errc::kBrokenCoupleInvolution,
                     "couple (" + raw.applicant_names[c[0]] + ", " +
                         raw.applicant_names[c[1]] +
                         ") does not share one valid-program set"});
    }
  }

  return out;
}

ValidatedInstance validate_instance(Instance raw) {
  std::vector<Violation> violations = check_instance(raw);
  if (!violations.empty()) throw ValidationError(std::move(violations));

  const int ni = static_cast<int>(raw.applicant_names.size());
  const int nj = static_cast<int>(raw.program_names.size());

  ValidatedInstance vi;
  vi.capacity_ = raw.capacity;
  vi.total_capacity_ =
      std::accumulate(vi.capacity_.begin(), vi.capacity_.end(), 0LL);
  vi.max_capacity_ = vi.capacity_.empty()
                         ? 0
                         : *std::max_element(vi.capacity_.begin(), vi.capacity_.end());

  // Canonical pair order: applicant ascending, utility descending.
  std::vector<int> order(raw.pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (raw.pairs[a].applicant != raw.pairs[b].applicant)
      return raw.pairs[a].applicant < raw.pairs[b].applicant;
    return raw.pairs[a].p > raw.pairs[b].p;
  });

  const PairIndex ns = static_cast<PairIndex>(raw.pairs.size());
  vi.pair_applicant_.resize(ns);
  vi.pair_program_.resize(ns);
  vi.pair_p_.resize(ns);
  vi.pair_q_.resize(ns);
  vi.pair_distance_.resize(ns);
  for (PairIndex s = 0; s < ns; ++s) {
    const RawPair& e = raw.pairs[order[s]];
    vi.pair_applicant_[s] = e.applicant;
    vi.pair_program_[s] = e.program;
    vi.pair_p_[s] = e.p;
    vi.pair_q_[s] = e.q;
    vi.pair_distance_[s] = e.distance;
  }

  vi.pref_start_.assign(ni + 1, 0);
  for (PairIndex s = 0; s < ns; ++s) ++vi.pref_start_[vi.pair_applicant_[s] + 1];
  for (int i = 0; i < ni; ++i) vi.pref_start_[i + 1] += vi.pref_start_[i];
  vi.pref_order_.resize(ns);
  std::iota(vi.pref_order_.begin(), vi.pref_order_.end(), 0);

  vi.rank_in_pref_.resize(ns);
  vi.rf_applicant_.resize(ns);
  for (ApplicantId i = 0; i < ni; ++i) {
    const int len = vi.pref_start_[i + 1] - vi.pref_start_[i];
    vi.max_pref_len_ = std::max(vi.max_pref_len_, len);
    for (int k = 0; k < len; ++k) {
      PairIndex s = vi.pref_start_[i] + k;
      vi.rank_in_pref_[s] = k + 1;
      vi.rf_applicant_[s] = static_cast<double>(len - (k + 1)) / len;
    }
  }

  vi.roster_.assign(nj, {});
  for (PairIndex s = 0; s < ns; ++s) vi.roster_[vi.pair_program_[s]].push_back(s);
  vi.rank_in_roster_.resize(ns);
  vi.rf_program_.resize(ns);
  for (ProgramId j = 0; j < nj; ++j) {
    auto& lst = vi.roster_[j];
    std::sort(lst.begin(), lst.end(), [&](PairIndex a, PairIndex b) {
      return vi.pair_q_[a] > vi.pair_q_[b];
    });
    const int len = static_cast<int>(lst.size());
    for (int k = 0; k < len; ++k) {
      vi.rank_in_roster_[lst[k]] = k + 1;
      vi.rf_program_[lst[k]] = static_cast<double>(len - (k + 1)) / len;
    }
  }

  vi.partner_.assign(ni, kNoApplicant);
  for (const auto& c : raw.couples) {
    vi.partner_[c[0]] = c[1];
    vi.partner_[c[1]] = c[0];
    ApplicantId lo = std::min(c[0], c[1]), hi = std::max(c[0], c[1]);
    vi.couple_pairs_.push_back({lo, hi});
  }
  std::sort(vi.couple_pairs_.begin(), vi.couple_pairs_.end());

  vi.raw_ = std::move(raw);
  return vi;
}

ApplicantId ValidatedInstance::applicant_by_name(const std::string& name) const {
  for (ApplicantId i = 0; i < num_applicants(); ++i)
    if (raw_.applicant_names[i] == name) return i;
  throw Error(Errc::kUnknownId, "unknown applicant '" + name + "'");
}

ProgramId ValidatedInstance::program_by_name(const std::string& name) const {
  for (ProgramId j = 0; j < num_programs(); ++j)
    if (raw_.program_names[j] == name) return j;
  throw Error(Errc::kUnknownId, "unknown program '" + name + "'");
}

void require_feasible(const ValidatedInstance& inst, const Matching& m) {
  if (m.num_applicants() != inst.num_applicants() ||
      m.num_programs() != inst.num_programs()) {
    throw Error(Errc::kInfeasibleMatching,
                "matching shape does not fit the instance");
  }
  for (ApplicantId i = 0; i < inst.num_applicants(); ++i) {
    ProgramId j = m.program_of(i);
    if (j == kNoProgram) continue;
    if (inst.pair_index(i, j) == kNoPair) {
      throw Error(Errc::kInfeasibleMatching,
                  "assigned pair (" + inst.applicant_name(i) + ", " +
                      inst.program_name(j) + ") is not admissible");
    }
  }
  for (ProgramId j = 0; j < inst.num_programs(); ++j) {
    if (m.fill(j) > inst.capacity(j)) {
      throw Error(Errc::kInfeasibleMatching,
                  "program " + inst.program_name(j) + " is over capacity");
    }
  }
}

double total_travel(const ValidatedInstance& inst, const Matching& m) {
  double sum = 0.0;
  for (ApplicantId i = 0; i < inst.num_applicants(); ++i) {
    ProgramId j = m.program_of(i);
    if (j == kNoProgram) continue;
    sum += inst.pair_distance(inst.pair_index(i, j));
  }
  return sum;
}

// ---------------------------------------------------------------------------
// JSON instance format

std::string instance_to_json_string(const Instance& inst) {
  json doc;
  doc["applicants"] = inst.applicant_names;
  json programs = json::array();
  for (size_t j = 0; j < inst.program_names.size(); ++j) {
    programs.push_back({{"id", inst.program_names[j]},
                        {"capacity", inst.capacity[j]}});
  }
  doc["programs"] = programs;
  json prefs = json::array();
  for (const RawPair& e : inst.pairs) {
    prefs.push_back({{"applicant", inst.applicant_names[e.applicant]},
                     {"program", inst.program_names[e.program]},
                     {"p", e.p},
                     {"q", e.q},
                     {"distance", e.distance}});
  }
  doc["preferences"] = prefs;
  if (!inst.couples.empty()) {
    json couples = json::array();
    for (const auto& c : inst.couples) {
      couples.push_back({inst.applicant_names[c[0]], inst.applicant_names[c[1]]});
    }
    doc["couples"] = couples;
  }
  return doc.dump(2) + "\n";
}

Instance instance_from_json_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::kIoError, std::string("instance JSON parse: ") + e.what());
  }
  try {
    Instance inst;
    std::unordered_map<std::string, ApplicantId> amap;
    std::unordered_map<std::string, ProgramId> pmap;
    for (const auto& a : doc.at("applicants")) {
      std::string name = a.get<std::string>();
      if (!amap.emplace(name, static_cast<ApplicantId>(inst.applicant_names.size()))
               .second) {
        throw Error(Errc::kUnknownId, "duplicate applicant id '" + name + "'");
      }
      inst.applicant_names.push_back(std::move(name));
    }
    for (const auto& pr : doc.at("programs")) {
      std::string name = pr.at("id").get<std::string>();
      if (!pmap.emplace(name, static_cast<ProgramId>(inst.program_names.size()))
               .second) {
        throw Error(Errc::kUnknownId, "duplicate program id '" + name + "'");
      }
      inst.program_names.push_back(std::move(name));
      inst.capacity.push_back(pr.at("capacity").get<int>());
    }
    auto applicant_of = [&](const std::string& name) -> ApplicantId {
      auto it = amap.find(name);
      if (it == amap.end())
        throw Error(Errc::kUnknownId, "unknown applicant '" + name + "'");
      return it->second;
    };
    auto program_of = [&](const std::string& name) -> ProgramId {
      auto it = pmap.find(name);
      if (it == pmap.end())
        throw Error(Errc::kUnknownId, "unknown program '" + name + "'");
      return it->second;
    };
    for (const auto& e : doc.at("preferences")) {
      RawPair p;
      p.applicant = applicant_of(e.at("applicant").get<std::string>());
      p.program = program_of(e.at("program").get<std::string>());
      p.p = e.at("p").get<double>();
      p.q = e.at("q").get<double>();
      p.distance = e.at("distance").get<double>();
      inst.pairs.push_back(p);
    }
    if (doc.contains("couples")) {
      for (const auto& c : doc.at("couples")) {
        inst.couples.push_back({applicant_of(c.at(0).get<std::string>()),
                                applicant_of(c.at(1).get<std::string>())});
      }
    }
    return inst;
  } catch (const json::exception& e) {
    throw Error(Errc::kIoError, std::string("instance JSON schema: ") + e.what());
  }
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json_string(buf.str());
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIoError, "cannot write '" + path + "'");
  out << instance_to_json_string(inst);
  if (!out) throw Error(Errc::kIoError, "short write to '" + path + "'");
}

// ---------------------------------------------------------------------------
// Matching CSV

void save_matching_csv(const ValidatedInstance& inst, const Matching& m,
                       const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIoError, "cannot write '" + path + "'");
  out << "applicant,program,rank_of_match\n";
  for (ApplicantId i = 0; i < inst.num_applicants(); ++i) {
    ProgramId j = m.program_of(i);
    if (j == kNoProgram) continue;
    PairIndex s = inst.pair_index(i, j);
    out << inst.applicant_name(i) << ',' << inst.program_name(j) << ','
        << inst.rank_in_pref(s) << '\n';
  }
  if (!out) throw Error(Errc::kIoError, "short write to '" + path + "'");
}

Matching load_matching_csv(const ValidatedInstance& inst,
                           const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open '" + path + "'");
  Matching m(inst.num_applicants(), inst.num_programs());
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(Errc::kIoError, "empty matching file '" + path + "'");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string a, p;
    if (!std::getline(ls, a, ',') || !std::getline(ls, p, ',')) {
      throw Error(Errc::kIoError, "malformed matching row: " + line);
    }
    ApplicantId i = inst.applicant_by_name(a);
    ProgramId j = inst.program_by_name(p);
    if (m.is_matched(i)) {
      throw Error(Errc::kInfeasibleMatching,
                  "applicant '" + a + "' assigned twice in '" + path + "'");
    }
    m.assign(i, j);
  }
  require_feasible(inst, m);
  return m;
}

}  // namespace matchforge
