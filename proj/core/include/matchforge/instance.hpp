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

#ifndef MATCHFORGE_INSTANCE_HPP_
#define MATCHFORGE_INSTANCE_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "matchforge/errors.hpp"

namespace matchforge {

// Dense integer ids assigned at load; external string ids live in the
// name tables of Instance and are used only at the I/O boundary.
using ApplicantId = std::int32_t;
using ProgramId = std::int32_t;
// Index into the admissible-pair arrays of ValidatedInstance.
using PairIndex = std::int32_t;

inline constexpr ApplicantId kNoApplicant = -1;
inline constexpr ProgramId kNoProgram = -1;
inline constexpr PairIndex kNoPair = -1;

// One sparse utility entry: applicant side utility p, program side utility q,
// home-to-program distance in miles. Only ranked pairs are stored.
struct RawPair {
  ApplicantId applicant = kNoApplicant;
  ProgramId program = kNoProgram;
  double p = 0.0;
  double q = 0.0;
  double distance = 0.0;
};

// The immutable problem statement, as loaded or generated. Not yet checked;
// run validate_instance to obtain a ValidatedInstance.
struct Instance {
  std::vector<std::string> applicant_names;
  std::vector<std::string> program_names;
  std::vector<int> capacity;  // per program, nonnegative
  std::vector<RawPair> pairs;
  // Partner pairs (involution over a subset of applicants). Each applicant
  // appears in at most one entry.
  std::vector<std::array<ApplicantId, 2>> couples;
};

// Partial assignment applicant -> program with incrementally maintained
// per-program fill counts. Single writer; cheap to copy.
class Matching {
 public:
  Matching() = default;
  Matching(int num_applicants, int num_programs)
      : assigned_(num_applicants, kNoProgram), fill_(num_programs, 0) {}

  int num_applicants() const { return static_cast<int>(assigned_.size()); }
  int num_programs() const { return static_cast<int>(fill_.size()); }

  ProgramId program_of(ApplicantId i) const { return assigned_[i]; }
  bool is_matched(ApplicantId i) const { return assigned_[i] != kNoProgram; }
  int fill(ProgramId j) const { return fill_[j]; }
  int matched_count() const { return matched_; }

  void assign(ApplicantId i, ProgramId j) {
    if (assigned_[i] != kNoProgram) unassign(i);
    assigned_[i] = j;
    ++fill_[j];
    ++matched_;
  }
  void unassign(ApplicantId i) {
    if (assigned_[i] == kNoProgram) return;
    --fill_[assigned_[i]];
    assigned_[i] = kNoProgram;
    --matched_;
  }

  // From-scratch recount, used by audits against the incremental counts.
  std::vector<int> recompute_fill() const {
    std::vector<int> fill(fill_.size(), 0);
    for (ProgramId j : assigned_)
      if (j != kNoProgram) ++fill[j];
    return fill;
  }

  bool operator==(const Matching& other) const {
    return assigned_ == other.assigned_;
  }

 private:
  std::vector<ProgramId> assigned_;
  std::vector<int> fill_;
  int matched_ = 0;
};

// Immutable validated problem with the admissible-pair machinery
// precomputed:
//   - S: pair arrays indexed by PairIndex, grouped per applicant in
//     preference order (descending p);
//   - P(i): contiguous PairIndex range per applicant;
//   - Q(j): PairIndex list per program in descending q;
//   - 1-based ranks and rank fractions per pair.
// Safe to share across threads after construction.
class ValidatedInstance {
 public:
  int num_applicants() const { return static_cast<int>(pref_start_.size()) - 1; }
  int num_programs() const { return static_cast<int>(roster_.size()); }
  PairIndex num_pairs() const { return static_cast<PairIndex>(pair_applicant_.size()); }

  int capacity(ProgramId j) const { return capacity_[j]; }
  long long total_capacity() const { return total_capacity_; }
  int max_pref_len() const { return max_pref_len_; }
  int max_capacity() const { return max_capacity_; }

  ApplicantId pair_applicant(PairIndex s) const { return pair_applicant_[s]; }
  ProgramId pair_program(PairIndex s) const { return pair_program_[s]; }
  double pair_p(PairIndex s) const { return pair_p_[s]; }
  double pair_q(PairIndex s) const { return pair_q_[s]; }
  double pair_distance(PairIndex s) const { return pair_distance_[s]; }

  // P(i) as pair indices, most preferred first.
  struct PrefRange {
    const PairIndex* first;
    const PairIndex* last;
    const PairIndex* begin() const { return first; }
    const PairIndex* end() const { return last; }
    int size() const { return static_cast<int>(last - first); }
    PairIndex operator[](int k) const { return first[k]; }
  };
  PrefRange pref_list(ApplicantId i) const {
    return {pref_order_.data() + pref_start_[i],
            pref_order_.data() + pref_start_[i + 1]};
  }
  int pref_len(ApplicantId i) const { return pref_start_[i + 1] - pref_start_[i]; }

  // Q(j) as pair indices, most preferred first.
  const std::vector<PairIndex>& roster_list(ProgramId j) const { return roster_[j]; }

  // kNoPair when (i, j) is not admissible.
  PairIndex pair_index(ApplicantId i, ProgramId j) const {
    for (PairIndex s : pref_list(i))
      if (pair_program_[s] == j) return s;
    return kNoPair;
  }

  // 1-based rank of the pair's program within P(i) (1 = top choice), and of
  // the pair's applicant within Q(j).
  int rank_in_pref(PairIndex s) const { return rank_in_pref_[s]; }
  int rank_in_roster(PairIndex s) const { return rank_in_roster_[s]; }

  // |P_<(i,j)| / |P(i)|: 0 at the last choice, (|P(i)|-1)/|P(i)| at the top.
  double rank_fraction_applicant(PairIndex s) const { return rf_applicant_[s]; }
  double rank_fraction_applicant(ApplicantId i, ProgramId j) const {
    return rf_applicant_[require_pair(i, j)];
  }
  // |Q_<(i,j)| / |Q(j)|, the program-side mirror.
  double rank_fraction_program(PairIndex s) const { return rf_program_[s]; }
  double rank_fraction_program(ApplicantId i, ProgramId j) const {
    return rf_program_[require_pair(i, j)];
  }

  // Couples: partner id, or kNoApplicant. couple_pairs lists each couple
  // once with the smaller id first.
  ApplicantId partner(ApplicantId i) const { return partner_[i]; }
  bool has_couples() const { return !couple_pairs_.empty(); }
  const std::vector<std::array<ApplicantId, 2>>& couple_pairs() const {
    return couple_pairs_;
  }

  const std::string& applicant_name(ApplicantId i) const {
    return raw_.applicant_names[i];
  }
  const std::string& program_name(ProgramId j) const {
    return raw_.program_names[j];
  }
  ApplicantId applicant_by_name(const std::string& name) const;
  ProgramId program_by_name(const std::string& name) const;

  const Instance& raw() const { return raw_; }

 private:
  friend ValidatedInstance validate_instance(Instance raw);
  ValidatedInstance() = default;

  PairIndex require_pair(ApplicantId i, ProgramId j) const {
    PairIndex s = pair_index(i, j);
    if (s == kNoPair) {
      throw Error(Errc::kPairNotAdmissible,
                  "pair (" + raw_.applicant_names[i] + ", " +
                      raw_.program_names[j] + ") is not admissible");
    }
    return s;
  }

  Instance raw_;
  std::vector<int> capacity_;
  long long total_capacity_ = 0;
  int max_pref_len_ = 0;
  int max_capacity_ = 0;

  // Pair arrays in canonical order: applicant ascending, then p descending.
  std::vector<ApplicantId> pair_applicant_;
  std::vector<ProgramId> pair_program_;
  std::vector<double> pair_p_, pair_q_, pair_distance_;

  std::vector<int> pref_start_;        // size |I|+1
  std::vector<PairIndex> pref_order_;  // == identity under canonical order
  std::vector<std::vector<PairIndex>> roster_;

  std::vector<int> rank_in_pref_, rank_in_roster_;
  std::vector<double> rf_applicant_, rf_program_;

  std::vector<ApplicantId> partner_;
  std::vector<std::array<ApplicantId, 2>> couple_pairs_;
};

// Collects every violation without throwing. Empty result means valid.
std::vector<Violation> check_instance(const Instance& raw);

// Returns the instance with the admissible-pair machinery precomputed;
// throws ValidationError carrying the full violation list otherwise.
ValidatedInstance validate_instance(Instance raw);

// Throws kInfeasibleMatching if any assigned pair is inadmissible or a
// capacity is exceeded.
void require_feasible(const ValidatedInstance& inst, const Matching& m);

double total_travel(const ValidatedInstance& inst, const Matching& m);

// Instance JSON file format (schema in docs/formats.md).
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);
std::string instance_to_json_string(const Instance& inst);
Instance instance_from_json_string(const std::string& text);

// Matching CSV: header "applicant,program,rank_of_match", one row per
// matched applicant in dense-id order.
void save_matching_csv(const ValidatedInstance& inst, const Matching& m,
                       const std::string& path);
Matching load_matching_csv(const ValidatedInstance& inst,
                           const std::string& path);

}  // namespace matchforge

#endif  // MATCHFORGE_INSTANCE_HPP_
