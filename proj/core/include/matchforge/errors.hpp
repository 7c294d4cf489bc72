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

#ifndef MATCHFORGE_ERRORS_HPP_
#define MATCHFORGE_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace matchforge {

// One code per failure mode surfaced by the library. CLI exit codes are
// derived from the category (usage / infeasible / solver).
enum class Errc {
  // instance validation
  kDuplicateRank,
  kUnknownId,
  kNegativeCapacity,
  kTiedUtility,
  kBrokenCoupleInvolution,
  kNonpositiveUtility,
  kNegativeDistance,
  // queries
  kPairNotAdmissible,
  // generator
  kInfeasibleConfig,
  // matchings
  kInfeasibleMatching,
  // optimization backend
  kMalformedModel,
  kBackendUnavailable,
  kModelTooLarge,
  kNumericalFailure,
  kTimeLimit,
  // problem-level infeasibility
  kInfeasibleBudget,
  kInfeasibleInverse,
  kInfeasibleTarget,
  kAllInfeasible,
  // metrics
  kHypothesisViolated,
  // io
  kIoError,
  kUsage,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// A single validation finding; validate_instance collects all of them
// before failing so callers see every problem at once.
struct Violation {
  Errc code;
  std::string detail;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : Error(violations.empty() ? Errc::kUnknownId : violations.front().code,
              describe(violations)),
        violations_(std::move(violations)) {}
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string describe(const std::vector<Violation>& vs);
  std::vector<Violation> violations_;
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::kDuplicateRank: return "DuplicateRank";
    case Errc::kUnknownId: return "UnknownId";
    case Errc::kNegativeCapacity: return "NegativeCapacity";
    case Errc::kTiedUtility: return "TiedUtility";
    case Errc::kBrokenCoupleInvolution: return "BrokenCoupleInvolution";
    case Errc::kNonpositiveUtility: return "NonpositiveUtility";
    case Errc::kNegativeDistance: return "NegativeDistance";
    case Errc::kPairNotAdmissible: return "PairNotAdmissible";
    case Errc::kInfeasibleConfig: return "InfeasibleConfig";
    case Errc::kInfeasibleMatching: return "InfeasibleMatching";
    case Errc::kMalformedModel: return "MalformedModel";
    case Errc::kBackendUnavailable: return "BackendUnavailable";
    case Errc::kModelTooLarge: return "ModelTooLarge";
    case Errc::kNumericalFailure: return "NumericalFailure";
    case Errc::kTimeLimit: return "TimeLimit";
    case Errc::kInfeasibleBudget: return "InfeasibleBudget";
    case Errc::kInfeasibleInverse: return "InfeasibleInverse";
    case Errc::kInfeasibleTarget: return "InfeasibleTarget";
    case Errc::kAllInfeasible: return "AllInfeasible";
    case Errc::kHypothesisViolated: return "HypothesisViolated";
    case Errc::kIoError: return "IoError";
    case Errc::kUsage: return "Usage";
  }
  return "UnknownError";
}

inline std::string ValidationError::describe(const std::vector<Violation>& vs) {
  if (vs.empty()) return "no violations";
  std::string out = vs.front().detail;
  if (vs.size() > 1) {
    out += " (+" + std::to_string(vs.size() - 1) + " more)";
  }
  return out;
}

}  // namespace matchforge

#endif  // MATCHFORGE_ERRORS_HPP_
