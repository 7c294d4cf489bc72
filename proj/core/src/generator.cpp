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

#include "matchforge/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "matchforge/rng.hpp"

namespace matchforge {

namespace {

// Substream tags; the numbering is part of the reproducibility contract.
enum StreamTag : std::uint64_t {
  kTagProgram = 1,    // per program: x, y, quality
  kTagApplicant = 2,  // per applicant: x, y, phi index, list length k
  kTagStudentNoise = 3,  // per (applicant, program): X
  kTagProgramNoise = 4,  // per (applicant, program): Y
};

// Square side such that the diagonal is 15 miles.
constexpr double kRegionDiagonalMiles = 15.0;

struct Placed {
  std::vector<double> ax, ay;  // applicants
  std::vector<double> px, py;  // programs
  std::vector<double> quality;
  std::vector<double> phi;
  std::vector<int> list_len;
};

std::string padded_name(const char* prefix, int index, int count) {
  int width = 1;
  for (int v = count - 1; v >= 10; v /= 10) ++width;
  std::string digits = std::to_string(index);
  return prefix + std::string(width - static_cast<int>(digits.size()), '0') +
         digits;
}

Placed place_entities(const GenConfig& cfg) {
  Placed out;
  const double side = kRegionDiagonalMiles / std::sqrt(2.0);
  out.px.resize(cfg.n_programs);
  out.py.resize(cfg.n_programs);
  out.quality.resize(cfg.n_programs);
  for (int j = 0; j < cfg.n_programs; ++j) {
    SplitMix64 g(SplitMix64::derive(cfg.seed, kTagProgram, j));
    out.px[j] = g.next_double() * side;
    out.py[j] = g.next_double() * side;
    out.quality[j] = g.next_double();
  }
  out.ax.resize(cfg.n_applicants);
  out.ay.resize(cfg.n_applicants);
  out.phi.resize(cfg.n_applicants);
  out.list_len.resize(cfg.n_applicants);
  for (int i = 0; i < cfg.n_applicants; ++i) {
    SplitMix64 g(SplitMix64::derive(cfg.seed, kTagApplicant, i));
    out.ax[i] = g.next_double() * side;
    out.ay[i] = g.next_double() * side;
    out.phi[i] =
        cfg.phi_values[g.next_below(cfg.phi_values.size())];
    out.list_len[i] =
        static_cast<int>(g.next_int(cfg.rank_min, cfg.rank_max));
  }
  return out;
}

double pair_distance_miles(const Placed& pl, int i, int j) {
  const double dx = pl.ax[i] - pl.px[j];
  const double dy = pl.ay[i] - pl.py[j];
  return std::hypot(dx, dy);
}

std::vector<int> capacities(const GenConfig& cfg) {
  long long total = std::llround(cfg.total_capacity_factor * cfg.n_applicants);
  std::vector<int> cap(cfg.n_programs, 0);
  if (cfg.n_programs == 0) return cap;
  long long base = total / cfg.n_programs;
  long long rem = total % cfg.n_programs;
  for (int j = 0; j < cfg.n_programs; ++j) {
    cap[j] = static_cast<int>(base + (j < rem ? 1 : 0));
  }
  return cap;
}

double student_utility(const GenConfig& cfg, double phi, double dist,
                       double dhat, double quality, double noise) {
  if (cfg.literal_distance_term) {
    return 0.5 * phi * dist + 0.5 * phi * quality + (1.0 - phi) * noise;
  }
  return 0.5 * phi * (1.0 - dhat) + 0.5 * phi * quality + (1.0 - phi) * noise;
}

double program_utility(const GenConfig& cfg, double dist, double dhat,
                       double noise) {
  if (cfg.literal_distance_term) {
    return cfg.mu * dist + (1.0 - cfg.mu) * noise;
  }
  return cfg.mu * (1.0 - dhat) + (1.0 - cfg.mu) * noise;
}

Instance generate(const GenConfig& cfg, bool with_couples) {
  check_config(cfg);
  const Placed pl = place_entities(cfg);

  // Distance normalizer: maximum over all applicant x program pairs.
  double dmax = 0.0;
  for (int i = 0; i < cfg.n_applicants; ++i)
    for (int j = 0; j < cfg.n_programs; ++j)
      dmax = std::max(dmax, pair_distance_miles(pl, i, j));
  if (dmax <= 0.0) dmax = 1.0;

  Instance inst;
  inst.applicant_names.reserve(cfg.n_applicants);
  for (int i = 0; i < cfg.n_applicants; ++i)
    inst.applicant_names.push_back(padded_name("a", i, cfg.n_applicants));
  for (int j = 0; j < cfg.n_programs; ++j)
    inst.program_names.push_back(padded_name("s", j, cfg.n_programs));
  inst.capacity = capacities(cfg);

  // Shared valid sets for couples: member 2k+1 adopts member 2k's set.
  std::vector<int> set_owner(cfg.n_applicants);
  std::iota(set_owner.begin(), set_owner.end(), 0);
  if (with_couples) {
    for (int c = 0; c + 1 < cfg.couples_count; c += 2) {
      set_owner[c + 1] = c;
      inst.couples.push_back({c, c + 1});
    }
  }

  auto utilities_for = [&](int i) {
    std::vector<double> util(cfg.n_programs);
    for (int j = 0; j < cfg.n_programs; ++j) {
      const double d = pair_distance_miles(pl, i, j);
      SplitMix64 g(SplitMix64::derive(cfg.seed, kTagStudentNoise, i, j));
      util[j] = student_utility(cfg, pl.phi[i], d, d / dmax, pl.quality[j],
                                g.next_double()) +
                1e-9 * (j + 1);
    }
    return util;
  };

  // Valid-program set per applicant: the set owner's top-k by the owner's
  // utilities; couples therefore share sets while each member orders its own.
  std::vector<std::vector<int>> valid_set(cfg.n_applicants);
  for (int i = 0; i < cfg.n_applicants; ++i) {
    if (set_owner[i] != i) continue;
    std::vector<double> util = utilities_for(i);
    std::vector<int> order(cfg.n_programs);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return util[a] > util[b]; });
    order.resize(pl.list_len[i]);
    std::sort(order.begin(), order.end());
    valid_set[i] = std::move(order);
  }
  for (int i = 0; i < cfg.n_applicants; ++i) {
    if (set_owner[i] != i) valid_set[i] = valid_set[set_owner[i]];
  }

  for (int i = 0; i < cfg.n_applicants; ++i) {
    std::vector<double> util = utilities_for(i);
    for (int j : valid_set[i]) {
      const double d = pair_distance_miles(pl, i, j);
      SplitMix64 g(SplitMix64::derive(cfg.seed, kTagProgramNoise, i, j));
      RawPair e;
      e.applicant = i;
      e.program = j;
      e.p = util[j];
      e.q = program_utility(cfg, d, d / dmax, g.next_double()) + 1e-9 * (i + 1);
      e.distance = d;
      inst.pairs.push_back(e);
    }
  }
  return inst;
}

}  // namespace

void check_config(const GenConfig& cfg) {
  auto fail = [](const std::string& what) {
    throw Error(Errc::kInfeasibleConfig, what);
  };
  if (cfg.n_applicants < 0) fail("n_applicants must be nonnegative");
  if (cfg.n_programs <= 0) fail("n_programs must be positive");
  if (cfg.total_capacity_factor <= 0.0) fail("total_capacity_factor must be positive");
  if (cfg.phi_values.empty()) fail("phi_values must be nonempty");
  for (double phi : cfg.phi_values) {
    if (!(phi >= 0.0 && phi <= 1.0)) fail("phi values must lie in [0,1]");
  }
  if (!(cfg.mu >= 0.0 && cfg.mu <= 1.0)) fail("mu must lie in [0,1]");
  if (cfg.rank_min < 1 || cfg.rank_min > cfg.rank_max) {
    fail("rank range must satisfy 1 <= min <= max");
  }
  if (cfg.rank_max > cfg.n_programs) {
    fail("rank range exceeds the number of programs (" +
         std::to_string(cfg.rank_max) + " > " +
         std::to_string(cfg.n_programs) + ")");
  }
  if (cfg.couples_count < 0 || cfg.couples_count % 2 != 0) {
    fail("couples_count must be even and nonnegative");
  }
  if (cfg.couples_count > cfg.n_applicants) {
    fail("couples_count exceeds n_applicants");
  }
}

Instance gen_school_instance(const GenConfig& config) {
  return generate(config, /*with_couples=*/false);
}

Instance gen_residency_instance(const GenConfig& config) {
  return generate(config, /*with_couples=*/true);
}

}  // namespace matchforge
