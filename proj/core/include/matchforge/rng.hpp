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

#ifndef MATCHFORGE_RNG_HPP_
#define MATCHFORGE_RNG_HPP_

#include <cstdint>

namespace matchforge {

// SplitMix64 (Steele/Lea/Flood). Chosen over std::mt19937_64 because the
// output stream is pinned by the algorithm itself, not by a library
// implementation, so generated instances are bit-identical everywhere.
//
// Stream splitting: every entity (applicant i, program j, pair (i,j)) draws
// from its own generator seeded with derive(root_seed, tag, index...), so the
// draw order of one entity never shifts the draws of another.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random mantissa bits; bit-exact on any
  // IEEE-754 double platform.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Unbiased uniform integer in [0, bound). Lemire's multiply-shift with
  // rejection; bound must be nonzero.
  std::uint64_t next_below(std::uint64_t bound) {
    unsigned __int128 m =
        static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(bound);
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(bound);
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform integer in [lo, hi], inclusive.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    next_below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  // Deterministic substream derivation: feed the parts through one mixing
  // step each so sibling streams are decorrelated.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) {
    SplitMix64 g(seed ^ (0x9E3779B97F4A7C15ULL * (tag + 1)));
    return g.next();
  }
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t tag,
                              std::uint64_t index) {
    return derive(derive(seed, tag), index);
  }
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t tag,
                              std::uint64_t a, std::uint64_t b) {
    return derive(derive(derive(seed, tag), a), b);
  }

 private:
  std::uint64_t state_;
};

}  // namespace matchforge

#endif  // MATCHFORGE_RNG_HPP_
