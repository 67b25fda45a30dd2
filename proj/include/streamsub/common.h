// Copyright 2026 The Authors.
//
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

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace streamsub {

// Index into the ground set {0, ..., n-1}.
using ElementId = std::uint32_t;

// A set of elements, always kept sorted with no duplicates. This is the
// representation every oracle accepts.
using ElementSet = std::vector<ElementId>;

// Absolute tolerance for comparisons between objective values.
inline constexpr double kTolerance = 1e-9;

// Raised for malformed caller input (bad ids, out-of-range parameters, caps
// exceeded). The CLI maps it to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline bool is_canonical(std::span<const ElementId> s) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i - 1] >= s[i]) return false;
  }
  return true;
}

// Sorts `ids`; duplicates are rejected rather than merged.
inline ElementSet make_set(std::vector<ElementId> ids) {
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw InputError("duplicate element id in set");
  }
  return ids;
}

inline bool contains(const ElementSet& s, ElementId e) {
  return std::binary_search(s.begin(), s.end(), e);
}

inline ElementSet with_element(const ElementSet& s, ElementId e) {
  ElementSet out;
  out.reserve(s.size() + 1);
  auto it = std::lower_bound(s.begin(), s.end(), e);
  out.insert(out.end(), s.begin(), it);
  if (it == s.end() || *it != e) out.push_back(e);
  out.insert(out.end(), it, s.end());
  return out;
}

inline ElementSet set_union(const ElementSet& a, const ElementSet& b) {
  ElementSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

inline ElementSet set_difference(const ElementSet& a, const ElementSet& b) {
  ElementSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

inline ElementSet set_intersection(const ElementSet& a, const ElementSet& b) {
  ElementSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

inline ElementSet full_set(std::size_t n) {
  ElementSet s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<ElementId>(i);
  return s;
}

// SplitMix64 finalizer, used to derive independent streams from
// (seed, counter) keys.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a,
                             std::uint64_t b = 0) {
  return mix64(mix64(mix64(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

// Seeded generator. Uniform draws are derived from raw engine output so that
// sequences are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double prob) { return uniform() < prob; }

  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw InputError("Rng::below called with bound 0");
    const std::uint64_t limit = -bound % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= limit) return r % bound;
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Counter-based uniform draw in [0, bound) keyed by (seed, a, b). Stateless,
// so the draw for any key can be reconstructed later.
inline std::uint64_t keyed_below(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b, std::uint64_t bound) {
  // 128-bit multiply keeps the bias below 2^-64 * bound.
  const unsigned __int128 prod =
      static_cast<unsigned __int128>(mix_key(seed, a, b)) * bound;
  return static_cast<std::uint64_t>(prod >> 64);
}

}  // namespace streamsub
