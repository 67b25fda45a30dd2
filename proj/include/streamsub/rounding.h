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

//
// Dependent rounding of a point of the cardinality polytope
// {x in [0,1]^N : |x|_1 <= k} to a set of size at most k.
//
// Both roundings repeatedly merge the two lowest-id strictly fractional
// coordinates (a, b), moving mass between them along e - e' until one of them
// becomes integral:
//   a + b <= 1:  (a + b, 0)  or  (0, a + b)
//   a + b >  1:  (1, a + b - 1)  or  (a + b - 1, 1)
// swap_round picks the branch at random so that E[x] is preserved;
// pipage_round_deterministic picks the branch with the larger multilinear
// value, which never decreases F since F is convex along e - e'.
//

#pragma once

#include <cmath>
#include <vector>

#include "streamsub/extensions.h"

namespace streamsub {

// Coordinates within this distance of 0 or 1 are treated as integral.
inline constexpr double kIntegralityGuard = 1e-12;

namespace detail {

struct Coord {
  ElementId e;
  double v;
};

inline bool is_fractional(double v) {
  return v > kIntegralityGuard && v < 1.0 - kIntegralityGuard;
}

inline std::vector<Coord> checked_coords(const FractionalPoint& x,
                                         std::size_t k) {
  if (x.l1() > static_cast<double>(k) + kTolerance) {
    throw InputError("rounding input has |x|_1 = " + std::to_string(x.l1()) +
                     " > k = " + std::to_string(k));
  }
  std::vector<Coord> coords;
  for (const auto& [e, v] : x.coords()) coords.push_back({e, v});
  return coords;
}

// Indices of the two lowest-id fractional coordinates; second is npos when
// fewer than two exist.
inline std::pair<std::size_t, std::size_t> lowest_fractional_pair(
    const std::vector<Coord>& coords) {
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t first = npos, second = npos;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!is_fractional(coords[i].v)) continue;
    if (first == npos) {
      first = i;
    } else {
      second = i;
      break;
    }
  }
  return {first, second};
}

// The two branch outcomes for the pair (a, b) and the probability of the
// first one under the marginal-preserving rule.
struct MergeOptions {
  double first_a, first_b;
  double second_a, second_b;
  double prob_first;
};

inline MergeOptions merge_options(double a, double b) {
  const double sum = a + b;
  if (sum <= 1.0) return {sum, 0.0, 0.0, sum, a / sum};
  return {1.0, sum - 1.0, sum - 1.0, 1.0, (1.0 - b) / (2.0 - sum)};
}

inline double snap(double v) {
  if (v <= kIntegralityGuard) return 0.0;
  if (v >= 1.0 - kIntegralityGuard) return 1.0;
  return v;
}

inline ElementSet integral_support(const std::vector<Coord>& coords) {
  ElementSet s;
  for (const Coord& c : coords) {
    if (c.v >= 1.0 - kIntegralityGuard) s.push_back(c.e);
  }
  return s;
}

inline FractionalPoint to_point(std::size_t n, const std::vector<Coord>& coords) {
  FractionalPoint x(n);
  for (const Coord& c : coords) x.set(c.e, std::clamp(c.v, 0.0, 1.0));
  return x;
}

}  // namespace detail

// Randomized pairwise rounding. Pr[e in S] = x_e for every e and
// |S| <= ceil(|x|_1) <= k.
inline ElementSet swap_round(const FractionalPoint& x, std::size_t k,
                             std::uint64_t seed) {
  auto coords = detail::checked_coords(x, k);
  Rng rng(seed);
  for (;;) {
    const auto [i, j] = detail::lowest_fractional_pair(coords);
    if (i == static_cast<std::size_t>(-1)) break;
    if (j == static_cast<std::size_t>(-1)) {
      // Lone fractional coordinate: independent inclusion.
      coords[i].v = rng.bernoulli(coords[i].v) ? 1.0 : 0.0;
      break;
    }
    const auto opt = detail::merge_options(coords[i].v, coords[j].v);
    const bool first = rng.bernoulli(opt.prob_first);
    coords[i].v = detail::snap(first ? opt.first_a : opt.second_a);
    coords[j].v = detail::snap(first ? opt.first_b : opt.second_b);
  }
  ElementSet s = detail::integral_support(coords);
  if (s.size() > k) s.resize(k);  // only reachable through the l1 tolerance
  return s;
}

// Deterministic pipage rounding with exact F. Guarantees |S| <= k and
// f(S) >= F(x). Limited to points the exact evaluator accepts.
inline ElementSet pipage_round_deterministic(const Oracle& f,
                                             const FractionalPoint& x,
                                             std::size_t k) {
  auto coords = detail::checked_coords(x, k);
  std::size_t fractional = 0;
  for (const auto& c : coords) fractional += detail::is_fractional(c.v) ? 1 : 0;
  if (fractional > kExactExtensionCap) {
    throw InputError("deterministic pipage rounding needs exact F; at most " +
                     std::to_string(kExactExtensionCap) +
                     " fractional coordinates supported");
  }
  for (;;) {
    const auto [i, j] = detail::lowest_fractional_pair(coords);
    if (i == static_cast<std::size_t>(-1)) break;
    auto first = coords, second = coords;
    if (j == static_cast<std::size_t>(-1)) {
      first[i].v = 1.0;
      second[i].v = 0.0;
    } else {
      const auto opt = detail::merge_options(coords[i].v, coords[j].v);
      first[i].v = detail::snap(opt.first_a);
      first[j].v = detail::snap(opt.first_b);
      second[i].v = detail::snap(opt.second_a);
      second[j].v = detail::snap(opt.second_b);
    }
    const double value_first = multilinear_exact(f, detail::to_point(f.n(), first));
    const double value_second =
        multilinear_exact(f, detail::to_point(f.n(), second));
    coords = value_first >= value_second ? std::move(first) : std::move(second);
  }
  ElementSet s = detail::integral_support(coords);
  if (s.size() > k) s.resize(k);
  return s;
}

}  // namespace streamsub
