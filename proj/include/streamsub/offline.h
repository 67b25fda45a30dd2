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
// Offline algorithms for max f(S) s.t. |S| <= k over a restricted ground set,
// used to post-process what the streaming algorithms keep. Each one declares
// its approximation factor alpha so the streaming side can set its threshold
// constant from the post-processor actually in use.
//

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>

#include "streamsub/oracle.h"

namespace streamsub {

struct OfflineResult {
  ElementSet set;
  double alpha = 1.0;
};

// An offline algorithm behind a uniform interface.
struct OfflineAlgorithm {
  std::string name;
  double alpha = 1.0;
  std::function<ElementSet(const Oracle&, const ElementSet& ground,
                           std::size_t k)>
      solve;

  OfflineResult operator()(const Oracle& f, const ElementSet& ground,
                           std::size_t k) const {
    return {solve(f, ground, k), alpha};
  }
};

inline constexpr std::uint64_t kDefaultBruteForceCap = 2'000'000;

// sum_{i <= k} C(u, i), saturating at cap + 1.
inline std::uint64_t count_subsets_up_to(std::size_t u, std::size_t k,
                                         std::uint64_t cap) {
  std::uint64_t total = 0;
  double binom = 1.0;
  for (std::size_t i = 0; i <= std::min(u, k); ++i) {
    if (i > 0) binom = binom * static_cast<double>(u - i + 1) / static_cast<double>(i);
    total += static_cast<std::uint64_t>(std::min(std::llround(binom), static_cast<long long>(cap) + 1));
    if (total > cap) return cap + 1;
  }
  return total;
}

// Exact maximizer over subsets of `ground` of size at most k. Ties go to the
// lexicographically smallest sorted id list.
inline OfflineResult brute_force(const Oracle& f, const ElementSet& ground,
                                 std::size_t k,
                                 std::uint64_t cap = kDefaultBruteForceCap) {
  if (!is_canonical(ground)) throw InputError("ground set must be sorted");
  const std::uint64_t count = count_subsets_up_to(ground.size(), k, cap);
  if (count > cap) {
    throw InputError("brute force over " + std::to_string(ground.size()) +
                     " elements with k = " + std::to_string(k) +
                     " exceeds the subset cap of " + std::to_string(cap));
  }
  ElementSet best;
  double best_value = f.evaluate(best);
  ElementSet current;
  // Depth-first enumeration in lexicographic order of index lists, so the
  // first set reaching a value is the lexicographically smallest one.
  std::function<void(std::size_t)> extend = [&](std::size_t start) {
    if (current.size() == k) return;
    for (std::size_t i = start; i < ground.size(); ++i) {
      current.push_back(ground[i]);
      const double v = f.evaluate(current);
      if (v > best_value + 1e-12) {
        best_value = v;
        best = current;
      }
      extend(i + 1);
      current.pop_back();
    }
  };
  extend(0);
  return {best, 1.0};
}

// Random greedy: in each of k rounds, take the (up to) k remaining elements
// with the largest positive marginals, pad with dummies to k slots, and add a
// uniformly random slot (a dummy adds nothing). 1/e-approximation in
// expectation for non-negative submodular f.
inline OfflineResult random_greedy(const Oracle& f, const ElementSet& ground,
                                   std::size_t k, std::uint64_t seed) {
  if (!is_canonical(ground)) throw InputError("ground set must be sorted");
  Rng rng(seed);
  ElementSet solution;
  double value = f.evaluate(solution);
  for (std::size_t round = 0; round < k; ++round) {
    std::vector<std::pair<double, ElementId>> gains;
    for (ElementId e : ground) {
      if (contains(solution, e)) continue;
      const double gain = f.evaluate(with_element(solution, e)) - value;
      if (gain > 0.0) gains.emplace_back(gain, e);
    }
    std::sort(gains.begin(), gains.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    if (gains.size() > k) gains.resize(k);
    const std::uint64_t slot = rng.below(k);
    if (slot < gains.size()) {
      solution = with_element(solution, gains[slot].second);
      value += gains[slot].first;
    }
  }
  return {solution, 1.0 / std::numbers::e};
}

// Classic greedy: add the largest positive marginal (lowest id on ties) until
// k elements or no improvement. 1 - 1/e only for monotone f; no guarantee
// otherwise, so it advertises alpha = 1 - 1/e as advisory.
inline OfflineResult plain_greedy(const Oracle& f, const ElementSet& ground,
                                  std::size_t k) {
  if (!is_canonical(ground)) throw InputError("ground set must be sorted");
  ElementSet solution;
  double value = f.evaluate(solution);
  while (solution.size() < k) {
    double best_gain = 0.0;
    std::optional<ElementId> best;
    for (ElementId e : ground) {
      if (contains(solution, e)) continue;
      const double gain = f.evaluate(with_element(solution, e)) - value;
      if (gain > best_gain) {
        best_gain = gain;
        best = e;
      }
    }
    if (!best) break;
    solution = with_element(solution, *best);
    value += best_gain;
  }
  return {solution, 1.0 - 1.0 / std::numbers::e};
}

inline OfflineAlgorithm brute_force_offline(
    std::uint64_t cap = kDefaultBruteForceCap) {
  return {"brute-force", 1.0,
          [cap](const Oracle& f, const ElementSet& g, std::size_t k) {
            return brute_force(f, g, k, cap).set;
          }};
}

inline OfflineAlgorithm random_greedy_offline(std::uint64_t seed) {
  return {"random-greedy", 1.0 / std::numbers::e,
          [seed](const Oracle& f, const ElementSet& g, std::size_t k) {
            return random_greedy(f, g, k, seed).set;
          }};
}

inline OfflineAlgorithm plain_greedy_offline() {
  return {"plain-greedy", 1.0 - 1.0 / std::numbers::e,
          [](const Oracle& f, const ElementSet& g, std::size_t k) {
            return plain_greedy(f, g, k).set;
          }};
}

}  // namespace streamsub
