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

// Instrumentation for checking the streaming algorithms against their
// analysis on small instances. None of this runs inside the algorithms.

#pragma once

#include <cmath>
#include <vector>

#include "streamsub/extensions.h"
#include "streamsub/randomized_stream.h"
#include "streamsub/threshold_stream.h"

namespace streamsub {

// Elements of `order` that belong to `s`, in stream order.
inline std::vector<ElementId> in_stream_order(const std::vector<ElementId>& order,
                                              const ElementSet& s) {
  std::vector<ElementId> out;
  for (ElementId e : order) {
    if (contains(s, e)) out.push_back(e);
  }
  return out;
}

// The part V_{i,j} of the stream, rebuilt from the keyed routing draws.
inline ElementSet stream_part(const std::vector<ElementId>& order,
                              std::uint64_t seed, std::size_t i, std::size_t j,
                              std::size_t parts) {
  std::vector<ElementId> ids;
  for (std::size_t t = 0; t < order.size(); ++t) {
    if (grid_part(seed, i, t, parts) == j) ids.push_back(order[t]);
  }
  return make_set(std::move(ids));
}

// Monte Carlo estimate of Pr[e in st_greedy(X + e)], where X keeps each other
// element of the stream independently with probability 1 / parts.
inline Estimate estimate_pe(const Oracle& f, const std::vector<ElementId>& order,
                            ElementId e, std::size_t k, double rho,
                            std::size_t parts, std::uint64_t trials,
                            std::uint64_t seed) {
  if (trials == 0) throw InputError("estimate_pe needs trials >= 1");
  if (parts == 0) throw InputError("parts must be at least 1");
  Rng rng(seed);
  const double q = 1.0 / static_cast<double>(parts);
  double hits = 0.0;
  std::vector<ElementId> sample;
  for (std::uint64_t t = 0; t < trials; ++t) {
    sample.clear();
    for (ElementId x : order) {
      if (x == e || rng.uniform() < q) sample.push_back(x);
    }
    hits += contains(st_greedy(f, sample, k, rho), e) ? 1.0 : 0.0;
  }
  Estimate est;
  est.samples = trials;
  est.mean = hits / static_cast<double>(trials);
  est.std_error = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(trials));
  return est;
}

// The same probability by enumerating every sample of the other elements.
inline double exact_pe(const Oracle& f, const std::vector<ElementId>& order,
                       ElementId e, std::size_t k, double rho, std::size_t parts) {
  if (parts == 0) throw InputError("parts must be at least 1");
  std::vector<ElementId> others;
  for (ElementId x : order) {
    if (x != e) others.push_back(x);
  }
  if (others.size() > kExactExtensionCap) {
    throw InputError("exact_pe enumerates at most 2^" +
                     std::to_string(kExactExtensionCap) + " samples");
  }
  const double q = 1.0 / static_cast<double>(parts);
  double total = 0.0;
  std::vector<ElementId> sample;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << others.size()); ++mask) {
    double prob = 1.0;
    for (std::size_t i = 0; i < others.size(); ++i) {
      prob *= (mask >> i & 1U) ? q : 1.0 - q;
    }
    if (prob == 0.0) continue;
    sample.clear();
    std::size_t next = 0;
    for (ElementId x : order) {
      if (x == e) {
        sample.push_back(x);
      } else if (mask >> next++ & 1U) {
        sample.push_back(x);
      }
    }
    if (contains(st_greedy(f, sample, k, rho), e)) total += prob;
  }
  return total;
}

// Split of an optimal set into elements with p_e >= eps (first) and the rest.
struct OptSplit {
  ElementSet frequent;
  ElementSet rare;
};

inline OptSplit split_opt(const Oracle& f, const std::vector<ElementId>& order,
                          const ElementSet& opt, std::size_t k, double rho,
                          std::size_t parts, double eps) {
  OptSplit split;
  for (ElementId e : opt) {
    if (exact_pe(f, order, e, k, rho, parts) >= eps) {
      split.frequent.push_back(e);
    } else {
      split.rare.push_back(e);
    }
  }
  return split;
}

// Rare optimal elements that st_greedy would reject given the part v.
inline ElementSet rejected_given_part(const Oracle& f,
                                      const std::vector<ElementId>& order,
                                      const ElementSet& part,
                                      const ElementSet& rare, std::size_t k,
                                      double rho) {
  ElementSet out;
  for (ElementId e : rare) {
    const auto run = in_stream_order(order, with_element(part, e));
    if (!contains(st_greedy(f, run, k, rho), e)) out.push_back(e);
  }
  return out;
}

// Final solutions of a fresh known-tau bank fed the whole stream, used to
// compare against a bank that the ladder created part-way through.
inline std::vector<PartialSolution> replay_bank(
    const Oracle& f, std::size_t k, double tau, const ThresholdConfig& config,
    const std::vector<ElementId>& order) {
  KnownTauStream fresh(f, k, tau, config);
  for (ElementId e : order) fresh.process(e);
  return fresh.bank().solutions();
}

}  // namespace streamsub
