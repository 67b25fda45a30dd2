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
// Value oracles for set functions over a finite ground set, and the
// objective families used by the experiments: weighted coverage, graph cut,
// modular, and the two-branch hard instance on which no single-pass
// algorithm with sublinear memory beats 1/2.
//

#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "streamsub/common.h"

namespace streamsub {

class Oracle {
 public:
  using EvalFn = std::function<double(std::span<const ElementId>)>;

  Oracle(std::size_t n, EvalFn fn, std::string name = "oracle")
      : n_(n),
        fn_(std::make_shared<const EvalFn>(std::move(fn))),
        name_(std::move(name)) {}

  Oracle(const Oracle& other)
      : n_(other.n_), fn_(other.fn_), name_(other.name_),
        calls_(other.calls()) {}
  Oracle& operator=(const Oracle& other) {
    n_ = other.n_;
    fn_ = other.fn_;
    name_ = other.name_;
    calls_.store(other.calls(), std::memory_order_relaxed);
    return *this;
  }

  std::size_t n() const { return n_; }
  const std::string& name() const { return name_; }

  // f(S). `s` must be sorted, duplicate-free and in range. Safe to call
  // concurrently; every call bumps the counter by exactly one.
  double evaluate(std::span<const ElementId> s) const {
    validate(s);
    calls_.fetch_add(1, std::memory_order_relaxed);
    return (*fn_)(s);
  }

  // f(e | S) = f(S + e) - f(S). Two evaluations, or none if e is in S.
  double marginal(ElementId e, std::span<const ElementId> s) const {
    if (e >= n_) throw InputError("element id out of range");
    validate(s);
    if (std::binary_search(s.begin(), s.end(), e)) return 0.0;
    const ElementSet bigger = with_element(ElementSet(s.begin(), s.end()), e);
    return evaluate(bigger) - evaluate(s);
  }

  std::uint64_t calls() const { return calls_.load(std::memory_order_relaxed); }
  void reset_calls() { calls_.store(0, std::memory_order_relaxed); }

  // Uncounted access to the underlying function, for composing oracles.
  const EvalFn& raw() const { return *fn_; }

 private:
  void validate(std::span<const ElementId> s) const {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= n_) {
        throw InputError("element id " + std::to_string(s[i]) +
                         " out of range for ground set of size " +
                         std::to_string(n_));
      }
      if (i > 0 && s[i - 1] >= s[i]) {
        throw InputError(s[i - 1] == s[i] ? "duplicate element id in set"
                                          : "element set is not sorted");
      }
    }
  }

  std::size_t n_;
  std::shared_ptr<const EvalFn> fn_;
  std::string name_;
  mutable std::atomic<std::uint64_t> calls_{0};
};

// f(S) = base + sum of weights.
inline Oracle make_modular(std::vector<double> weights, double base = 0.0) {
  for (double w : weights) {
    if (!(w >= 0.0)) throw InputError("modular weights must be non-negative");
  }
  if (!(base >= 0.0)) throw InputError("modular base must be non-negative");
  const std::size_t n = weights.size();
  return Oracle(
      n,
      [weights = std::move(weights), base](std::span<const ElementId> s) {
        double total = base;
        for (ElementId e : s) total += weights[e];
        return total;
      },
      "modular");
}

// Weighted coverage: element e covers the universe items sets[e]; f(S) is the
// total weight of items covered by S.
inline Oracle make_coverage(std::vector<std::vector<std::uint32_t>> sets,
                            std::vector<double> weights) {
  for (double w : weights) {
    if (!(w >= 0.0)) throw InputError("coverage weights must be non-negative");
  }
  for (const auto& items : sets) {
    for (std::uint32_t item : items) {
      if (item >= weights.size()) {
        throw InputError("coverage item " + std::to_string(item) +
                         " has no weight");
      }
    }
  }
  const std::size_t n = sets.size();
  return Oracle(
      n,
      [sets = std::move(sets),
       weights = std::move(weights)](std::span<const ElementId> s) {
        std::vector<char> covered(weights.size(), 0);
        double total = 0.0;
        for (ElementId e : s) {
          for (std::uint32_t item : sets[e]) {
            if (!covered[item]) {
              covered[item] = 1;
              total += weights[item];
            }
          }
        }
        return total;
      },
      "coverage");
}

struct Edge {
  ElementId from = 0;
  ElementId to = 0;
  double weight = 1.0;
};

// Cut function over n vertices. Directed: weight of edges leaving S.
// Undirected: weight of edges with exactly one endpoint in S. Self-loops
// never cross a cut and are dropped.
inline Oracle make_cut(std::size_t n, const std::vector<Edge>& edges,
                       bool directed) {
  std::vector<Edge> kept;
  kept.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.from >= n || e.to >= n) throw InputError("edge endpoint out of range");
    if (!(e.weight >= 0.0)) throw InputError("edge weights must be non-negative");
    if (e.from != e.to) kept.push_back(e);
  }
  return Oracle(
      n,
      [n, kept = std::move(kept), directed](std::span<const ElementId> s) {
        std::vector<char> in(n, 0);
        for (ElementId e : s) in[e] = 1;
        double total = 0.0;
        for (const Edge& edge : kept) {
          const bool a = in[edge.from], b = in[edge.to];
          if (directed ? (a && !b) : (a != b)) total += edge.weight;
        }
        return total;
      },
      directed ? "directed-cut" : "cut");
}

// Element layout of the hard instance: u_1..u_{k-1} are ids 0..k-2,
// v_1..v_h are ids k-1..k+h-2, and w is the last id, so the natural id order
// delivers w last.
struct HardInstanceLayout {
  std::size_t k = 0;
  std::size_t h = 0;

  std::size_t n() const { return k + h; }
  ElementId u(std::size_t i) const { return static_cast<ElementId>(i - 1); }
  ElementId v(std::size_t i) const {
    return static_cast<ElementId>(k - 1 + i - 1);
  }
  ElementId w() const { return static_cast<ElementId>(k + h - 1); }
  bool is_u(ElementId e) const { return e + 1 < k; }
  double opt_value() const { return 2.0 * static_cast<double>(k) - 1.0; }
  ElementSet opt_set() const {
    ElementSet s;
    for (std::size_t i = 1; i < k; ++i) s.push_back(u(i));
    s.push_back(w());
    return s;
  }
};

// f(S) = |S| if w is not in S, and k + |S cap {u_i}| otherwise.
inline Oracle make_hard_instance(std::size_t k, std::size_t h) {
  if (k < 1) throw InputError("hard instance needs k >= 1");
  if (h < 1) throw InputError("hard instance needs h >= 1");
  const HardInstanceLayout layout{k, h};
  return Oracle(
      layout.n(),
      [layout](std::span<const ElementId> s) {
        if (s.empty() || s.back() != layout.w()) {
          return static_cast<double>(s.size());
        }
        std::size_t us = 0;
        for (ElementId e : s) us += layout.is_u(e) ? 1 : 0;
        return static_cast<double>(layout.k + us);
      },
      "hard-instance");
}

// g(S) = f(S cup A). Submodular and non-negative whenever f is, with
// g(empty) = f(A).
inline Oracle make_contraction(const Oracle& base, ElementSet fixed) {
  if (!is_canonical(fixed)) fixed = make_set(std::move(fixed));
  for (ElementId e : fixed) {
    if (e >= base.n()) throw InputError("contraction set out of range");
  }
  return Oracle(
      base.n(),
      [fn = base.raw(), fixed = std::move(fixed)](std::span<const ElementId> s) {
        ElementSet joined;
        std::set_union(s.begin(), s.end(), fixed.begin(), fixed.end(),
                       std::back_inserter(joined));
        return fn(joined);
      },
      base.name() + "-contracted");
}

// f(S) = |S|^2. Supermodular; used as a fault-injection fixture.
inline Oracle make_cardinality_squared(std::size_t n) {
  return Oracle(
      n,
      [](std::span<const ElementId> s) {
        const double c = static_cast<double>(s.size());
        return c * c;
      },
      "cardinality-squared");
}

// Erdos-Renyi graph with edge probability `density` and weights uniform in
// [0.5, 1.5).
inline std::vector<Edge> random_graph(std::size_t n, double density,
                                      std::uint64_t seed, bool directed) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = directed ? 0 : a + 1; b < n; ++b) {
      if (a == b) continue;
      if (rng.bernoulli(density)) {
        edges.push_back({static_cast<ElementId>(a), static_cast<ElementId>(b),
                         0.5 + rng.uniform()});
      }
    }
  }
  return edges;
}

inline Oracle make_random_cut(std::size_t n, double density,
                              std::uint64_t seed, bool directed = false) {
  return make_cut(n, random_graph(n, density, seed, directed), directed);
}

// Each element covers a random subset of a universe of `universe` items,
// each item included independently with probability `density`.
inline Oracle make_random_coverage(std::size_t n, std::size_t universe,
                                   double density, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<std::uint32_t>> sets(n);
  for (auto& items : sets) {
    for (std::uint32_t item = 0; item < universe; ++item) {
      if (rng.bernoulli(density)) items.push_back(item);
    }
  }
  std::vector<double> weights(universe);
  for (double& w : weights) w = 0.5 + rng.uniform();
  return make_coverage(std::move(sets), std::move(weights));
}

inline constexpr std::size_t kExhaustiveSubmodularityCap = 12;

struct SubmodularityReport {
  bool submodular = true;
  std::uint64_t pairs_checked = 0;
  // First violating pair, if any.
  std::optional<std::pair<ElementSet, ElementSet>> counterexample;
  double worst_gap = 0.0;
};

namespace detail {
inline ElementSet mask_to_set(std::uint64_t mask) {
  ElementSet s;
  for (ElementId e = 0; mask != 0; ++e, mask >>= 1) {
    if (mask & 1U) s.push_back(e);
  }
  return s;
}
}  // namespace detail

// Exhaustive check of f(A) + f(B) >= f(A cap B) + f(A cup B) over all pairs.
// Evaluates each of the 2^n sets once and checks pairs from the table.
inline SubmodularityReport verify_submodular_exhaustive(const Oracle& f) {
  const std::size_t n = f.n();
  if (n > kExhaustiveSubmodularityCap) {
    throw InputError("exhaustive submodularity check limited to n <= " +
                     std::to_string(kExhaustiveSubmodularityCap) +
                     "; use the sampled mode");
  }
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<double> table(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    table[mask] = f.evaluate(detail::mask_to_set(mask));
  }
  SubmodularityReport report;
  for (std::uint64_t a = 0; a < count; ++a) {
    for (std::uint64_t b = a; b < count; ++b) {
      ++report.pairs_checked;
      const double gap = table[a & b] + table[a | b] - table[a] - table[b];
      if (gap > kTolerance) {
        if (report.submodular) {
          report.counterexample.emplace(detail::mask_to_set(a),
                                        detail::mask_to_set(b));
        }
        report.submodular = false;
        report.worst_gap = std::max(report.worst_gap, gap);
      }
    }
  }
  return report;
}

// Checks `pairs` random (A, B) pairs, each element joining A and B
// independently with probability 1/2.
inline SubmodularityReport verify_submodular_sampled(const Oracle& f,
                                                     std::uint64_t pairs,
                                                     std::uint64_t seed) {
  Rng rng(seed);
  SubmodularityReport report;
  for (std::uint64_t t = 0; t < pairs; ++t) {
    ElementSet a, b, both, either;
    for (ElementId e = 0; e < f.n(); ++e) {
      const bool in_a = rng.bernoulli(0.5), in_b = rng.bernoulli(0.5);
      if (in_a) a.push_back(e);
      if (in_b) b.push_back(e);
      if (in_a && in_b) both.push_back(e);
      if (in_a || in_b) either.push_back(e);
    }
    ++report.pairs_checked;
    const double gap =
        f.evaluate(both) + f.evaluate(either) - f.evaluate(a) - f.evaluate(b);
    if (gap > kTolerance) {
      if (report.submodular) report.counterexample.emplace(a, b);
      report.submodular = false;
      report.worst_gap = std::max(report.worst_gap, gap);
    }
  }
  return report;
}

// Exhaustive when n is small enough, sampled otherwise.
inline bool verify_submodular(const Oracle& f, std::uint64_t sampled_pairs = 2000,
                              std::uint64_t seed = 1) {
  if (f.n() <= kExhaustiveSubmodularityCap) {
    return verify_submodular_exhaustive(f).submodular;
  }
  return verify_submodular_sampled(f, sampled_pairs, seed).submodular;
}

inline std::string describe(const ElementSet& s) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < s.size(); ++i) out << (i ? "," : "") << s[i];
  out << '}';
  return out.str();
}

}  // namespace streamsub
