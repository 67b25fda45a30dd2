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
// Continuous extensions of a set function.
//
// Multilinear extension: F(x) = E[f(R(x))], where R(x) contains each element
// e independently with probability x_e. Evaluated exactly by enumerating the
// fractional coordinates, or estimated by sampling.
//
// Lovasz extension: f^(x) = E_theta[f({e : x_e >= theta})] for theta uniform
// in [0, 1], evaluated exactly from the level sets of x.
//

#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "streamsub/oracle.h"

namespace streamsub {

// Sparse point of [0,1]^N. Coordinates not stored are zero.
class FractionalPoint {
 public:
  explicit FractionalPoint(std::size_t n) : n_(n) {}

  static FractionalPoint indicator(std::size_t n, const ElementSet& s,
                                   double value = 1.0) {
    FractionalPoint x(n);
    for (ElementId e : s) x.set(e, value);
    return x;
  }

  std::size_t n() const { return n_; }

  double get(ElementId e) const {
    auto it = coords_.find(e);
    return it == coords_.end() ? 0.0 : it->second;
  }

  void set(ElementId e, double value) {
    if (e >= n_) throw InputError("coordinate out of range");
    if (!(value >= 0.0 && value <= 1.0)) {
      throw InputError("coordinate value must lie in [0, 1]");
    }
    if (value == 0.0) {
      coords_.erase(e);
    } else {
      coords_[e] = value;
    }
  }

  double l1() const {
    double total = 0.0;
    for (const auto& [e, v] : coords_) total += v;
    return total;
  }

  ElementSet support() const {
    ElementSet s;
    s.reserve(coords_.size());
    for (const auto& [e, v] : coords_) s.push_back(e);
    return s;
  }

  std::size_t support_size() const { return coords_.size(); }

  const std::map<ElementId, double>& coords() const { return coords_; }

 private:
  std::size_t n_;
  std::map<ElementId, double> coords_;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 1;
};

// Running mean and variance (Welford). Constant inputs give exactly that
// mean and zero spread.
class Moments {
 public:
  void add(double v) {
    ++count_;
    const double delta = v - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (v - mean_);
  }
  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  double stddev() const {
    if (count_ < 2) return 0.0;
    return std::sqrt(std::max(0.0, m2_ / static_cast<double>(count_ - 1)));
  }
  double std_error() const {
    return count_ ? stddev() / std::sqrt(static_cast<double>(count_)) : 0.0;
  }
  Estimate estimate() const { return {mean_, std_error(), count_}; }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Largest number of strictly fractional coordinates the exact evaluator will
// enumerate (2^20 evaluations).
inline constexpr std::size_t kExactExtensionCap = 20;

namespace detail {

// Splits x into coordinates equal to one and strictly fractional ones.
inline void split_point(const FractionalPoint& x, ElementSet& ones,
                        std::vector<std::pair<ElementId, double>>& fractional) {
  for (const auto& [e, v] : x.coords()) {
    if (v >= 1.0) {
      ones.push_back(e);
    } else {
      fractional.emplace_back(e, v);
    }
  }
}

}  // namespace detail

inline double multilinear_exact(const Oracle& f, const FractionalPoint& x) {
  if (x.n() != f.n()) throw InputError("point and oracle sizes differ");
  ElementSet ones;
  std::vector<std::pair<ElementId, double>> frac;
  detail::split_point(x, ones, frac);
  if (frac.size() > kExactExtensionCap) {
    throw InputError("exact multilinear evaluation supports at most " +
                     std::to_string(kExactExtensionCap) +
                     " fractional coordinates; use sampled mode");
  }
  const std::uint64_t count = std::uint64_t{1} << frac.size();
  double total = 0.0;
  ElementSet chosen;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    double prob = 1.0;
    chosen.clear();
    for (std::size_t i = 0; i < frac.size(); ++i) {
      if (mask >> i & 1U) {
        prob *= frac[i].second;
        chosen.push_back(frac[i].first);
      } else {
        prob *= 1.0 - frac[i].second;
      }
    }
    if (prob == 0.0) continue;
    total += prob * f.evaluate(set_union(ones, chosen));
  }
  return total;
}

namespace detail {

inline ElementSet draw_random_set(const FractionalPoint& x, Rng& rng) {
  ElementSet s;
  for (const auto& [e, v] : x.coords()) {
    if (v >= 1.0 || rng.uniform() < v) s.push_back(e);
  }
  return s;
}

}  // namespace detail

inline Estimate multilinear_sample(const Oracle& f, const FractionalPoint& x,
                                   std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw InputError("multilinear_sample needs samples >= 1");
  if (x.n() != f.n()) throw InputError("point and oracle sizes differ");
  Rng rng(seed);
  Moments moments;
  for (std::uint64_t t = 0; t < samples; ++t) {
    moments.add(f.evaluate(detail::draw_random_set(x, rng)));
  }
  return moments.estimate();
}

// dF/dx_e = F(x with x_e = 1) - F(x with x_e = 0).
inline double partial_derivative_exact(const Oracle& f,
                                       const FractionalPoint& x, ElementId e) {
  if (e >= f.n()) throw InputError("element id out of range");
  FractionalPoint up = x, down = x;
  up.set(e, 1.0);
  down.set(e, 0.0);
  return multilinear_exact(f, up) - multilinear_exact(f, down);
}

// Sampled derivative with common random numbers: each draw R of the other
// coordinates is evaluated with and without e.
inline Estimate partial_derivative_sampled(const Oracle& f,
                                           const FractionalPoint& x,
                                           ElementId e, std::uint64_t samples,
                                           std::uint64_t seed) {
  if (samples == 0) throw InputError("partial_derivative needs samples >= 1");
  if (e >= f.n()) throw InputError("element id out of range");
  FractionalPoint rest = x;
  rest.set(e, 0.0);
  Rng rng(seed);
  Moments moments;
  for (std::uint64_t t = 0; t < samples; ++t) {
    const ElementSet r = detail::draw_random_set(rest, rng);
    moments.add(f.evaluate(with_element(r, e)) - f.evaluate(r));
  }
  return moments.estimate();
}

// How the streaming extension algorithm evaluates derivatives.
struct DerivativeMode {
  bool exact = true;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  static DerivativeMode Exact() { return {}; }
  static DerivativeMode Sampled(std::uint64_t samples, std::uint64_t seed) {
    return {false, samples, seed};
  }
};

// Sum over consecutive level sets of x: with distinct positive values
// t_1 > ... > t_m and t_{m+1} = 0,
//   f^(x) = (1 - t_1) f(empty) + sum_i (t_i - t_{i+1}) f({x >= t_i}).
inline double lovasz(const Oracle& f, const FractionalPoint& x) {
  if (x.n() != f.n()) throw InputError("point and oracle sizes differ");
  std::vector<std::pair<double, ElementId>> by_value;
  for (const auto& [e, v] : x.coords()) by_value.emplace_back(v, e);
  std::sort(by_value.begin(), by_value.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  double total = 0.0;
  ElementSet level;
  std::size_t i = 0;
  if (by_value.empty() || by_value.front().first < 1.0) {
    const double top = by_value.empty() ? 0.0 : by_value.front().first;
    total += (1.0 - top) * f.evaluate(level);
  }
  while (i < by_value.size()) {
    const double theta = by_value[i].first;
    while (i < by_value.size() && by_value[i].first == theta) {
      level = with_element(level, by_value[i].second);
      ++i;
    }
    const double next = i < by_value.size() ? by_value[i].first : 0.0;
    total += (theta - next) * f.evaluate(level);
  }
  return total;
}

}  // namespace streamsub
