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

#include "streamsub/rounding.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"

namespace streamsub {
namespace {

Oracle toy_coverage() {
  return make_coverage({{0, 1}, {1, 2}, {2}, {3, 4, 5}, {0, 3}, {4}},
                       std::vector<double>(6, 1.0));
}

FractionalPoint point(std::size_t n, std::vector<std::pair<ElementId, double>> coords) {
  FractionalPoint x(n);
  for (auto [e, v] : coords) x.set(e, v);
  return x;
}

TEST(MergeOptions, PreservesBothMarginals) {
  for (double a : {0.1, 0.3, 0.5, 0.8}) {
    for (double b : {0.2, 0.45, 0.7, 0.9}) {
      const auto opt = detail::merge_options(a, b);
      const double p = opt.prob_first;
      ASSERT_GE(p, 0.0);
      ASSERT_LE(p, 1.0);
      EXPECT_NEAR(p * opt.first_a + (1 - p) * opt.second_a, a, 1e-12);
      EXPECT_NEAR(p * opt.first_b + (1 - p) * opt.second_b, b, 1e-12);
      EXPECT_NEAR(opt.first_a + opt.first_b, a + b, 1e-12);
      EXPECT_NEAR(opt.second_a + opt.second_b, a + b, 1e-12);
    }
  }
}

TEST(SwapRound, IntegralInputIsUnchanged) {
  const FractionalPoint x = FractionalPoint::indicator(6, {1, 4});
  EXPECT_EQ(swap_round(x, 2, 3), (ElementSet{1, 4}));
  EXPECT_EQ(swap_round(FractionalPoint(6), 2, 3), ElementSet{});
}

TEST(SwapRound, RejectsMassAboveK) {
  EXPECT_THROW(swap_round(FractionalPoint::indicator(4, {0, 1, 2}, 0.9), 2, 1), InputError);
}

TEST(SwapRound, SizeNeverExceedsCeilingOfMass) {
  Rng rng(4);
  for (int t = 0; t < 300; ++t) {
    FractionalPoint x(10);
    for (ElementId e = 0; e < 10; ++e) x.set(e, 0.3 * rng.uniform());
    const auto bound = static_cast<std::size_t>(std::ceil(x.l1() - 1e-12));
    EXPECT_LE(swap_round(x, 3, t).size(), bound);
  }
}

TEST(SwapRound, InclusionFrequenciesMatchCoordinates) {
  const FractionalPoint x =
      point(6, {{0, 0.2}, {1, 0.55}, {2, 0.9}, {3, 0.35}, {5, 0.5}});
  const int trials = 20000;
  std::vector<int> hits(6, 0);
  for (int t = 0; t < trials; ++t) {
    for (ElementId e : swap_round(x, 3, mix_key(99, t))) ++hits[e];
  }
  for (ElementId e = 0; e < 6; ++e) {
    const double p = x.get(e);
    const double sigma = std::sqrt(std::max(p * (1 - p), 1e-12) / trials);
    EXPECT_NEAR(hits[e] / static_cast<double>(trials), p, 4 * sigma + 1e-12) << e;
  }
}

TEST(SwapRound, ExpectedValueAtLeastMultilinear) {
  const Oracle f = make_random_cut(8, 0.5, 6);
  const FractionalPoint x = point(8, {{0, 0.5}, {2, 0.5}, {3, 0.25}, {6, 0.75}});
  const int trials = 20000;
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double v = f.evaluate(swap_round(x, 2, mix_key(7, t)));
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / trials;
  const double sigma = std::sqrt(std::max(0.0, sum_sq / trials - mean * mean) / trials);
  EXPECT_GE(mean + 4 * sigma, multilinear_exact(f, x));
}

TEST(Pipage, ToyCoverageSequence) {
  // F(0.4, 0, .2, .2) = 1.68 vs F(0, .4, .2, .2) = 1.76 keeps x1 = .4; then
  // (x1, x3) goes to (0, .6); then (x3, x4) goes to (.8, 0); the lone
  // coordinate rounds up.
  const Oracle f = toy_coverage();
  const FractionalPoint x = point(6, {{0, 0.2}, {1, 0.2}, {3, 0.2}, {4, 0.2}});
  const ElementSet s = pipage_round_deterministic(f, x, 2);
  EXPECT_EQ(s, (ElementSet{3}));
  EXPECT_DOUBLE_EQ(f.evaluate(s), 3.0);
  EXPECT_GE(f.evaluate(s), multilinear_exact(f, x));
}

TEST(Pipage, NeverBelowMultilinearAndWithinK) {
  Rng rng(31);
  for (int t = 0; t < 60; ++t) {
    const Oracle f = t % 2 ? make_random_cut(9, 0.5, t) : make_random_coverage(9, 14, 0.3, t);
    const std::size_t k = 1 + t % 4;
    FractionalPoint x(9);
    for (ElementId e = 0; e < 9; ++e) x.set(e, rng.uniform());
    // Scale down into the k-ball.
    const double scale = std::min(1.0, static_cast<double>(k) / x.l1());
    FractionalPoint y(9);
    for (const auto& [e, v] : x.coords()) y.set(e, v * scale);
    const ElementSet s = pipage_round_deterministic(f, y, k);
    EXPECT_LE(s.size(), k);
    EXPECT_GE(f.evaluate(s) + 1e-9, multilinear_exact(f, y));
  }
}

TEST(Pipage, RefusesTooManyFractionalCoordinates) {
  const Oracle f = make_modular(std::vector<double>(30, 1.0));
  EXPECT_THROW(pipage_round_deterministic(f, FractionalPoint::indicator(30, full_set(30), 0.1), 3),
               InputError);
}

TEST(SwapRound, TwoHalvesWithKOneGiveExactlyOneElement) {
  const FractionalPoint x = FractionalPoint::indicator(2, {0, 1}, 0.5);
  const int trials = 10000;
  int zero = 0;
  for (int t = 0; t < trials; ++t) {
    const ElementSet s = swap_round(x, 1, mix_key(5, t));
    ASSERT_EQ(s.size(), 1u);
    zero += s[0] == 0;
  }
  EXPECT_NEAR(zero / static_cast<double>(trials), 0.5, 3 * std::sqrt(0.25 / trials));
}

TEST(SwapRound, ExpectedValueOnRandomSmallInstances) {
  Rng rng(8);
  for (int inst = 0; inst < 5; ++inst) {
    const Oracle f = make_random_coverage(8, 12, 0.3, 60 + inst);
    FractionalPoint x(8);
    for (ElementId e = 0; e < 8; ++e) x.set(e, 0.35 * rng.uniform());
    const std::size_t k = static_cast<std::size_t>(std::ceil(x.l1()));
    const int trials = 10000;
    double sum = 0.0, sum_sq = 0.0;
    for (int t = 0; t < trials; ++t) {
      const double v = f.evaluate(swap_round(x, k, mix_key(70 + inst, t)));
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / trials;
    const double stderr_ = std::sqrt(std::max(0.0, sum_sq / trials - mean * mean) / trials);
    EXPECT_GE(mean, multilinear_exact(f, x) - 3 * stderr_) << inst;
  }
}

TEST(Pipage, IntegralAndSingleEdgeCases) {
  const Oracle toy = toy_coverage();
  EXPECT_EQ(pipage_round_deterministic(toy, FractionalPoint::indicator(6, {2, 5}), 2),
            (ElementSet{2, 5}));
  const Oracle edge = make_cut(2, {{0, 1}}, false);
  const ElementSet s = pipage_round_deterministic(edge, FractionalPoint::indicator(2, {0, 1}, 0.5), 2);
  EXPECT_GE(edge.evaluate(s), 0.5);
  EXPECT_DOUBLE_EQ(edge.evaluate(s), 1.0);
}

}  // namespace
}  // namespace streamsub
