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

#include "streamsub/randomized_stream.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "streamsub/analysis.h"

namespace streamsub {
namespace {

std::vector<ElementId> identity(std::size_t n) {
  std::vector<ElementId> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<ElementId>(i);
  return order;
}

Oracle golden_modular() { return make_modular({4.0, 1.0, 3.0, 2.0, 5.0, 0.5, 3.0, 2.5}); }

RandomizedConfig golden_config() {
  RandomizedConfig config;
  config.epsilon = 0.5;
  config.seed = 7;
  return config;
}

TEST(RandomizedConfig, RepetitionsAndParts) {
  RandomizedConfig config;
  EXPECT_EQ(config.repetitions(), 12u);  // ceil(2 ln 4 / 0.25) = ceil(11.09)
  EXPECT_EQ(config.parts(), 4u);
  config.epsilon = 0.5;
  EXPECT_EQ(config.repetitions(), 3u);
  EXPECT_EQ(config.parts(), 2u);
  config.epsilon = 1.0;
  EXPECT_EQ(config.repetitions(), 1u);
  EXPECT_EQ(config.parts(), 1u);
  config.c_r = 0.0;
  EXPECT_THROW(config.validate(), InputError);
  EXPECT_DOUBLE_EQ(threshold_for(1.0, 8.0, 2), 2.0);
}

TEST(Routing, FrozenDrawTable) {
  const std::vector<std::vector<std::size_t>> expected = {
      {1, 0, 1, 1, 0, 0, 1, 0}, {0, 0, 0, 0, 1, 1, 1, 0}, {1, 1, 1, 0, 1, 1, 0, 0}};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t t = 0; t < 8; ++t) {
      EXPECT_EQ(grid_part(7, i, t, 2), expected[i][t]) << i << "," << t;
    }
  }
}

TEST(Routing, PartsAreRoughlyUniformAndIndependentOfOtherRows) {
  std::vector<int> counts(4, 0);
  int agree = 0;
  for (std::size_t t = 0; t < 8000; ++t) {
    ++counts[grid_part(11, 0, t, 4)];
    agree += grid_part(11, 0, t, 4) == grid_part(11, 1, t, 4);
  }
  for (int c : counts) EXPECT_NEAR(c, 2000, 200);
  EXPECT_NEAR(agree, 2000, 200);
}

TEST(StGreedy, ThresholdAndCapacity) {
  const Oracle f = make_modular({5.0, 1.0, 4.0, 6.0});
  EXPECT_EQ(st_greedy(f, {0, 1, 2, 3}, 2, 3.0), (ElementSet{0, 2}));
  EXPECT_EQ(st_greedy(f, {3, 1, 0}, 3, 3.0), (ElementSet{0, 3}));
  EXPECT_EQ(st_greedy(f, {}, 2, 0.0), ElementSet{});
  EXPECT_EQ(st_greedy(f, {1, 1, 1}, 3, 0.5), (ElementSet{1}));
}

TEST(RandomizedStream, GoldenCells) {
  const Oracle f = golden_modular();
  RandomizedStream stream(f, 2, 2.0, golden_config());
  ASSERT_EQ(stream.repetitions(), 3u);
  ASSERT_EQ(stream.parts(), 2u);
  for (ElementId e = 0; e < 8; ++e) stream.process(e);
  const std::vector<std::vector<std::vector<ElementId>>> expected = {
      {{4, 7}, {0, 2}}, {{0, 2}, {4, 6}}, {{3, 6}, {0, 2}}};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_EQ(stream.grid()[i][j].arrival, expected[i][j]) << i << "," << j;
    }
  }
  EXPECT_TRUE(stream.violations().empty());
  const StreamOutcome out = stream.post_process(brute_force_offline());
  EXPECT_EQ(out.set, (ElementSet{4, 7}));
  EXPECT_DOUBLE_EQ(out.value, 7.5);
}

TEST(RandomizedStream, CellsMatchStGreedyOnTheirParts) {
  const Oracle f = make_random_cut(12, 0.4, 21);
  std::vector<ElementId> order = identity(12);
  Rng(4).shuffle(order);
  RandomizedConfig config;
  config.seed = 99;
  RandomizedStream stream(f, 3, 1.0, config);
  for (ElementId e : order) stream.process(e);
  for (std::size_t i = 0; i < stream.repetitions(); ++i) {
    for (std::size_t j = 0; j < stream.parts(); ++j) {
      const ElementSet part = stream_part(order, config.seed, i, j, stream.parts());
      EXPECT_EQ(stream.grid()[i][j].members,
                st_greedy(f, in_stream_order(order, part), 3, 1.0));
    }
  }
}

TEST(RandomizedStream, NoFullCellFallsBackToOffline) {
  // Only element 1 clears rho; no cell fills up.
  const Oracle f = make_modular({0.1, 2.0, 0.2});
  RandomizedConfig config;
  config.epsilon = 0.5;
  RandomizedStream stream(f, 2, 1.0, config);
  for (ElementId e = 0; e < 3; ++e) stream.process(e);
  const StreamOutcome out = stream.post_process(brute_force_offline());
  EXPECT_EQ(out.set, (ElementSet{1}));
  EXPECT_DOUBLE_EQ(out.value, 2.0);
}

TEST(RandomizedStream, PerCellValueBoundOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Oracle f = make_random_coverage(12, 16, 0.3, seed);
    const double opt = f.evaluate(brute_force(f, full_set(12), 3).set);
    RandomizedConfig config;
    config.seed = seed;
    const double rho = threshold_for(1.0, opt, 3);
    RandomizedStream stream(f, 3, rho, config);
    for (ElementId e = 0; e < 12; ++e) stream.process(e);
    EXPECT_TRUE(stream.violations().empty());
    for (const auto& row : stream.grid()) {
      for (const auto& cell : row) {
        EXPECT_GE(cell.value, rho * cell.members.size() - kTolerance);
      }
    }
    EXPECT_LE(stream.max_marginals_per_element(), stream.repetitions());
  }
}

TEST(InclusionProbability, SinglePartIsDeterministic) {
  const Oracle f = make_random_cut(9, 0.5, 5);
  const std::vector<ElementId> order = identity(9);
  const ElementSet greedy = st_greedy(f, order, 3, 1.0);
  for (ElementId e = 0; e < 9; ++e) {
    const double pe = exact_pe(f, order, e, 3, 1.0, 1);
    EXPECT_DOUBLE_EQ(pe, contains(greedy, e) ? 1.0 : 0.0);
  }
}

TEST(InclusionProbability, EstimateMatchesEnumeration) {
  const Oracle f = make_random_coverage(10, 15, 0.3, 6);
  const std::vector<ElementId> order = identity(10);
  for (ElementId e = 0; e < 10; e += 3) {
    const double exact = exact_pe(f, order, e, 3, 1.0, 3);
    const Estimate est = estimate_pe(f, order, e, 3, 1.0, 3, 4000, 50 + e);
    EXPECT_NEAR(est.mean, exact, 4.0 * std::sqrt(exact * (1 - exact) / 4000) + 1e-9);
  }
}

TEST(InclusionProbability, ModularElementAboveRhoAlwaysAdmittedWhenRoomRemains) {
  // With k = n nothing fills up, so p_e = 1 exactly when w_e >= rho.
  const Oracle f = make_modular({3.0, 0.5, 2.0, 1.0});
  const std::vector<ElementId> order = identity(4);
  EXPECT_DOUBLE_EQ(exact_pe(f, order, 0, 4, 1.5, 2), 1.0);
  EXPECT_DOUBLE_EQ(exact_pe(f, order, 1, 4, 1.5, 2), 0.0);
  // k = 1: element 2 is admitted only if element 0 was not sampled.
  EXPECT_DOUBLE_EQ(exact_pe(f, order, 2, 1, 1.5, 2), 0.5);
}

TEST(GuessedRandomized, SinglePositiveElement) {
  const Oracle f = make_modular({0.0, 0.0, 3.0, 0.0});
  GuessedRandomizedStream stream(f, 2, golden_config());
  for (ElementId e = 0; e < 4; ++e) stream.process(e);
  EXPECT_DOUBLE_EQ(stream.v(), 3.0);
  EXPECT_FALSE(stream.copies().empty());
  const StreamOutcome out = stream.finalize(brute_force_offline());
  EXPECT_EQ(out.set, (ElementSet{2}));
  EXPECT_DOUBLE_EQ(out.value, 3.0);
}

TEST(GuessedRandomized, AllZeroFunctionReturnsEmptySet) {
  const Oracle f = make_modular(std::vector<double>(5, 0.0));
  GuessedRandomizedStream stream(f, 2, RandomizedConfig{});
  for (ElementId e = 0; e < 5; ++e) stream.process(e);
  EXPECT_TRUE(stream.copies().empty());
  const StreamOutcome out = stream.finalize(brute_force_offline());
  EXPECT_TRUE(out.set.empty());
  EXPECT_DOUBLE_EQ(out.value, 0.0);
}

TEST(GuessedRandomized, GuessRangeFollowsTheLargestSingleton) {
  const Oracle f = golden_modular();
  RandomizedConfig config = golden_config();
  GuessedRandomizedStream stream(f, 2, config);
  for (ElementId e = 0; e < 8; ++e) stream.process(e);
  EXPECT_DOUBLE_EQ(stream.v(), 5.0);
  const double base = std::log1p(config.epsilon);
  const long lo = static_cast<long>(std::ceil(std::log(5.0) / base - 1.0 - 1e-12));
  const long hi = static_cast<long>(std::floor(std::log(20.0) / base + 1e-12));
  ASSERT_FALSE(stream.copies().empty());
  EXPECT_EQ(stream.copies().begin()->first, lo);
  EXPECT_EQ(stream.copies().rbegin()->first, hi);
  const StreamOutcome out = stream.finalize(brute_force_offline());
  EXPECT_LE(out.set.size(), 2u);
  EXPECT_TRUE(stream.violations().empty());
}

TEST(GuessedRandomized, SeedDeterministic) {
  const Oracle f = make_random_cut(12, 0.4, 3);
  auto run = [&](std::uint64_t seed) {
    RandomizedConfig config;
    config.seed = seed;
    GuessedRandomizedStream stream(f, 3, config);
    for (ElementId e = 0; e < 12; ++e) stream.process(e);
    return stream.finalize(brute_force_offline()).set;
  };
  EXPECT_EQ(run(4), run(4));
}

TEST(StGreedy, ModularFiveOneFour) {
  EXPECT_EQ(st_greedy(make_modular({5.0, 1.0, 4.0}), {0, 1, 2}, 2, 2.0), (ElementSet{0, 2}));
}

TEST(RandomizedStream, LightElementsNeverEnterAndEmptyGridGivesEmptySet) {
  const Oracle f = make_modular({0.5, 0.9, 0.2});
  RandomizedStream stream(f, 2, 1.0, RandomizedConfig{});
  EXPECT_TRUE(stream.post_process(brute_force_offline()).set.empty());
  for (ElementId e = 0; e < 3; ++e) stream.process(e);
  EXPECT_EQ(stream.stored_elements(), 0u);
  EXPECT_TRUE(stream.post_process(brute_force_offline()).set.empty());
}

TEST(RandomizedStream, FullCellsIgnoreLaterElements) {
  const Oracle f = make_modular(std::vector<double>(6, 1.0));
  RandomizedConfig config;
  config.epsilon = 1.0;  // one repetition, one part
  RandomizedStream stream(f, 2, 1.0, config);
  for (ElementId e = 0; e < 6; ++e) stream.process(e);
  EXPECT_EQ(stream.grid()[0][0].arrival, (std::vector<ElementId>{0, 1}));
  EXPECT_EQ(stream.last_marginals(), 0u);
}

TEST(InclusionProbability, EightElementEstimateWithinThreeStandardErrors) {
  const Oracle f = make_random_cut(8, 0.5, 71);
  const std::vector<ElementId> order = identity(8);
  const double exact = exact_pe(f, order, 5, 2, 1.0, 2);
  const Estimate est = estimate_pe(f, order, 5, 2, 1.0, 2, 20000, 72);
  EXPECT_LE(std::abs(est.mean - exact), 3.0 * std::sqrt(exact * (1 - exact) / 20000) + 1e-12);
}

}  // namespace
}  // namespace streamsub
