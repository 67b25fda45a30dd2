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

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "streamsub/harness/config.h"
#include "streamsub/harness/datasets.h"
#include "streamsub/harness/runner.h"
#include "streamsub/harness/verify.h"

namespace streamsub::harness {
namespace {

const std::string kConfigDir = STREAMSUB_CONFIG_DIR;

TEST(Config, ParseSerializeRoundTrip) {
  const Config config = Config::parse_string(
      "# comment\n"
      "  k = 3   \n"
      "algorithm = threshold  # trailing\n"
      "\n"
      "dataset = hard:k=3,h=9\n");
  EXPECT_EQ(config.serialize(), "algorithm = threshold\ndataset = hard:k=3,h=9\nk = 3\n");
  EXPECT_EQ(Config::parse_string(config.serialize()), config);
  EXPECT_EQ(config.get_uint("k"), 3u);
  EXPECT_DOUBLE_EQ(config.get_double("epsilon", 0.2), 0.2);
  EXPECT_EQ(config.get("offline", "brute-force"), "brute-force");
}

TEST(Config, RejectsUnknownDuplicateAndMalformed) {
  EXPECT_THROW(Config::parse_string("colour = red\n"), InputError);
  EXPECT_THROW(Config::parse_string("k = 2\nk = 3\n"), InputError);
  EXPECT_THROW(Config::parse_string("k 2\n"), InputError);
  EXPECT_THROW(Config::parse_string("k =\n"), InputError);
  const Config bad = Config::parse_string("k = -2\nepsilon = 0.1x\n");
  EXPECT_THROW(bad.get_uint("k"), InputError);
  EXPECT_THROW(bad.get_double("epsilon"), InputError);
  EXPECT_THROW(bad.get("dataset"), InputError);
  EXPECT_THROW(Config::parse_file("/nonexistent.cfg"), InputError);
}

TEST(Config, DuplicateKeyMessageNamesTheLine) {
  try {
    Config::parse_string("k = 2\n\nk = 3\n");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(std::string(e.what()), "config line 3: duplicate key 'k'");
  }
}

TEST(Config, GridExpansionIsACartesianProduct) {
  const Config grid = Config::parse_string(
      "algorithm = threshold\n"
      "dataset = hard:k=3,h=9 ; modular:1,2,3\n"
      "k = 2\n"
      "epsilon = 0.4, 0.2\n"
      "seed = 1,2,3\n");
  EXPECT_EQ(grid.grid("dataset"), (std::vector<std::string>{"hard:k=3,h=9", "modular:1,2,3"}));
  const auto points = grid.expand();
  ASSERT_EQ(points.size(), 12u);
  // Sorted keys, last key fastest: dataset, epsilon, ..., seed.
  EXPECT_EQ(points[0].get("dataset"), "hard:k=3,h=9");
  EXPECT_EQ(points[0].get("epsilon"), "0.4");
  EXPECT_EQ(points[0].get("seed"), "1");
  EXPECT_EQ(points[1].get("seed"), "2");
  EXPECT_EQ(points[3].get("epsilon"), "0.2");
  EXPECT_EQ(points[11].get("dataset"), "modular:1,2,3");
  EXPECT_THROW(Config::parse_string("seed = 1,,2\n").expand(), InputError);
}

TEST(Datasets, SpecsAndKnownOptima) {
  const Dataset hard = load_dataset("hard:k=3,h=9");
  EXPECT_EQ(hard.oracle.n(), 12u);
  EXPECT_EQ(hard.known_opt, 5.0);
  EXPECT_EQ(hard.known_opt_set, (ElementSet{0, 1, 11}));

  const Dataset cover = load_dataset("coverage:coverage_toy.txt", STREAMSUB_DATA_DIR);
  EXPECT_EQ(cover.oracle.n(), 6u);
  EXPECT_FALSE(cover.known_opt);

  const Dataset edges = load_dataset("edges:" STREAMSUB_DATA_DIR "/karate_subset.edges");
  EXPECT_EQ(edges.oracle.n(), 12u);

  const Dataset modular = load_dataset("modular:3,1.5,2");
  EXPECT_DOUBLE_EQ(modular.oracle.evaluate(ElementSet{0, 1, 2}), 6.5);

  const Dataset a = load_dataset("random-cut:n=9,density=0.5,seed=4");
  const Dataset b = load_dataset("random-cut:n=9,seed=4");
  EXPECT_DOUBLE_EQ(a.oracle.evaluate(ElementSet{1, 3}), b.oracle.evaluate(ElementSet{1, 3}));
  EXPECT_EQ(load_dataset("random-coverage:n=7,universe=10").oracle.n(), 7u);
}

TEST(Datasets, BadSpecsAreInputErrors) {
  EXPECT_THROW(load_dataset("hard"), InputError);
  EXPECT_THROW(load_dataset("hard:k=3"), InputError);
  EXPECT_THROW(load_dataset("hard:k=x,h=2"), InputError);
  EXPECT_THROW(load_dataset("hard:k=2.5,h=2"), InputError);
  EXPECT_THROW(load_dataset("modular:1,y"), InputError);
  EXPECT_THROW(load_dataset("spiral:n=3"), InputError);
  EXPECT_THROW(load_dataset("edges:/nonexistent.edges"), InputError);
}

TEST(StreamOrder, FileShuffleAndLimit) {
  EXPECT_EQ(stream_order(4, "file", 1), (std::vector<ElementId>{0, 1, 2, 3}));
  std::vector<ElementId> shuffled = stream_order(50, "shuffle", 7);
  EXPECT_EQ(shuffled, stream_order(50, "shuffle:7", 99));
  EXPECT_NE(shuffled, stream_order(50, "shuffle:8", 7));
  std::sort(shuffled.begin(), shuffled.end());
  EXPECT_EQ(shuffled, stream_order(50, "file", 1));
  EXPECT_EQ(stream_order(10, "file", 1, 3).size(), 3u);
  EXPECT_THROW(stream_order(4, "reverse", 1), InputError);
  EXPECT_THROW(stream_order(4, "shuffle:x", 1), InputError);
}

Config hard_config(const std::string& algorithm) {
  Config config;
  config.set("algorithm", algorithm);
  config.set("dataset", "hard:k=3,h=9");
  config.set("k", "3");
  config.set("epsilon", "0.2");
  return config;
}

TEST(Run, EveryAlgorithmOnTheHardInstance) {
  for (const std::string& algo : algorithm_names()) {
    const RunReport report = run(hard_config(algo));
    EXPECT_EQ(report.n, 12u) << algo;
    EXPECT_EQ(report.opt_source, "analytic") << algo;
    EXPECT_LE(report.set.size(), 3u) << algo;
    EXPECT_TRUE(report.violations.empty()) << algo;
    ASSERT_TRUE(report.ratio) << algo;
    EXPECT_LE(*report.ratio, 1.0 + kTolerance) << algo;
  }
}

TEST(Run, DeterministicApartFromWallTime) {
  Config config = hard_config("randomized");
  config.set("seed", "5");
  config.set("order", "shuffle");
  const RunReport a = run(config);
  const RunReport b = run(config);
  EXPECT_EQ(a.to_json(false).dump(), b.to_json(false).dump());
  EXPECT_TRUE(a.to_json(true).contains("wall_time_ms"));
  EXPECT_FALSE(a.to_json(false).contains("wall_time_ms"));
}

TEST(Run, OracleCallsCountOnlyTheAlgorithm) {
  // Brute force for OPT runs before the counter is reset.
  Config config;
  config.set("algorithm", "known-tau");
  config.set("dataset", "coverage:coverage_toy.txt");
  config.set("k", "2");
  config.set("epsilon", "0.5");
  config.set("p", "2");
  config.set("tau_scale", "1");
  const RunReport report = run(config, STREAMSUB_DATA_DIR);
  EXPECT_EQ(report.opt_source, "brute-force");
  EXPECT_DOUBLE_EQ(*report.opt, 5.0);
  // f(empty), 7 stream evaluations, 1 + 4 + 6 sets for brute force on the
  // four-element union, and the final value.
  EXPECT_EQ(report.oracle_calls, 1u + 7u + 11u + 1u);
  EXPECT_EQ(report.max_marginals_per_element, 2u);
  EXPECT_EQ(report.set, (ElementSet{0, 3}));
}

TEST(Run, EmptyStreamReturnsTheEmptySet) {
  Config config = hard_config("threshold");
  config.set("limit", "0");
  const RunReport report = run(config);
  EXPECT_EQ(report.stream_length, 0u);
  EXPECT_TRUE(report.set.empty());
  EXPECT_DOUBLE_EQ(report.value, 0.0);
}

TEST(Run, ConfigErrors) {
  EXPECT_THROW(run(hard_config("magic")), InputError);
  Config config = hard_config("threshold");
  config.set("offline", "oracle");
  EXPECT_THROW(run(config), InputError);
  config = hard_config("extension-known-tau");
  config.set("derivative_mode", "guess");
  EXPECT_THROW(run(config), InputError);
  config = hard_config("known-tau");
  config.set("dataset", "random-cut:n=60,seed=1");
  config.set("brute_force_cap", "100");
  EXPECT_THROW(run(config), InputError);  // needs OPT
  config.set("opt", "10");
  EXPECT_THROW(run(config), InputError);  // the brute-force offline pass hits the cap too
  config.set("offline", "random-greedy");
  EXPECT_NO_THROW(run(config));
}

TEST(Run, JsonKeyOrder) {
  const Json j = run(hard_config("threshold")).to_json();
  std::vector<std::string> keys;
  for (const auto& item : j.items()) keys.push_back(item.key());
  const std::vector<std::string> expected = {
      "algorithm", "config", "n", "k", "stream_length", "value", "set", "opt",
      "opt_source", "ratio", "tau", "peak_stored_elements", "stored_budget",
      "oracle_calls", "max_marginals_per_element", "seed", "invariant_violations",
      "violation_samples", "wall_time_ms"};
  EXPECT_EQ(keys, expected);
}

TEST(Run, SampleConfigsRun) {
  for (const char* name : {"hard_instance.cfg", "coverage_toy.cfg", "graph_cut.cfg",
                           "extension.cfg", "randomized.cfg"}) {
    const Config config = Config::parse_file(kConfigDir + "/" + name);
    const RunReport report = run(config, kConfigDir);
    EXPECT_TRUE(report.violations.empty()) << name;
  }
}

TEST(Sweep, SinglePointMatchesRun) {
  const Config config = hard_config("threshold");
  const SweepResult result = sweep(config);
  ASSERT_EQ(result.runs.size(), 1u);
  EXPECT_EQ(result.runs[0].to_json(false).dump(), run(config).to_json(false).dump());
  std::istringstream lines(result.csv);
  std::string header, row, extra;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(header, csv_header());
  EXPECT_EQ(row, csv_row(result.runs[0]));
  EXPECT_FALSE(std::getline(lines, extra));
}

TEST(Sweep, SeedGroupsGetSummaryRows) {
  Config grid = hard_config("randomized");
  grid.set("seed", "1,2,3");
  grid.set("order", "shuffle");
  const SweepResult serial = sweep(grid);
  const SweepResult parallel = sweep(grid, "", 3);
  ASSERT_EQ(serial.runs.size(), 3u);
  EXPECT_EQ(serial.violations, 0u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(serial.runs[i].to_json(false).dump(), parallel.runs[i].to_json(false).dump());
  }
  EXPECT_NE(serial.csv.find(",summary,"), std::string::npos);
  double mean = 0.0;
  for (const auto& r : serial.runs) mean += r.value / 3.0;
  const auto at = serial.csv.find(",summary,") + 9;
  EXPECT_NEAR(std::stod(serial.csv.substr(at)), mean, 1e-9);
}

TEST(Opt, HardInstanceReport) {
  const Json j = opt_report("hard:k=3,h=9", 3);
  EXPECT_DOUBLE_EQ(j["value"].get<double>(), 5.0);
  EXPECT_EQ(j["set"].get<std::vector<ElementId>>(), (std::vector<ElementId>{0, 1, 11}));
  EXPECT_THROW(opt_report("hard:k=3,h=9", 0), InputError);
}

TEST(Verify, AllSuitesPass) {
  for (const SuiteResult& suite : verify("all", VerifyOptions{})) {
    for (const Check& check : suite.checks) {
      EXPECT_TRUE(check.passed) << suite.suite << ": " << check.name << " " << check.detail;
    }
  }
}

TEST(Verify, InjectedFaultIsCaught) {
  VerifyOptions options;
  options.inject_fault = true;
  const auto results = verify("oracle", options);
  ASSERT_EQ(results.size(), 1u);
  EXPECT_FALSE(results[0].passed());
  EXPECT_THROW(verify("nonsense", VerifyOptions{}), InputError);
}

}  // namespace
}  // namespace streamsub::harness
