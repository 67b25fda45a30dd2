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

// streamsub: run, sweep, verify and opt.
//
// Exit codes: 0 success, 1 invariant or check failure, 2 input error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "streamsub/harness/config.h"
#include "streamsub/harness/runner.h"
#include "streamsub/harness/verify.h"

namespace {

using streamsub::InputError;
namespace harness = streamsub::harness;

// Writes through a sibling temp file and a rename so readers never see a
// partial report.
void write_atomically(const std::string& path, const std::string& contents) {
  const std::filesystem::path target(path);
  std::filesystem::path temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + temp.string() + "'");
    out << contents;
    if (!out.flush()) throw InputError("write to '" + temp.string() + "' failed");
  }
  std::filesystem::rename(temp, target);
}

void emit(const std::string& out_path, const std::string& contents) {
  if (out_path.empty() || out_path == "-") {
    std::cout << contents;
  } else {
    write_atomically(out_path, contents);
  }
}

std::string base_dir_of(const std::string& config_path) {
  return std::filesystem::path(config_path).parent_path().string();
}

harness::Config load_config(const std::string& path, const std::string& seed) {
  harness::Config config = harness::Config::parse_file(path);
  if (!seed.empty()) config.set("seed", seed);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-pass streaming for non-monotone submodular maximization "
               "under a cardinality constraint"};
  app.require_subcommand(1);

  std::string config_path, out_path, seed, trace_path;

  auto* run_cmd = app.add_subcommand("run", "Run one algorithm on one stream");
  run_cmd->add_option("--config", config_path, "Config file")->required();
  run_cmd->add_option("--out", out_path, "Report path (JSON); stdout if omitted");
  run_cmd->add_option("--seed", seed, "Override the config seed");
  run_cmd->add_option("--trace", trace_path, "Write accept/reject audit lines here");

  unsigned jobs = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run every point of a config grid");
  sweep_cmd->add_option("--config", config_path, "Grid config file")->required();
  sweep_cmd->add_option("--out", out_path, "CSV path; stdout if omitted");
  sweep_cmd->add_option("--seed", seed, "Override the seed grid");
  sweep_cmd->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);

  std::string suite = "all";
  bool inject_fault = false;
  std::uint64_t verify_seed = 1;
  auto* verify_cmd = app.add_subcommand("verify", "Run property suites");
  verify_cmd->add_option("suite", suite,
                         "oracle | extensions | rounding | offline | threshold | "
                         "extension-stream | randomized | all");
  verify_cmd->add_option("--seed", verify_seed, "Fixture seed");
  verify_cmd->add_flag("--inject-fault", inject_fault,
                       "Add a supermodular fixture that must fail");

  std::string dataset;
  std::size_t k = 0;
  std::uint64_t cap = streamsub::kDefaultBruteForceCap;
  auto* opt_cmd = app.add_subcommand("opt", "Exact optimum by enumeration");
  opt_cmd->add_option("--config", config_path, "Take dataset and k from a config");
  opt_cmd->add_option("--dataset", dataset, "Dataset spec");
  opt_cmd->add_option("--k", k, "Cardinality bound");
  opt_cmd->add_option("--cap", cap, "Subset-count cap");
  opt_cmd->add_option("--out", out_path, "Report path (JSON); stdout if omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) {
      const harness::Config config = load_config(config_path, seed);
      std::ofstream trace_file;
      if (!trace_path.empty()) {
        trace_file.open(trace_path);
        if (!trace_file) throw InputError("cannot write trace '" + trace_path + "'");
      }
      const harness::RunReport report = harness::run(
          config, base_dir_of(config_path), trace_path.empty() ? nullptr : &trace_file);
      emit(out_path, report.to_json().dump(2) + "\n");
      for (const auto& v : report.violations) std::cerr << "violation: " << v << '\n';
      return report.violations.empty() ? 0 : 1;
    }
    if (*sweep_cmd) {
      const harness::Config config = load_config(config_path, seed);
      const harness::SweepResult result =
          harness::sweep(config, base_dir_of(config_path), jobs);
      emit(out_path, result.csv);
      return result.violations == 0 ? 0 : 1;
    }
    if (*verify_cmd) {
      harness::VerifyOptions options;
      options.inject_fault = inject_fault;
      options.seed = verify_seed;
      bool all_passed = true;
      for (const auto& result : harness::verify(suite, options)) {
        for (const auto& check : result.checks) {
          std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << result.suite << ": "
                    << check.name;
          if (!check.detail.empty()) std::cout << " (" << check.detail << ")";
          std::cout << '\n';
        }
        all_passed = all_passed && result.passed();
      }
      std::cout << (all_passed ? "verify: all checks passed\n" : "verify: FAILED\n");
      return all_passed ? 0 : 1;
    }
    if (*opt_cmd) {
      std::string base_dir;
      if (!config_path.empty()) {
        const harness::Config config = harness::Config::parse_file(config_path);
        if (dataset.empty()) dataset = config.get("dataset");
        if (k == 0) k = config.get_uint("k");
        base_dir = base_dir_of(config_path);
      }
      if (dataset.empty()) throw InputError("opt needs --dataset or --config");
      emit(out_path, harness::opt_report(dataset, k, base_dir, cap).dump(2) + "\n");
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
