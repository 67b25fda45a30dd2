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

// One streaming run per config, sweeps over config grids, and exact optima.
//
// Algorithms:
//   threshold             guess ladder over p threshold solutions
//   known-tau             p threshold solutions for tau = tau_scale * OPT
//   extension             fractional variant with a guess ladder
//   extension-known-tau   fractional variant for tau = tau_scale * OPT
//   randomized            randomized grid with geometric guesses of OPT
//   randomized-known-opt  randomized grid with rho from tau_scale * OPT

#pragma once

#include <chrono>
#include <cmath>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "streamsub/extension_stream.h"
#include "streamsub/harness/config.h"
#include "streamsub/harness/datasets.h"
#include "streamsub/offline.h"
#include "streamsub/randomized_stream.h"
#include "streamsub/threshold_stream.h"

namespace streamsub::harness {

using Json = nlohmann::ordered_json;

inline const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names = {
      "threshold",          "known-tau",  "extension",
      "extension-known-tau", "randomized", "randomized-known-opt"};
  return names;
}

struct RunReport {
  std::string algorithm;
  Config config;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t stream_length = 0;
  double value = 0.0;
  ElementSet set;
  std::optional<double> opt;
  std::string opt_source;  // analytic | brute-force | config
  std::optional<double> ratio;
  std::optional<double> tau;
  std::size_t peak_stored = 0;
  std::optional<double> stored_budget;
  std::uint64_t oracle_calls = 0;
  std::uint64_t max_marginals_per_element = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> violations;
  double wall_ms = 0.0;

  Json to_json(bool with_wall_time = true) const {
    Json j;
    j["algorithm"] = algorithm;
    Json echo = Json::object();
    for (const auto& [key, value] : config.values()) echo[key] = value;
    j["config"] = echo;
    j["n"] = n;
    j["k"] = k;
    j["stream_length"] = stream_length;
    j["value"] = value;
    j["set"] = set;
    j["opt"] = opt ? Json(*opt) : Json(nullptr);
    j["opt_source"] = opt ? Json(opt_source) : Json(nullptr);
    j["ratio"] = ratio ? Json(*ratio) : Json(nullptr);
    j["tau"] = tau ? Json(*tau) : Json(nullptr);
    j["peak_stored_elements"] = peak_stored;
    j["stored_budget"] = stored_budget ? Json(*stored_budget) : Json(nullptr);
    j["oracle_calls"] = oracle_calls;
    j["max_marginals_per_element"] = max_marginals_per_element;
    j["seed"] = seed;
    j["invariant_violations"] = violations.size();
    Json samples = Json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(violations.size(), 10); ++i) {
      samples.push_back(violations[i]);
    }
    j["violation_samples"] = samples;
    if (with_wall_time) j["wall_time_ms"] = wall_ms;
    return j;
  }
};

inline OfflineAlgorithm make_offline(const std::string& name, std::uint64_t seed,
                                     std::uint64_t cap = kDefaultBruteForceCap) {
  if (name == "brute-force") return brute_force_offline(cap);
  if (name == "random-greedy") return random_greedy_offline(seed);
  if (name == "plain-greedy") return plain_greedy_offline();
  throw InputError("unknown offline algorithm '" + name +
                   "' (brute-force | random-greedy | plain-greedy)");
}

struct OptValue {
  std::optional<double> value;
  ElementSet set;
  std::string source;
};

// Optimum from the config, the dataset's closed form, or brute force when it
// fits under the cap.
inline OptValue resolve_opt(const Config& config, const Dataset& data,
                            std::size_t k) {
  if (config.has("opt")) return {config.get_double("opt"), {}, "config"};
  if (data.known_opt && k == data.known_opt_set.size()) {
    return {data.known_opt, data.known_opt_set, "analytic"};
  }
  const std::uint64_t cap = config.get_uint("brute_force_cap", kDefaultBruteForceCap);
  if (count_subsets_up_to(data.oracle.n(), k, cap) > cap) return {};
  const OfflineResult best = brute_force(data.oracle, full_set(data.oracle.n()), k, cap);
  return {data.oracle.raw()(best.set), best.set, "brute-force"};
}

inline std::optional<std::size_t> optional_limit(const Config& config) {
  if (!config.has("limit")) return std::nullopt;
  return static_cast<std::size_t>(config.get_uint("limit"));
}

inline DerivativeMode derivative_mode(const Config& config, std::uint64_t seed) {
  const std::string mode = config.get("derivative_mode", "exact");
  if (mode == "exact") return DerivativeMode::Exact();
  if (mode == "sampled") {
    return DerivativeMode::Sampled(config.get_uint("samples", 1000), seed);
  }
  throw InputError("unknown derivative_mode '" + mode + "' (exact | sampled)");
}

inline RoundingChoice rounding_choice(const Config& config, std::uint64_t seed) {
  const std::string mode = config.get("rounding", "pipage");
  if (mode == "pipage") return RoundingChoice::Pipage();
  if (mode == "swap") return RoundingChoice::Swap(seed);
  throw InputError("unknown rounding '" + mode + "' (pipage | swap)");
}

// Executes the config. `base_dir` resolves relative dataset paths; `trace`
// receives audit lines from the algorithms that emit them.
inline RunReport run(const Config& config, const std::string& base_dir = "",
                     std::ostream* trace = nullptr) {
  RunReport report;
  report.config = config;
  report.algorithm = config.get("algorithm");
  const auto& names = algorithm_names();
  if (std::find(names.begin(), names.end(), report.algorithm) == names.end()) {
    throw InputError("unknown algorithm '" + report.algorithm + "'");
  }
  Dataset data = load_dataset(config.get("dataset"), base_dir);
  Oracle& f = data.oracle;
  report.n = f.n();
  report.k = config.get_uint("k");
  if (report.k == 0) throw InputError("k must be at least 1");
  report.seed = config.get_uint("seed", 1);
  const double epsilon = config.get_double("epsilon", 0.2);
  const OfflineAlgorithm offline = make_offline(
      config.get("offline", "brute-force"), report.seed,
      config.get_uint("brute_force_cap", kDefaultBruteForceCap));
  const double alpha = config.get_double("alpha", offline.alpha);
  const auto order = stream_order(f.n(), config.get("order", "file"), report.seed,
                                  optional_limit(config));
  report.stream_length = order.size();

  const OptValue opt = resolve_opt(config, data, report.k);
  report.opt = opt.value;
  report.opt_source = opt.source;
  auto need_opt = [&]() {
    if (!opt.value) {
      throw InputError("algorithm '" + report.algorithm +
                       "' needs OPT; set 'opt' or use a smaller instance");
    }
    return *opt.value;
  };

  f.reset_calls();
  const auto start = std::chrono::steady_clock::now();
  StreamOutcome outcome;
  const std::string& algo = report.algorithm;
  if (algo == "threshold" || algo == "known-tau") {
    ThresholdConfig tc;
    tc.epsilon = epsilon;
    tc.alpha = alpha;
    tc.p = config.get_uint("p", 0);
    if (algo == "threshold") {
      ThresholdStream stream(f, report.k, tc);
      stream.set_trace(trace);
      for (ElementId e : order) stream.process(e);
      outcome = stream.finalize(offline);
      report.peak_stored = stream.peak_stored();
      report.stored_budget = stream.stored_budget();
      report.max_marginals_per_element = stream.max_marginals_per_element();
      report.violations = stream.violations();
    } else {
      const double tau = config.get_double("tau_scale", 1.0 - epsilon / 2.0) * need_opt();
      KnownTauStream stream(f, report.k, tau, tc);
      stream.set_trace(trace);
      for (ElementId e : order) stream.process(e);
      outcome = stream.finalize(offline);
      report.peak_stored = stream.peak_stored();
      report.max_marginals_per_element = stream.max_marginals_per_element();
      report.violations = stream.violations();
    }
  } else if (algo == "extension" || algo == "extension-known-tau") {
    ExtensionConfig ec;
    ec.epsilon = epsilon;
    ec.alpha = alpha;
    ec.increment = config.get_double("p", 0.0);
    ec.derivative = derivative_mode(config, report.seed);
    const RoundingChoice rounding = rounding_choice(config, report.seed);
    if (algo == "extension") {
      ExtensionLadderStream stream(f, report.k, ec);
      for (ElementId e : order) stream.process(e);
      outcome = stream.finalize(offline, rounding);
      report.peak_stored = stream.peak_support();
      report.violations = stream.violations();
    } else {
      const double tau = config.get_double("tau_scale", 1.0 - epsilon / 8.0) * need_opt();
      ExtensionStream stream(f, report.k, tau, ec);
      stream.set_trace(trace);
      for (ElementId e : order) stream.process(e);
      outcome = stream.finalize(offline, rounding);
      report.peak_stored = stream.peak_support();
      report.violations = stream.violations();
    }
  } else {
    RandomizedConfig rc;
    rc.epsilon = epsilon;
    rc.alpha = alpha;
    rc.c_r = config.get_double("c_r", 2.0);
    rc.seed = report.seed;
    if (algo == "randomized") {
      GuessedRandomizedStream stream(f, report.k, rc);
      for (ElementId e : order) stream.process(e);
      outcome = stream.finalize(offline);
      report.peak_stored = stream.peak_stored();
      report.max_marginals_per_element = stream.max_marginals_per_element();
      report.violations = stream.violations();
    } else {
      const double estimate = config.get_double("tau_scale", 1.0) * need_opt();
      RandomizedStream stream(f, report.k, threshold_for(alpha, estimate, report.k), rc);
      for (std::size_t t = 0; t < order.size(); ++t) stream.process(order[t], t);
      outcome = stream.post_process(offline);
      report.peak_stored = stream.peak_stored();
      report.max_marginals_per_element = stream.max_marginals_per_element();
      report.violations = stream.violations();
    }
  }
  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  report.oracle_calls = f.calls();
  report.set = outcome.set;
  report.value = outcome.value;
  if (outcome.tau > 0.0) report.tau = outcome.tau;
  if (report.opt) {
    report.ratio = *report.opt > 0.0 ? report.value / *report.opt
                                     : (report.value <= kTolerance ? 1.0 : 0.0);
    if (*report.ratio > 1.0 + kTolerance) {
      report.violations.push_back("ratio above 1 (value exceeds OPT)");
    }
  }
  return report;
}

// ---- sweep ----------------------------------------------------------------

inline std::string csv_header() {
  return "algorithm,dataset,k,epsilon,alpha,offline,seed,value,opt,ratio,"
         "peak_stored,stored_budget,oracle_calls,max_marginals,violations,"
         "wall_ms,value_std,ratio_std";
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string num(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

inline std::string num(const std::optional<double>& v) { return v ? num(*v) : ""; }


}  // namespace detail

inline std::string csv_row(const RunReport& r) {
  using detail::csv_field;
  using detail::num;
  std::ostringstream out;
  out << csv_field(r.algorithm) << ',' << csv_field(r.config.get("dataset")) << ','
      << r.k << ',' << csv_field(r.config.get("epsilon", "0.2")) << ','
      << csv_field(r.config.get("alpha", "")) << ','
      << csv_field(r.config.get("offline", "brute-force")) << ',' << r.seed << ','
      << num(r.value) << ',' << num(r.opt) << ',' << num(r.ratio) << ','
      << r.peak_stored << ',' << num(r.stored_budget) << ',' << r.oracle_calls
      << ',' << r.max_marginals_per_element << ',' << r.violations.size() << ','
      << num(r.wall_ms) << ",,";
  return out.str();
}

struct SweepResult {
  std::vector<RunReport> runs;
  std::string csv;
  std::size_t violations = 0;
};

// Runs every grid point. Groups that differ only in `seed` get an extra row
// with seed = `summary` holding the mean value and ratio and their standard
// deviations.
inline SweepResult sweep(const Config& grid, const std::string& base_dir = "",
                         unsigned jobs = 1) {
  const std::vector<Config> points = grid.expand();
  SweepResult result;
  result.runs.resize(points.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      result.runs[i] = run(points[i], base_dir);
    }
  } else {
    for (std::size_t begin = 0; begin < points.size(); begin += jobs) {
      std::vector<std::future<RunReport>> batch;
      const std::size_t end = std::min(points.size(), begin + jobs);
      for (std::size_t i = begin; i < end; ++i) {
        batch.push_back(std::async(std::launch::async, [&, i] {
          return run(points[i], base_dir);
        }));
      }
      for (std::size_t i = begin; i < end; ++i) result.runs[i] = batch[i - begin].get();
    }
  }

  std::ostringstream csv;
  csv << csv_header() << '\n';
  std::map<std::string, std::vector<std::size_t>> groups;
  std::vector<std::string> group_order;
  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    const RunReport& r = result.runs[i];
    csv << csv_row(r) << '\n';
    result.violations += r.violations.size();
    Config key = r.config;
    Config stripped;
    for (const auto& [k, v] : key.values()) {
      if (k != "seed") stripped.set(k, v);
    }
    const std::string id = stripped.serialize();
    if (!groups.contains(id)) group_order.push_back(id);
    groups[id].push_back(i);
  }
  for (const std::string& id : group_order) {
    const auto& members = groups[id];
    if (members.size() < 2) continue;
    Moments value, ratio;
    bool have_ratio = true;
    for (std::size_t i : members) {
      value.add(result.runs[i].value);
      if (result.runs[i].ratio) {
        ratio.add(*result.runs[i].ratio);
      } else {
        have_ratio = false;
      }
    }
    const RunReport& first = result.runs[members.front()];
    using detail::csv_field;
    using detail::num;
    csv << csv_field(first.algorithm) << ',' << csv_field(first.config.get("dataset"))
        << ',' << first.k << ',' << csv_field(first.config.get("epsilon", "0.2")) << ','
        << csv_field(first.config.get("alpha", "")) << ','
        << csv_field(first.config.get("offline", "brute-force")) << ",summary,"
        << num(value.mean()) << ',' << num(first.opt) << ','
        << (have_ratio ? num(ratio.mean()) : "") << ",,,,,,," << num(value.stddev())
        << ',' << (have_ratio ? num(ratio.stddev()) : "") << '\n';
  }
  result.csv = csv.str();
  return result;
}

// ---- opt ------------------------------------------------------------------

inline Json opt_report(const std::string& dataset, std::size_t k,
                       const std::string& base_dir = "",
                       std::uint64_t cap = kDefaultBruteForceCap) {
  if (k == 0) throw InputError("k must be at least 1");
  Dataset data = load_dataset(dataset, base_dir);
  const OfflineResult best = brute_force(data.oracle, full_set(data.oracle.n()), k, cap);
  Json j;
  j["dataset"] = dataset;
  j["n"] = data.oracle.n();
  j["k"] = k;
  j["value"] = data.oracle.raw()(best.set);
  j["set"] = best.set;
  j["oracle_calls"] = data.oracle.calls();
  return j;
}

}  // namespace streamsub::harness
