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

// Dataset specs and stream orders.
//
//   hard:k=3,h=50                      two-branch hard instance (w arrives last)
//   edges:PATH  /  directed-edges:PATH  cut function of an edge-list file
//   coverage:PATH                       weighted coverage file
//   random-cut:n=12,density=0.5,seed=3[,directed=1]
//   random-coverage:n=10,universe=20,density=0.3,seed=1
//   modular:3,1,2                       modular weights, one per element
//
// Relative paths are resolved against the directory of the config file.

#pragma once

#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "streamsub/io.h"
#include "streamsub/oracle.h"

namespace streamsub::harness {

struct Dataset {
  Oracle oracle;
  std::optional<double> known_opt;  // analytic optimum when the family has one
  ElementSet known_opt_set;
};

namespace detail {

inline std::map<std::string, std::string> parse_params(const std::string& body,
                                                       const std::string& spec) {
  std::map<std::string, std::string> params;
  std::istringstream in(body);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw InputError("dataset '" + spec + "': expected key=value, got '" + item + "'");
    }
    params[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return params;
}

inline std::string require(const std::map<std::string, std::string>& params,
                           const std::string& key, const std::string& spec) {
  auto it = params.find(key);
  if (it == params.end()) {
    throw InputError("dataset '" + spec + "' is missing '" + key + "'");
  }
  return it->second;
}

inline double param_number(const std::map<std::string, std::string>& params,
                           const std::string& key, const std::string& spec,
                           std::optional<double> fallback = {}) {
  if (!params.contains(key) && fallback) return *fallback;
  const std::string text = require(params, key, spec);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) {
    throw InputError("dataset '" + spec + "': bad number for '" + key + "'");
  }
  return v;
}

inline std::size_t param_count(const std::map<std::string, std::string>& params,
                               const std::string& key, const std::string& spec,
                               std::optional<std::size_t> fallback = {}) {
  const double v = param_number(
      params, key, spec,
      fallback ? std::optional<double>(static_cast<double>(*fallback)) : std::nullopt);
  if (v < 0.0 || v != std::floor(v)) {
    throw InputError("dataset '" + spec + "': '" + key + "' must be a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

inline std::string resolve(const std::string& path, const std::string& base_dir) {
  std::filesystem::path p(path);
  if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
  return p.string();
}

}  // namespace detail

inline Dataset load_dataset(const std::string& spec, const std::string& base_dir = "") {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw InputError("dataset '" + spec + "': expected 'kind:arguments'");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);

  if (kind == "hard") {
    const auto params = detail::parse_params(body, spec);
    const std::size_t k = detail::param_count(params, "k", spec);
    const std::size_t h = detail::param_count(params, "h", spec);
    Oracle f = make_hard_instance(k, h);
    const HardInstanceLayout layout{k, h};
    return {std::move(f), layout.opt_value(), layout.opt_set()};
  }
  if (kind == "edges" || kind == "directed-edges") {
    const EdgeList list = read_edge_list_file(detail::resolve(body, base_dir));
    return {make_cut(list.n, list.edges, kind == "directed-edges"), {}, {}};
  }
  if (kind == "coverage") {
    const CoverageData data = read_coverage_file(detail::resolve(body, base_dir));
    return {make_coverage(data), {}, {}};
  }
  if (kind == "random-cut") {
    const auto params = detail::parse_params(body, spec);
    return {make_random_cut(detail::param_count(params, "n", spec),
                            detail::param_number(params, "density", spec, 0.5),
                            detail::param_count(params, "seed", spec, 1),
                            detail::param_count(params, "directed", spec, 0) != 0),
            {}, {}};
  }
  if (kind == "random-coverage") {
    const auto params = detail::parse_params(body, spec);
    return {make_random_coverage(detail::param_count(params, "n", spec),
                                 detail::param_count(params, "universe", spec),
                                 detail::param_number(params, "density", spec, 0.3),
                                 detail::param_count(params, "seed", spec, 1)),
            {}, {}};
  }
  if (kind == "modular") {
    std::vector<double> weights;
    std::istringstream in(body);
    std::string item;
    while (std::getline(in, item, ',')) {
      std::size_t used = 0;
      double w = 0.0;
      try {
        w = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != item.size()) {
        throw InputError("dataset '" + spec + "': bad weight '" + item + "'");
      }
      weights.push_back(w);
    }
    return {make_modular(std::move(weights)), {}, {}};
  }
  throw InputError("unknown dataset kind '" + kind + "'");
}

// `file` keeps id order; `shuffle` or `shuffle:SEED` permutes it
// deterministically (SEED defaults to `fallback_seed`). `limit` truncates.
inline std::vector<ElementId> stream_order(std::size_t n, const std::string& order,
                                           std::uint64_t fallback_seed,
                                           std::optional<std::size_t> limit = {}) {
  std::vector<ElementId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<ElementId>(i);
  if (order == "file") {
    // id order
  } else if (order == "shuffle" || order.rfind("shuffle:", 0) == 0) {
    std::uint64_t seed = fallback_seed;
    if (order.size() > 8) {
      std::size_t used = 0;
      const std::string text = order.substr(8);
      try {
        seed = std::stoull(text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != text.size()) {
        throw InputError("bad shuffle seed in order '" + order + "'");
      }
    }
    Rng rng(mix_key(seed, 0x5eed, 0));
    rng.shuffle(ids);
  } else {
    throw InputError("unknown stream order '" + order + "' (file | shuffle[:SEED])");
  }
  if (limit && *limit < ids.size()) ids.resize(*limit);
  return ids;
}

}  // namespace streamsub::harness
