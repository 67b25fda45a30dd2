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

// Flat `key = value` experiment configuration.
//
// Blank lines and `#` comments are ignored. Keys are restricted to the set
// below; a repeated key is an error. In sweep configs any value may be a
// comma-separated grid, except `dataset`, whose specs contain commas and use
// `;` as the grid separator.

#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "streamsub/common.h"

namespace streamsub::harness {

inline const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = {
      "algorithm", "dataset",  "k",       "epsilon",         "alpha",
      "offline",   "p",        "seed",    "order",           "derivative_mode",
      "samples",   "tau_scale", "limit",  "c_r",             "rounding",
      "opt",       "brute_force_cap"};
  return keys;
}

class Config {
 public:
  static Config parse(std::istream& in) {
    Config config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      const std::string body = trim(line);
      if (body.empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string::npos) {
        throw InputError("config line " + std::to_string(line_no) +
                         ": expected 'key = value'");
      }
      const std::string key = trim(body.substr(0, eq));
      const std::string value = trim(body.substr(eq + 1));
      if (config.has(key)) {
        throw InputError("config line " + std::to_string(line_no) +
                         ": duplicate key '" + key + "'");
      }
      config.set(key, value);
    }
    return config;
  }

  static Config parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }

  static Config parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config '" + path + "'");
    return parse(in);
  }

  // Keys in sorted order, one per line.
  std::string serialize() const {
    std::ostringstream out;
    for (const auto& [key, value] : values_) out << key << " = " << value << '\n';
    return out.str();
  }

  void set(const std::string& key, const std::string& value) {
    const auto& keys = known_config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw InputError("unknown config key '" + key + "'");
    }
    if (value.empty()) throw InputError("empty value for config key '" + key + "'");
    values_[key] = value;
  }

  bool has(const std::string& key) const { return values_.contains(key); }

  std::string get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw InputError("missing config key '" + key + "'");
    return it->second;
  }
  std::string get(const std::string& key, const std::string& fallback) const {
    return has(key) ? get(key) : fallback;
  }

  double get_double(const std::string& key, std::optional<double> fallback = {}) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      return to_double(key, get(key));
    }
    return to_double(key, get(key));
  }

  std::uint64_t get_uint(const std::string& key,
                         std::optional<std::uint64_t> fallback = {}) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      return to_uint(key, get(key));
    }
    return to_uint(key, get(key));
  }

  const std::map<std::string, std::string>& values() const { return values_; }

  bool operator==(const Config&) const = default;

  // Values of `key` split on the grid separator.
  std::vector<std::string> grid(const std::string& key) const {
    const char sep = key == "dataset" ? ';' : ',';
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(get(key));
    while (std::getline(in, item, sep)) {
      item = trim(item);
      if (item.empty()) throw InputError("empty grid entry for '" + key + "'");
      out.push_back(item);
    }
    return out;
  }

  // Cartesian product of all grids, in sorted-key order with the last key
  // varying fastest.
  std::vector<Config> expand() const {
    std::vector<Config> out{Config{}};
    for (const auto& [key, value] : values_) {
      std::vector<Config> next;
      for (const Config& partial : out) {
        for (const std::string& item : grid(key)) {
          Config c = partial;
          c.values_[key] = item;
          next.push_back(std::move(c));
        }
      }
      out = std::move(next);
    }
    return out;
  }

  static std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  }

 private:
  static double to_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size()) {
      throw InputError("config key '" + key + "' expects a number, got '" + value + "'");
    }
    return v;
  }

  static std::uint64_t to_uint(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      if (!value.empty() && value[0] != '-') v = std::stoull(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      throw InputError("config key '" + key +
                       "' expects a non-negative integer, got '" + value + "'");
    }
    return v;
  }

  std::map<std::string, std::string> values_;
};

}  // namespace streamsub::harness
