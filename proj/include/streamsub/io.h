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

// Readers for the text dataset formats.
//
// Edge list: one `u v [w]` per line, 0-based ids, weight defaults to 1.0,
// `#` starts a comment.
//
// Coverage: `element: item item ...` lines list what each element covers;
// `weight item w` lines set item weights (default 1.0). Items are arbitrary
// tokens; elements are 0-based ids.

#pragma once

#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "streamsub/oracle.h"

namespace streamsub {

namespace detail {

inline std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  std::string body = hash == std::string::npos ? line : line.substr(0, hash);
  const auto first = body.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = body.find_last_not_of(" \t\r");
  return body.substr(first, last - first + 1);
}

inline ElementId parse_id(const std::string& token, std::size_t line_no) {
  std::size_t used = 0;
  long long value = -1;
  try {
    value = std::stoll(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || value < 0 ||
      value > std::numeric_limits<ElementId>::max()) {
    throw InputError("line " + std::to_string(line_no) + ": bad element id '" +
                     token + "'");
  }
  return static_cast<ElementId>(value);
}

inline double parse_number(const std::string& token, std::size_t line_no) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size()) {
    throw InputError("line " + std::to_string(line_no) + ": bad number '" +
                     token + "'");
  }
  return value;
}

inline std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset file '" + path + "'");
  return in;
}

}  // namespace detail

struct EdgeList {
  std::size_t n = 0;  // 1 + largest id seen
  std::vector<Edge> edges;
};

inline EdgeList read_edge_list(std::istream& in) {
  EdgeList list;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = detail::strip_comment(line);
    if (body.empty()) continue;
    std::istringstream tokens(body);
    std::vector<std::string> parts;
    for (std::string t; tokens >> t;) parts.push_back(t);
    if (parts.size() != 2 && parts.size() != 3) {
      throw InputError("line " + std::to_string(line_no) +
                       ": expected 'u v [w]'");
    }
    Edge edge;
    edge.from = detail::parse_id(parts[0], line_no);
    edge.to = detail::parse_id(parts[1], line_no);
    if (parts.size() == 3) edge.weight = detail::parse_number(parts[2], line_no);
    if (!(edge.weight >= 0.0)) {
      throw InputError("line " + std::to_string(line_no) +
                       ": negative edge weight");
    }
    list.n = std::max<std::size_t>(list.n, std::max(edge.from, edge.to) + 1);
    list.edges.push_back(edge);
  }
  return list;
}

inline EdgeList read_edge_list_file(const std::string& path) {
  auto in = detail::open_or_throw(path);
  return read_edge_list(in);
}

struct CoverageData {
  std::vector<std::vector<std::uint32_t>> sets;  // element -> item indices
  std::vector<double> weights;                   // item index -> weight
  std::vector<std::string> item_names;
};

inline CoverageData read_coverage(std::istream& in) {
  CoverageData data;
  std::map<std::string, std::uint32_t> index;
  auto item_id = [&](const std::string& name) {
    auto [it, inserted] =
        index.emplace(name, static_cast<std::uint32_t>(data.item_names.size()));
    if (inserted) {
      data.item_names.push_back(name);
      data.weights.push_back(1.0);
    }
    return it->second;
  };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = detail::strip_comment(line);
    if (body.empty()) continue;
    std::istringstream tokens(body);
    std::string head;
    tokens >> head;
    if (head == "weight") {
      std::string item, w;
      if (!(tokens >> item >> w)) {
        throw InputError("line " + std::to_string(line_no) +
                         ": expected 'weight item w'");
      }
      const double value = detail::parse_number(w, line_no);
      if (!(value >= 0.0)) {
        throw InputError("line " + std::to_string(line_no) +
                         ": negative item weight");
      }
      data.weights[item_id(item)] = value;
      continue;
    }
    const auto colon = body.find(':');
    if (colon == std::string::npos) {
      throw InputError("line " + std::to_string(line_no) +
                       ": expected 'element: item ...'");
    }
    const std::string id_token = detail::strip_comment(body.substr(0, colon));
    const ElementId e = detail::parse_id(id_token, line_no);
    if (data.sets.size() <= e) data.sets.resize(e + 1);
    std::istringstream items(body.substr(colon + 1));
    for (std::string item; items >> item;) {
      data.sets[e].push_back(item_id(item));
    }
  }
  return data;
}

inline CoverageData read_coverage_file(const std::string& path) {
  auto in = detail::open_or_throw(path);
  return read_coverage(in);
}

inline Oracle make_coverage(const CoverageData& data) {
  return make_coverage(data.sets, data.weights);
}

}  // namespace streamsub
