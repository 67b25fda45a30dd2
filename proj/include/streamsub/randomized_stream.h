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
// Randomized threshold streaming on an r x m grid of partial solutions.
//
// For every repetition i in [r], an arriving element is routed to a uniformly
// random part j in [m] and joins S_{i,j} if its marginal gain there is at
// least rho and the cell has room. The routing draw is a pure function of
// (seed, i, position) so the implicit parts V_{i,j} of the stream can be
// rebuilt afterwards without having been stored.
//
// Post-processing returns the lowest full cell if one exists, and otherwise
// the better of S_{1,1} and the offline solution on the union of all cells.
//

#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "streamsub/offline.h"
#include "streamsub/threshold_stream.h"

namespace streamsub {

struct RandomizedConfig {
  double epsilon = 0.25;
  double alpha = 1.0;
  double c_r = 2.0;
  std::uint64_t seed = 1;

  std::size_t repetitions() const {
    const double r = std::ceil(c_r * std::log(1.0 / epsilon) / epsilon - 1e-12);
    return std::max<std::size_t>(1, static_cast<std::size_t>(r));
  }
  std::size_t parts() const {
    return static_cast<std::size_t>(std::ceil(1.0 / epsilon - 1e-12));
  }

  void validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
      throw InputError("epsilon must lie in (0, 1]");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
      throw InputError("alpha must lie in (0, 1]");
    }
    if (!(c_r > 0.0)) throw InputError("c_r must be positive");
  }
};

// rho = alpha / (1 + alpha) * estimate / k.
inline double threshold_for(double alpha, double opt_estimate, std::size_t k) {
  return alpha / (1.0 + alpha) * opt_estimate / static_cast<double>(k);
}

// Part of the stream that the element at `position` belongs to in repetition i.
inline std::size_t grid_part(std::uint64_t seed, std::size_t i,
                             std::size_t position, std::size_t parts) {
  return static_cast<std::size_t>(keyed_below(seed, i, position, parts));
}

// Single-pass threshold greedy over an ordered list.
inline ElementSet st_greedy(const Oracle& f, const std::vector<ElementId>& order,
                            std::size_t k, double rho) {
  ElementSet s;
  double value = f.evaluate(s);
  for (ElementId e : order) {
    if (s.size() >= k) break;
    if (contains(s, e)) continue;
    ElementSet bigger = with_element(s, e);
    const double v = f.evaluate(bigger);
    if (v - value >= rho) {
      s = std::move(bigger);
      value = v;
    }
  }
  return s;
}

class RandomizedStream {
 public:
  RandomizedStream(const Oracle& f, std::size_t k, double rho,
                   const RandomizedConfig& config)
      : f_(f), k_(k), rho_(rho), config_(config) {
    config_.validate();
    if (k == 0) throw InputError("k must be at least 1");
    if (!(rho >= 0.0)) throw InputError("rho must be non-negative");
    const double empty = f_.evaluate(ElementSet{});
    grid_.assign(config_.repetitions(),
                 std::vector<PartialSolution>(config_.parts(),
                                              PartialSolution{{}, {}, empty}));
  }

  double rho() const { return rho_; }
  std::size_t repetitions() const { return grid_.size(); }
  std::size_t parts() const { return config_.parts(); }
  const std::vector<std::vector<PartialSolution>>& grid() const { return grid_; }

  // `position` is the element's index in the whole stream.
  void process(ElementId e, std::size_t position) {
    if (e >= f_.n()) throw InputError("element id out of range");
    std::uint64_t marginals = 0;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      const std::size_t j = grid_part(config_.seed, i, position, config_.parts());
      PartialSolution& cell = grid_[i][j];
      if (cell.members.size() >= k_ || contains(cell.members, e)) continue;
      ElementSet bigger = with_element(cell.members, e);
      const double value = f_.evaluate(bigger);
      ++marginals;
      if (value - cell.value >= rho_) {
        cell.arrival.push_back(e);
        cell.members = std::move(bigger);
        cell.value = value;
      }
    }
    last_marginals_ = marginals;
    max_marginals_ = std::max(max_marginals_, marginals);
    check_cells(position);
    peak_stored_ = std::max(peak_stored_, stored_elements());
  }

  void process(ElementId e) { process(e, next_position_++); }

  // Lowest full cell, else the better of S_{1,1} and offline on the union.
  StreamOutcome post_process(const OfflineAlgorithm& offline) const {
    StreamOutcome out;
    for (const auto& row : grid_) {
      for (const auto& cell : row) {
        if (cell.members.size() == k_) {
          out.set = cell.members;
          out.value = cell.value;
          return out;
        }
      }
    }
    ElementSet all;
    for (const auto& row : grid_) {
      for (const auto& cell : row) all = set_union(all, cell.members);
    }
    out.set = grid_[0][0].members;
    out.value = f_.evaluate(out.set);
    ElementSet t = offline(f_, all, k_).set;
    const double vt = f_.evaluate(t);
    if (vt > out.value) {
      out.set = std::move(t);
      out.value = vt;
    }
    return out;
  }

  std::size_t stored_elements() const {
    std::size_t total = 0;
    for (const auto& row : grid_) {
      for (const auto& cell : row) total += cell.members.size();
    }
    return total;
  }
  std::size_t peak_stored() const { return peak_stored_; }
  std::uint64_t max_marginals_per_element() const { return max_marginals_; }
  std::uint64_t last_marginals() const { return last_marginals_; }
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  void check_cells(std::size_t position) {
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      for (std::size_t j = 0; j < grid_[i].size(); ++j) {
        const auto& cell = grid_[i][j];
        const double size = static_cast<double>(cell.members.size());
        const bool value_ok = cell.value >= rho_ * size - kTolerance;
        const bool size_ok = cell.members.size() <= k_;
        if (value_ok && size_ok) continue;
        const std::string where = " at element #" + std::to_string(position) +
                                  " cell (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")";
        if (!value_ok) violations_.push_back("per-cell value bound" + where);
        if (!size_ok) violations_.push_back("capacity" + where);
      }
    }
  }

  const Oracle& f_;
  std::size_t k_;
  double rho_;
  RandomizedConfig config_;
  std::vector<std::vector<PartialSolution>> grid_;
  std::size_t next_position_ = 0;
  std::size_t peak_stored_ = 0;
  std::uint64_t last_marginals_ = 0;
  std::uint64_t max_marginals_ = 0;
  std::vector<std::string> violations_;
};

// Runs one RandomizedStream per geometric guess g = (1 + eps)^h of f(OPT) with
// rho = alpha / (1 + alpha) * g / k. With v the largest of f(empty) and the
// singleton values seen, guesses cover [v / (1 + eps), k v (1 + alpha) / alpha].
// A copy created when v grows starts empty; any earlier element e has
// f({e}) <= old v < rho for that copy, so it would have been rejected there.
class GuessedRandomizedStream {
 public:
  GuessedRandomizedStream(const Oracle& f, std::size_t k,
                          const RandomizedConfig& config)
      : f_(f), k_(k), config_(config) {
    config_.validate();
    if (k == 0) throw InputError("k must be at least 1");
    v_ = f_.evaluate(ElementSet{});
    rebuild();
  }

  void process(ElementId e) {
    if (e >= f_.n()) throw InputError("element id out of range");
    const double singleton = f_.evaluate(ElementSet{e});
    if (singleton > v_) {
      v_ = singleton;
      rebuild();
    }
    std::uint64_t marginals = 1;
    for (auto& [h, copy] : copies_) {
      copy.process(e, position_);
      marginals += copy.last_marginals();
    }
    max_marginals_ = std::max(max_marginals_, marginals);
    ++position_;
    std::size_t stored = 0;
    for (const auto& [h, copy] : copies_) stored += copy.stored_elements();
    peak_stored_ = std::max(peak_stored_, stored);
  }

  StreamOutcome finalize(const OfflineAlgorithm& offline) const {
    StreamOutcome best;
    bool have = false;
    for (const auto& [h, copy] : copies_) {
      StreamOutcome candidate = copy.post_process(offline);
      candidate.tau = guess_value(h, config_.epsilon);
      if (!have || candidate.value > best.value) {
        best = std::move(candidate);
        have = true;
      }
    }
    if (!have) best.value = f_.evaluate(best.set);
    return best;
  }

  double v() const { return v_; }
  const std::map<long, RandomizedStream>& copies() const { return copies_; }
  std::size_t peak_stored() const { return peak_stored_; }
  std::uint64_t max_marginals_per_element() const { return max_marginals_; }

  std::vector<std::string> violations() const {
    std::vector<std::string> all;
    for (const auto& [h, copy] : copies_) {
      all.insert(all.end(), copy.violations().begin(), copy.violations().end());
    }
    return all;
  }

 private:
  void rebuild() {
    if (!(v_ > 0.0)) return;
    const double log_base = std::log1p(config_.epsilon);
    const double upper =
        static_cast<double>(k_) * v_ * (1.0 + config_.alpha) / config_.alpha;
    const long lo = static_cast<long>(
        std::ceil(std::log(v_) / log_base - 1.0 - kLadderGuard));
    const long hi =
        static_cast<long>(std::floor(std::log(upper) / log_base + kLadderGuard));
    std::erase_if(copies_, [&](const auto& kv) { return kv.first < lo || kv.first > hi; });
    for (long h = lo; h <= hi; ++h) {
      if (copies_.contains(h)) continue;
      RandomizedConfig copy_config = config_;
      copy_config.seed = mix_key(config_.seed, static_cast<std::uint64_t>(h), 0);
      const double g = guess_value(h, config_.epsilon);
      copies_.emplace(h, RandomizedStream(f_, k_,
                                          threshold_for(config_.alpha, g, k_),
                                          copy_config));
    }
  }

  const Oracle& f_;
  std::size_t k_;
  RandomizedConfig config_;
  double v_ = 0.0;
  std::map<long, RandomizedStream> copies_;
  std::size_t position_ = 0;
  std::size_t peak_stored_ = 0;
  std::uint64_t max_marginals_ = 0;
};

}  // namespace streamsub
