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
// Single-pass threshold streaming with p disjoint partial solutions.
//
// An arriving element joins the first partial solution that has room and on
// which its marginal gain is at least c * tau / k, with c = alpha / (1 + alpha)
// for an alpha-approximate offline post-processor. At the end of the stream
// the offline algorithm runs on the union of the partial solutions and the
// best of the p + 1 candidates is returned.
//
// KnownTauStream assumes an estimate tau of f(OPT). ThresholdStream drops
// that assumption by maintaining a ladder of guesses
//   T = {(1 + eps')^h : m / (1 + eps') <= (1 + eps')^h <= m k / c},
// where m is a running lower bound on f(OPT), with one bank of p solutions
// per guess.
//

#pragma once

#include <cmath>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "streamsub/offline.h"
#include "streamsub/oracle.h"

namespace streamsub {

struct ThresholdConfig {
  double epsilon = 0.2;
  double alpha = 1.0;
  std::size_t p = 0;       // 0 selects ceil(4 / epsilon)
  double eps_prime = 0.0;  // 0 selects epsilon / 2

  std::size_t solution_count() const {
    if (p != 0) return p;
    return static_cast<std::size_t>(std::ceil(4.0 / epsilon - 1e-12));
  }
  double ladder_step() const {
    return eps_prime > 0.0 ? eps_prime : epsilon / 2.0;
  }
  double threshold_constant() const { return alpha / (1.0 + alpha); }

  void validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
      throw InputError("epsilon must lie in (0, 1]");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
      throw InputError("alpha must lie in (0, 1]");
    }
    if (!(ladder_step() > 0.0 && ladder_step() < 1.0)) {
      throw InputError("eps_prime must lie in (0, 1)");
    }
  }
};

// Candidate returned by a streaming algorithm.
struct StreamOutcome {
  ElementSet set;
  double value = 0.0;
  double tau = 0.0;  // guess that produced the set (0 if none)
};

struct PartialSolution {
  std::vector<ElementId> arrival;  // insertion order
  ElementSet members;
  double value = 0.0;  // f(members), maintained on accept
};

// The p partial solutions kept for one estimate tau.
class SolutionBank {
 public:
  SolutionBank(double tau, std::size_t p, std::size_t k, double c,
               double empty_value, std::size_t created_at)
      : tau_(tau), k_(k), c_(c), created_at_(created_at),
        solutions_(p, PartialSolution{{}, {}, empty_value}) {}

  double tau() const { return tau_; }
  double threshold() const { return c_ * tau_ / static_cast<double>(k_); }
  std::size_t created_at() const { return created_at_; }
  const std::vector<PartialSolution>& solutions() const { return solutions_; }

  struct Offer {
    std::optional<std::size_t> accepted;  // index of the solution, if any
    double gain = 0.0;
    std::uint64_t marginals = 0;
  };

  // Inserts e into the lowest-index solution with room whose marginal gain
  // clears the threshold.
  Offer offer(ElementId e, const Oracle& f) {
    Offer result;
    for (std::size_t i = 0; i < solutions_.size(); ++i) {
      PartialSolution& s = solutions_[i];
      if (s.members.size() >= k_) continue;
      ElementSet bigger = with_element(s.members, e);
      const double value = f.evaluate(bigger);
      ++result.marginals;
      const double gain = value - s.value;
      if (gain >= threshold()) {
        s.arrival.push_back(e);
        s.members = std::move(bigger);
        s.value = value;
        result.accepted = i;
        result.gain = gain;
        return result;
      }
    }
    return result;
  }

  std::size_t stored() const {
    std::size_t total = 0;
    for (const auto& s : solutions_) total += s.members.size();
    return total;
  }

  ElementSet union_set() const {
    ElementSet all;
    for (const auto& s : solutions_) all = set_union(all, s.members);
    return all;
  }

  double best_value() const {
    double best = 0.0;
    for (const auto& s : solutions_) best = std::max(best, s.value);
    return best;
  }

  // Best of the offline solution on the union and the p partial solutions.
  // Ties go to the offline solution, then to the lowest index.
  StreamOutcome finalize(const Oracle& f, const OfflineAlgorithm& offline) const {
    StreamOutcome best;
    best.tau = tau_;
    best.set = offline(f, union_set(), k_).set;
    best.value = f.evaluate(best.set);
    for (const auto& s : solutions_) {
      if (s.value > best.value) {
        best.set = s.members;
        best.value = s.value;
      }
    }
    return best;
  }

 private:
  double tau_;
  std::size_t k_;
  double c_;
  std::size_t created_at_;
  std::vector<PartialSolution> solutions_;
};

// Exponent range [lo, hi] of the guess ladder for lower bound m. Exponents
// come from log-domain bounds with a 1e-12 guard so that m sitting exactly on
// a power of (1 + step) does not flap.
struct LadderRange {
  long lo = 0;
  long hi = -1;
  bool empty() const { return lo > hi; }
  std::size_t size() const { return empty() ? 0 : static_cast<std::size_t>(hi - lo + 1); }
  bool contains(long h) const { return h >= lo && h <= hi; }
};

inline constexpr double kLadderGuard = 1e-12;

inline LadderRange ladder_range(double m, std::size_t k, double c, double step) {
  if (!(m > 0.0)) return {};
  const double log_base = std::log1p(step);
  const double lower = std::log(m) / log_base - 1.0;
  const double upper =
      std::log(m * static_cast<double>(k) / c) / log_base;
  return {static_cast<long>(std::ceil(lower - kLadderGuard)),
          static_cast<long>(std::floor(upper + kLadderGuard))};
}

inline double guess_value(long h, double step) {
  return std::exp(static_cast<double>(h) * std::log1p(step));
}

// Space budget C * p * k / eps' * ln(k / c) on the number of stored elements
// (counted with multiplicity across banks).
inline double stored_element_budget(std::size_t p, std::size_t k,
                                    double eps_prime, double c,
                                    double constant = 8.0) {
  return constant * static_cast<double>(p) * static_cast<double>(k) /
         eps_prime * std::log(static_cast<double>(k) / c);
}

namespace detail {

inline std::string format_accept(double tau, std::size_t i, ElementId e,
                                 double gain) {
  std::ostringstream out;
  out << std::setprecision(12) << "event=accept tau=" << tau << " i=" << i
      << " e=" << e << " gain=" << gain;
  return out.str();
}

// Per-solution value bound f(S) >= c tau |S| / k and the size cap.
inline void check_bank(const SolutionBank& bank, std::size_t k, double c,
                       std::optional<double> m, std::size_t position,
                       std::vector<std::string>& violations) {
  const double per_element = c * bank.tau() / static_cast<double>(k);
  for (std::size_t i = 0; i < bank.solutions().size(); ++i) {
    const auto& s = bank.solutions()[i];
    const double size = static_cast<double>(s.members.size());
    const bool value_ok = s.value >= per_element * size - kTolerance;
    const bool capacity_ok = s.members.size() <= k;
    bool size_ok = true;
    if (m) {
      const double cap =
          std::min(static_cast<double>(k),
                   std::floor(*m * static_cast<double>(k) / (c * bank.tau()) +
                              kTolerance) + 1.0);
      size_ok = size <= cap;
    }
    if (value_ok && capacity_ok && size_ok) continue;
    std::ostringstream where;
    where << " at element #" << position << " tau=" << bank.tau() << " i=" << i;
    if (!value_ok) violations.push_back("per-solution value bound" + where.str());
    if (!capacity_ok) violations.push_back("capacity" + where.str());
    if (!size_ok) violations.push_back("solution size bound" + where.str());
  }
}

}  // namespace detail

// Threshold streaming with a known estimate tau of f(OPT).
class KnownTauStream {
 public:
  KnownTauStream(const Oracle& f, std::size_t k, double tau,
                 const ThresholdConfig& config)
      : f_(f), k_(k), config_(config),
        bank_((config.validate(), tau), config.solution_count(), k,
              config.threshold_constant(), f.evaluate(ElementSet{}), 0) {
    if (k == 0) throw InputError("k must be at least 1");
    if (!(tau >= 0.0)) throw InputError("tau must be non-negative");
  }

  void set_trace(std::ostream* trace) { trace_ = trace; }

  void process(ElementId e) {
    if (e >= f_.n()) throw InputError("element id out of range");
    const auto offer = bank_.offer(e, f_);
    max_marginals_ = std::max(max_marginals_, offer.marginals);
    if (offer.accepted) {
      ++accepted_;
      if (offer.gain < bank_.threshold()) {
        violations_.push_back("threshold admission");
      }
      if (trace_) {
        *trace_ << detail::format_accept(bank_.tau(), *offer.accepted, e,
                                         offer.gain)
                << '\n';
      }
    }
    detail::check_bank(bank_, k_, config_.threshold_constant(), std::nullopt,
                       processed_, violations_);
    ++processed_;
    peak_stored_ = std::max(peak_stored_, bank_.stored());
  }

  StreamOutcome finalize(const OfflineAlgorithm& offline) const {
    return bank_.finalize(f_, offline);
  }

  const SolutionBank& bank() const { return bank_; }
  std::size_t processed() const { return processed_; }
  std::size_t peak_stored() const { return peak_stored_; }
  std::uint64_t max_marginals_per_element() const { return max_marginals_; }
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  const Oracle& f_;
  std::size_t k_;
  ThresholdConfig config_;
  SolutionBank bank_;
  std::ostream* trace_ = nullptr;
  std::size_t processed_ = 0;
  std::size_t accepted_ = 0;
  std::size_t peak_stored_ = 0;
  std::uint64_t max_marginals_ = 0;
  std::vector<std::string> violations_;
};

// Threshold streaming without knowledge of f(OPT): one SolutionBank per guess
// on the ladder, banks created and dropped as the lower bound m grows.
class ThresholdStream {
 public:
  ThresholdStream(const Oracle& f, std::size_t k, const ThresholdConfig& config)
      : f_(f), k_(k), config_(config) {
    config_.validate();
    if (k == 0) throw InputError("k must be at least 1");
    empty_value_ = f_.evaluate(ElementSet{});
    m_ = empty_value_;
    rebuild_ladder();
    check_invariants();
  }

  void set_trace(std::ostream* trace) { trace_ = trace; }

  void process(ElementId e) {
    if (e >= f_.n()) throw InputError("element id out of range");
    std::uint64_t marginals = 1;
    double m_candidate = f_.evaluate(ElementSet{e});
    for (const auto& [h, bank] : banks_) {
      m_candidate = std::max(m_candidate, bank.best_value());
    }
    if (m_ < m_candidate) {
      m_ = m_candidate;
      rebuild_ladder();
    }
    for (auto& [h, bank] : banks_) {
      const auto offer = bank.offer(e, f_);
      marginals += offer.marginals;
      if (!offer.accepted) continue;
      if (offer.gain < bank.threshold()) {
        violations_.push_back("threshold admission at element #" +
                              std::to_string(processed_));
      }
      if (trace_) {
        *trace_ << detail::format_accept(bank.tau(), *offer.accepted, e,
                                         offer.gain)
                << '\n';
      }
    }
    max_marginals_ = std::max(max_marginals_, marginals);
    check_invariants();
    ++processed_;
    peak_stored_ = std::max(peak_stored_, stored_elements());
    peak_distinct_ = std::max(peak_distinct_, distinct_stored_elements());
  }

  // Best candidate over all surviving guesses; empty set if the ladder is
  // empty (then every singleton is worthless and so is OPT).
  StreamOutcome finalize(const OfflineAlgorithm& offline) const {
    StreamOutcome best;
    bool have = false;
    for (const auto& [h, bank] : banks_) {
      StreamOutcome candidate = bank.finalize(f_, offline);
      if (!have || candidate.value > best.value) {
        best = std::move(candidate);
        have = true;
      }
    }
    if (!have) best.value = f_.evaluate(best.set);
    return best;
  }

  double m() const { return m_; }
  double threshold_constant() const { return config_.threshold_constant(); }
  double ladder_step() const { return config_.ladder_step(); }
  std::size_t k() const { return k_; }
  const std::map<long, SolutionBank>& banks() const { return banks_; }
  std::size_t processed() const { return processed_; }

  std::size_t stored_elements() const {
    std::size_t total = 0;
    for (const auto& [h, bank] : banks_) total += bank.stored();
    return total;
  }
  std::size_t distinct_stored_elements() const {
    std::set<ElementId> all;
    for (const auto& [h, bank] : banks_) {
      for (const auto& s : bank.solutions()) all.insert(s.members.begin(), s.members.end());
    }
    return all.size();
  }
  std::size_t peak_stored() const { return peak_stored_; }
  std::size_t peak_distinct_stored() const { return peak_distinct_; }
  std::uint64_t max_marginals_per_element() const { return max_marginals_; }
  const std::vector<std::string>& violations() const { return violations_; }

  double stored_budget(double constant = 8.0) const {
    return stored_element_budget(config_.solution_count(), k_,
                                 config_.ladder_step(),
                                 config_.threshold_constant(), constant);
  }

 private:
  void rebuild_ladder() {
    const LadderRange range = ladder_range(m_, k_, config_.threshold_constant(),
                                           config_.ladder_step());
    std::erase_if(banks_, [&](const auto& kv) { return !range.contains(kv.first); });
    for (long h = range.lo; h <= range.hi; ++h) {
      if (banks_.contains(h)) continue;
      banks_.emplace(h, SolutionBank(guess_value(h, config_.ladder_step()),
                                     config_.solution_count(), k_,
                                     config_.threshold_constant(), empty_value_,
                                     processed_));
    }
  }

  void check_invariants() {
    const double c = config_.threshold_constant();
    if (!(c > 0.0 && c <= 0.5)) violations_.push_back("threshold constant range");
    const LadderRange range =
        ladder_range(m_, k_, c, config_.ladder_step());
    bool shape_ok = banks_.size() == range.size();
    for (const auto& [h, bank] : banks_) shape_ok = shape_ok && range.contains(h);
    if (!shape_ok) {
      violations_.push_back("ladder shape at element #" +
                            std::to_string(processed_));
    }
    for (const auto& [h, bank] : banks_) {
      detail::check_bank(bank, k_, c, m_, processed_, violations_);
    }
    if (static_cast<double>(stored_elements()) > stored_budget()) {
      violations_.push_back("stored-element budget at element #" +
                            std::to_string(processed_));
    }
  }

  const Oracle& f_;
  std::size_t k_;
  ThresholdConfig config_;
  double empty_value_ = 0.0;
  double m_ = 0.0;
  std::map<long, SolutionBank> banks_;
  std::ostream* trace_ = nullptr;
  std::size_t processed_ = 0;
  std::size_t peak_stored_ = 0;
  std::size_t peak_distinct_ = 0;
  std::uint64_t max_marginals_ = 0;
  std::vector<std::string> violations_;
};

}  // namespace streamsub
