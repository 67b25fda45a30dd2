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
// Fractional threshold streaming over the multilinear extension.
//
// A single point x is grown: an arriving element e whose partial derivative
// dF/dx_e at the current x is at least c * tau / k receives mass
// min(p, k - |x|_1). With c = alpha (1 - p) / (1 + alpha). At the end, x is
// rounded to a set S1, the offline algorithm is run on supp(x) to get S2, and
// the better one is returned.
//
// ExtensionLadderStream removes the known-tau assumption with the same
// geometric ladder as ThresholdStream, at granularity epsilon / 8.
//

#pragma once

#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "streamsub/extensions.h"
#include "streamsub/offline.h"
#include "streamsub/rounding.h"
#include "streamsub/threshold_stream.h"

namespace streamsub {

// Mass within this distance of k freezes the point.
inline constexpr double kFrozenGuard = 1e-12;

struct ExtensionConfig {
  double epsilon = 0.4;
  double alpha = 1.0;
  double increment = 0.0;  // p; 0 selects epsilon / 2
  DerivativeMode derivative = DerivativeMode::Exact();

  double step() const { return increment > 0.0 ? increment : epsilon / 2.0; }
  double threshold_constant() const {
    return alpha * (1.0 - step()) / (1.0 + alpha);
  }
  double ladder_step() const { return epsilon / 8.0; }

  void validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
      throw InputError("epsilon must lie in (0, 1]");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
      throw InputError("alpha must lie in (0, 1]");
    }
    if (!(step() > 0.0 && step() < 1.0)) {
      throw InputError("increment p must lie in (0, 1)");
    }
    if (!derivative.exact && derivative.samples == 0) {
      throw InputError("sampled derivatives need samples >= 1");
    }
  }
};

struct RoundingChoice {
  bool pipage = true;
  std::uint64_t seed = 0;

  static RoundingChoice Pipage() { return {}; }
  static RoundingChoice Swap(std::uint64_t seed) { return {false, seed}; }
};

struct Rejection {
  std::size_t position = 0;
  ElementId element = 0;
  double derivative = 0.0;
};

class ExtensionStream {
 public:
  ExtensionStream(const Oracle& f, std::size_t k, double tau,
                  const ExtensionConfig& config, std::size_t start_position = 0)
      : f_(f), k_(k), tau_(tau), config_(config), x_(f.n()),
        processed_(start_position) {
    config_.validate();
    if (k == 0) throw InputError("k must be at least 1");
    if (!(tau >= 0.0)) throw InputError("tau must be non-negative");
  }

  void set_trace(std::ostream* trace) { trace_ = trace; }

  double tau() const { return tau_; }
  double threshold() const {
    return config_.threshold_constant() * tau_ / static_cast<double>(k_);
  }

  void process(ElementId e) {
    if (e >= f_.n()) throw InputError("element id out of range");
    const std::size_t position = processed_++;
    if (frozen_) return;
    if (x_.get(e) != 0.0) throw InputError("element arrived twice");

    double derivative = 0.0;
    double std_error = 0.0;
    if (config_.derivative.exact) {
      derivative = partial_derivative_exact(f_, x_, e);
    } else {
      const Estimate est = partial_derivative_sampled(
          f_, x_, e, config_.derivative.samples,
          mix_key(config_.derivative.seed, position, e));
      derivative = est.mean;
      std_error = est.std_error;
    }

    if (derivative >= threshold()) {
      const double add = std::min(config_.step(), static_cast<double>(k_) - l1_);
      x_.set(e, add);
      l1_ += add;
      if (l1_ >= static_cast<double>(k_) - kFrozenGuard) {
        frozen_ = true;
        check_full_mass();
      }
      trace("accept", e, derivative, std_error);
    } else {
      rejections_.push_back({position, e, derivative});
      trace("reject", e, derivative, std_error);
    }
    check_structure(position);
    peak_support_ = std::max(peak_support_, x_.support_size());
  }

  StreamOutcome finalize(const OfflineAlgorithm& offline,
                         const RoundingChoice& rounding) const {
    StreamOutcome out;
    out.tau = tau_;
    out.set = rounding.pipage ? pipage_round_deterministic(f_, x_, k_)
                              : swap_round(x_, k_, rounding.seed);
    out.value = f_.evaluate(out.set);
    ElementSet s2 = offline(f_, x_.support(), k_).set;
    const double v2 = f_.evaluate(s2);
    if (v2 > out.value) {
      out.set = std::move(s2);
      out.value = v2;
    }
    return out;
  }

  const FractionalPoint& x() const { return x_; }
  double mass() const { return l1_; }
  bool frozen() const { return frozen_; }
  std::size_t processed() const { return processed_; }
  std::size_t peak_support() const { return peak_support_; }
  std::size_t support_budget() const {
    return static_cast<std::size_t>(
        std::ceil(static_cast<double>(k_) / config_.step() - kTolerance));
  }
  const std::vector<Rejection>& rejections() const { return rejections_; }
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  void trace(const char* event, ElementId e, double derivative,
             double std_error) {
    if (!trace_) return;
    std::ostringstream line;
    line << std::setprecision(12) << "event=" << event << " tau=" << tau_
         << " e=" << e << " dFdx=" << derivative;
    if (!config_.derivative.exact) line << " stderr=" << std_error;
    line << " mass=" << l1_;
    *trace_ << line.str() << '\n';
  }

  // Every coordinate equals p except at most one smaller one, which only
  // exists once the mass has reached k.
  void check_structure(std::size_t position) {
    const double p = config_.step();
    std::size_t smaller = 0;
    bool ok = true;
    for (const auto& [e, v] : x_.coords()) {
      if (std::abs(v - p) <= kFrozenGuard) continue;
      if (v < p) {
        ++smaller;
      } else {
        ok = false;
      }
    }
    if (smaller > 1 || (smaller == 1 && !frozen_)) ok = false;
    const std::string where = " at element #" + std::to_string(position);
    if (!ok) violations_.push_back("coordinate structure" + where);
    if (l1_ > static_cast<double>(k_) + kFrozenGuard) {
      violations_.push_back("mass bound" + where);
    }
    if (x_.support_size() > support_budget()) {
      violations_.push_back("support budget" + where);
    }
  }

  void check_full_mass() {
    std::size_t fractional = 0;
    for (const auto& [e, v] : x_.coords()) fractional += v < 1.0 ? 1 : 0;
    if (!config_.derivative.exact || fractional > kExactExtensionCap) return;
    if (multilinear_exact(f_, x_) <
        config_.threshold_constant() * tau_ - kTolerance) {
      violations_.push_back("full-mass value bound");
    }
  }

  const Oracle& f_;
  std::size_t k_;
  double tau_;
  ExtensionConfig config_;
  FractionalPoint x_;
  double l1_ = 0.0;
  bool frozen_ = false;
  std::ostream* trace_ = nullptr;
  std::size_t processed_ = 0;
  std::size_t peak_support_ = 0;
  std::vector<Rejection> rejections_;
  std::vector<std::string> violations_;
};

// One ExtensionStream per guess on the ladder. The lower bound m is the
// largest of f(empty) and the singleton values seen so far.
class ExtensionLadderStream {
 public:
  ExtensionLadderStream(const Oracle& f, std::size_t k,
                        const ExtensionConfig& config)
      : f_(f), k_(k), config_(config) {
    config_.validate();
    if (k == 0) throw InputError("k must be at least 1");
    m_ = f_.evaluate(ElementSet{});
    rebuild_ladder();
  }

  void process(ElementId e) {
    if (e >= f_.n()) throw InputError("element id out of range");
    const double singleton = f_.evaluate(ElementSet{e});
    if (singleton > m_) {
      m_ = singleton;
      rebuild_ladder();
    }
    for (auto& [h, stream] : streams_) stream.process(e);
    ++processed_;
    std::size_t support = 0;
    for (const auto& [h, stream] : streams_) support += stream.x().support_size();
    peak_support_ = std::max(peak_support_, support);
  }

  StreamOutcome finalize(const OfflineAlgorithm& offline,
                         const RoundingChoice& rounding) const {
    StreamOutcome best;
    bool have = false;
    for (const auto& [h, stream] : streams_) {
      StreamOutcome candidate = stream.finalize(offline, rounding);
      if (!have || candidate.value > best.value) {
        best = std::move(candidate);
        have = true;
      }
    }
    if (!have) best.value = f_.evaluate(best.set);
    return best;
  }

  double m() const { return m_; }
  const std::map<long, ExtensionStream>& streams() const { return streams_; }
  std::size_t peak_support() const { return peak_support_; }

  std::vector<std::string> violations() const {
    std::vector<std::string> all;
    for (const auto& [h, stream] : streams_) {
      all.insert(all.end(), stream.violations().begin(), stream.violations().end());
    }
    return all;
  }

 private:
  void rebuild_ladder() {
    const LadderRange range = ladder_range(
        m_, k_, config_.threshold_constant(), config_.ladder_step());
    std::erase_if(streams_, [&](const auto& kv) { return !range.contains(kv.first); });
    for (long h = range.lo; h <= range.hi; ++h) {
      if (streams_.contains(h)) continue;
      // Started mid-stream: positions (and so sampling seeds) stay global.
      streams_.emplace(h, ExtensionStream(f_, k_,
                                          guess_value(h, config_.ladder_step()),
                                          config_, processed_));
    }
  }

  const Oracle& f_;
  std::size_t k_;
  ExtensionConfig config_;
  double m_ = 0.0;
  std::map<long, ExtensionStream> streams_;
  std::size_t processed_ = 0;
  std::size_t peak_support_ = 0;
};

}  // namespace streamsub
