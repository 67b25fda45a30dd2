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

// Property batteries behind `streamsub verify SUITE`.
//
// Every check is seeded and sized for a desk run; each reports a named
// pass/fail line. Fault injection adds a supermodular fixture to the oracle
// suite, which must then fail its diminishing-returns check.

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "streamsub/analysis.h"
#include "streamsub/extension_stream.h"
#include "streamsub/extensions.h"
#include "streamsub/offline.h"
#include "streamsub/randomized_stream.h"
#include "streamsub/rounding.h"
#include "streamsub/threshold_stream.h"

namespace streamsub::harness {

struct Check {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;

  bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
};

struct VerifyOptions {
  bool inject_fault = false;
  std::uint64_t seed = 1;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "oracle", "extensions", "rounding", "offline",
      "threshold", "extension-stream", "randomized"};
  return names;
}

// ---- shared fixtures ------------------------------------------------------

// Small instances of every objective family, all with n <= 10.
inline std::vector<Oracle> fixture_oracles(std::uint64_t seed) {
  std::vector<Oracle> out;
  out.push_back(make_random_coverage(10, 15, 0.3, seed));
  out.push_back(make_random_cut(10, 0.4, seed + 1));
  out.push_back(make_random_cut(8, 0.4, seed + 2, true));
  out.push_back(make_hard_instance(3, 5));
  out.push_back(make_contraction(make_random_cut(9, 0.5, seed + 3), {0, 4}));
  out.push_back(make_modular({2.5, 0.0, 1.0, 3.0, 0.5, 1.5}, 0.25));
  return out;
}

inline ElementSet random_subset(std::size_t n, Rng& rng, double density = 0.5) {
  ElementSet s;
  for (std::size_t e = 0; e < n; ++e) {
    if (rng.bernoulli(density)) s.push_back(static_cast<ElementId>(e));
  }
  return s;
}

// Random point with a mix of zero, fractional and integral coordinates.
inline FractionalPoint random_point(std::size_t n, Rng& rng, double max_value = 1.0) {
  FractionalPoint x(n);
  for (std::size_t e = 0; e < n; ++e) {
    const double u = rng.uniform();
    if (u < 0.3) continue;
    double v = rng.uniform() * max_value;
    if (u > 0.9 && max_value >= 1.0) v = 1.0;
    x.set(static_cast<ElementId>(e), v);
  }
  return x;
}

namespace detail {

class CheckList {
 public:
  explicit CheckList(std::string suite) { result_.suite = std::move(suite); }

  void add(std::string name, bool passed, std::string detail = "") {
    result_.checks.push_back({std::move(name), passed, std::move(detail)});
  }

  SuiteResult take() { return std::move(result_); }

 private:
  SuiteResult result_;
};

inline std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

inline std::vector<double> value_table(const Oracle& f) {
  std::vector<double> table(std::size_t{1} << f.n());
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    table[mask] = f.raw()(streamsub::detail::mask_to_set(mask));
  }
  return table;
}

using Sample = streamsub::Moments;

}  // namespace detail

// ---- oracle ---------------------------------------------------------------

inline SuiteResult verify_oracle(const VerifyOptions& options) {
  detail::CheckList checks("oracle");
  std::vector<Oracle> oracles = fixture_oracles(options.seed);
  if (options.inject_fault) oracles.push_back(make_cardinality_squared(6));
  Rng rng(mix_key(options.seed, 1));

  for (const Oracle& f : oracles) {
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) worst = std::min(worst, f.evaluate(random_subset(f.n(), rng)));
    checks.add("non-negativity [" + f.name() + "]", worst >= 0.0,
               "min over 1000 random sets " + detail::fmt(worst));
  }

  // For every e and A subset of B subset of N - e: f(e|A) >= f(e|B).
  for (const Oracle& f : oracles) {
    const auto table = detail::value_table(f);
    const std::uint64_t full = (std::uint64_t{1} << f.n()) - 1;
    double worst = 0.0;
    std::uint64_t pairs = 0;
    for (std::size_t e = 0; e < f.n(); ++e) {
      const std::uint64_t bit = std::uint64_t{1} << e;
      const std::uint64_t rest = full & ~bit;
      for (std::uint64_t b = rest;; b = (b - 1) & rest) {
        const double gain_b = table[b | bit] - table[b];
        for (std::uint64_t a = b;; a = (a - 1) & b) {
          ++pairs;
          worst = std::max(worst, gain_b - (table[a | bit] - table[a]));
          if (a == 0) break;
        }
        if (b == 0) break;
      }
    }
    checks.add("diminishing returns [" + f.name() + "]", worst <= kTolerance,
               std::to_string(pairs) + " pairs, worst excess " + detail::fmt(worst));
  }

  for (const Oracle& f : oracles) {
    const SubmodularityReport report = verify_submodular_exhaustive(f);
    checks.add("lattice inequality [" + f.name() + "]", report.submodular,
               std::to_string(report.pairs_checked) + " pairs");
  }

  {
    Oracle f = make_random_coverage(8, 12, 0.3, options.seed);
    f.reset_calls();
    std::uint64_t expected = 0;
    for (int t = 0; t < 50; ++t) {
      const ElementSet s = random_subset(f.n(), rng);
      f.evaluate(s);
      ++expected;
      const ElementId e = static_cast<ElementId>(rng.below(f.n()));
      f.marginal(e, s);
      expected += contains(s, e) ? 0 : 2;
    }
    checks.add("call accounting", f.calls() == expected,
               std::to_string(f.calls()) + " calls, expected " + std::to_string(expected));
  }

  // E[f(A)] >= (1 - p) f(empty) for random sets A with Pr[e in A] <= p, on
  // oracles with f(empty) > 0.
  {
    const std::vector<Oracle> probes = {
        make_contraction(make_hard_instance(3, 4), {5}),
        make_contraction(make_random_coverage(8, 12, 0.3, options.seed), {0}),
        make_contraction(make_random_cut(8, 0.5, options.seed), {1, 2})};
    for (const Oracle& f : probes) {
      bool ok = true;
      std::string worst;
      for (double p : {0.1, 0.3, 0.6}) {
        detail::Sample sample;
        for (int t = 0; t < 10000; ++t) {
          ElementSet a;
          const bool correlated = rng.bernoulli(0.5);
          const double shared = rng.uniform();
          for (std::size_t e = 0; e < f.n(); ++e) {
            const double u = correlated ? shared : rng.uniform();
            if (u < p) a.push_back(static_cast<ElementId>(e));
          }
          sample.add(f.evaluate(a));
        }
        const double bound = (1.0 - p) * f.evaluate(ElementSet{});
        if (sample.mean() < bound - 3.0 * sample.std_error()) ok = false;
        worst += "p=" + detail::fmt(p) + " mean " + detail::fmt(sample.mean()) +
                 " vs " + detail::fmt(bound) + "; ";
      }
      checks.add("sampling damping [" + f.name() + "]", ok, worst);
    }
  }
  return checks.take();
}

// ---- extensions -----------------------------------------------------------

inline SuiteResult verify_extensions(const VerifyOptions& options) {
  detail::CheckList checks("extensions");
  const std::vector<Oracle> oracles = fixture_oracles(options.seed);
  Rng rng(mix_key(options.seed, 2));

  {
    bool ok = true;
    std::size_t points = 0;
    for (const Oracle& f : oracles) {
      if (f.n() > 8) continue;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f.n()); ++mask) {
        const ElementSet s = streamsub::detail::mask_to_set(mask);
        const FractionalPoint x = FractionalPoint::indicator(f.n(), s);
        const double v = f.evaluate(s);
        ok = ok && std::abs(multilinear_exact(f, x) - v) <= kTolerance &&
             std::abs(lovasz(f, x) - v) <= kTolerance;
        ++points;
      }
    }
    checks.add("extension agreement on integral points", ok,
               std::to_string(points) + " points");
  }

  double worst_lower = 0.0, worst_scale = 0.0, worst_convex = 0.0, worst_damp = 0.0,
         worst_linear = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Oracle& f = oracles[t % oracles.size()];
    const FractionalPoint x = random_point(f.n(), rng);
    worst_lower = std::max(worst_lower, lovasz(f, x) - multilinear_exact(f, x));

    const double c = 0.1 * static_cast<double>(1 + t % 9);
    FractionalPoint cx(f.n());
    for (const auto& [e, v] : x.coords()) cx.set(e, c * v);
    worst_scale = std::max(worst_scale, c * lovasz(f, x) - lovasz(f, cx));

    const FractionalPoint y = random_point(f.n(), rng);
    FractionalPoint mix(f.n());
    for (std::size_t e = 0; e < f.n(); ++e) {
      const auto id = static_cast<ElementId>(e);
      mix.set(id, std::clamp(c * x.get(id) + (1.0 - c) * y.get(id), 0.0, 1.0));
    }
    worst_convex = std::max(
        worst_convex, lovasz(f, mix) - (c * lovasz(f, x) + (1.0 - c) * lovasz(f, y)));

    // y' supported off supp(x) with coordinates at most p.
    const double p = 0.1 + 0.8 * rng.uniform();
    FractionalPoint sum = x;
    for (std::size_t e = 0; e < f.n(); ++e) {
      const auto id = static_cast<ElementId>(e);
      if (x.get(id) == 0.0 && rng.bernoulli(0.6)) sum.set(id, p * rng.uniform());
    }
    worst_damp = std::max(worst_damp,
                          (1.0 - p) * multilinear_exact(f, x) - multilinear_exact(f, sum));

    const auto e = static_cast<ElementId>(rng.below(f.n()));
    const double s = rng.uniform();
    FractionalPoint lo = x, hi = x, mid = x;
    lo.set(e, 0.0);
    hi.set(e, 1.0);
    mid.set(e, s);
    worst_linear = std::max(
        worst_linear, std::abs(multilinear_exact(f, mid) -
                               ((1.0 - s) * multilinear_exact(f, lo) +
                                s * multilinear_exact(f, hi))));
  }
  checks.add("lovasz below multilinear", worst_lower <= kTolerance,
             "worst excess " + detail::fmt(worst_lower));
  checks.add("lovasz scaling", worst_scale <= kTolerance,
             "worst deficit " + detail::fmt(worst_scale));
  checks.add("lovasz convexity", worst_convex <= kTolerance,
             "worst excess " + detail::fmt(worst_convex));
  checks.add("disjoint-support damping", worst_damp <= kTolerance,
             "worst deficit " + detail::fmt(worst_damp));
  checks.add("multilinearity", worst_linear <= kTolerance,
             "worst gap " + detail::fmt(worst_linear));

  {
    bool ok = true;
    std::string detail_text;
    for (int t = 0; t < 4; ++t) {
      const Oracle& f = oracles[t % 2];
      const FractionalPoint x = random_point(f.n(), rng);
      const Estimate est = multilinear_sample(f, x, 100000, mix_key(options.seed, 20, t));
      const double exact = multilinear_exact(f, x);
      const double gap = std::abs(est.mean - exact);
      ok = ok && gap <= 3.0 * est.std_error + kTolerance;
      detail_text += detail::fmt(gap / std::max(est.std_error, 1e-300)) + " se; ";
    }
    checks.add("sampled multilinear within 3 stderr", ok, detail_text);
  }

  {
    const Oracle f = oracles[0];
    const FractionalPoint x = random_point(f.n(), rng);
    bool ok = true;
    for (ElementId e = 0; e < f.n(); ++e) {
      const double exact = partial_derivative_exact(f, x, e);
      const Estimate est = partial_derivative_sampled(f, x, e, 20000, mix_key(options.seed, 21, e));
      ok = ok && std::abs(est.mean - exact) <= 4.0 * est.std_error + kTolerance;
    }
    checks.add("sampled derivative within 4 stderr", ok);
  }
  return checks.take();
}

// ---- rounding -------------------------------------------------------------

inline SuiteResult verify_rounding(const VerifyOptions& options) {
  detail::CheckList checks("rounding");
  Rng rng(mix_key(options.seed, 3));

  {
    double worst = 0.0;
    for (int t = 0; t < 10000; ++t) {
      const double a = rng.uniform(), b = rng.uniform();
      const auto m = streamsub::detail::merge_options(a, b);
      worst = std::max({worst, std::abs(m.first_a + m.first_b - a - b),
                        std::abs(m.second_a + m.second_b - a - b),
                        std::abs(m.prob_first * m.first_a +
                                 (1.0 - m.prob_first) * m.second_a - a)});
    }
    checks.add("mass conservation per move", worst <= 1e-12,
               "worst drift " + detail::fmt(worst));
  }

  const std::vector<Oracle> oracles = fixture_oracles(options.seed);
  bool feasible = true, marginals_ok = true, value_ok = true, pipage_ok = true;
  double worst_z = 0.0;
  constexpr int kSeeds = 10000;
  for (int t = 0; t < 10; ++t) {
    const Oracle& f = oracles[t % oracles.size()];
    FractionalPoint x = random_point(f.n(), rng);
    const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(x.l1())));
    std::vector<double> hits(f.n(), 0.0);
    detail::Sample value;
    for (int s = 0; s < kSeeds; ++s) {
      const ElementSet set = swap_round(x, k, mix_key(options.seed, 30 + t, s));
      feasible = feasible && set.size() <= k;
      for (ElementId e : set) hits[e] += 1.0;
      value.add(f.raw()(set));
    }
    for (ElementId e = 0; e < f.n(); ++e) {
      const double p = x.get(e);
      const double sigma = std::sqrt(p * (1.0 - p) / kSeeds);
      const double gap = std::abs(hits[e] / kSeeds - p);
      if (sigma > 0.0) worst_z = std::max(worst_z, gap / sigma);
      if (gap > 4.0 * sigma + 1e-12) marginals_ok = false;
    }
    const double exact = multilinear_exact(f, x);
    if (value.mean() < exact - 3.0 * value.std_error() - kTolerance) value_ok = false;
    const ElementSet piped = pipage_round_deterministic(f, x, k);
    feasible = feasible && piped.size() <= k;
    if (f.evaluate(piped) < exact - kTolerance) pipage_ok = false;
  }
  checks.add("feasibility", feasible);
  checks.add("swap marginals within 4 sigma", marginals_ok,
             "worst z " + detail::fmt(worst_z));
  checks.add("swap expected value", value_ok);
  checks.add("pipage value", pipage_ok);
  return checks.take();
}

// ---- offline --------------------------------------------------------------

inline SuiteResult verify_offline(const VerifyOptions& options) {
  detail::CheckList checks("offline");
  bool subset_ok = true, dominance = true, mean_ok = true, monotone_ok = true;
  std::string worst;
  for (int t = 0; t < 8; ++t) {
    const Oracle f = t % 2 == 0 ? make_random_cut(10, 0.4, options.seed + t)
                                : make_random_cut(9, 0.5, options.seed + t, true);
    const std::size_t k = 2 + t % 3;
    const ElementSet ground = full_set(f.n());
    const OfflineResult best = brute_force(f, ground, k);
    const double opt = f.evaluate(best.set);
    detail::Sample sample;
    for (int s = 0; s < 200; ++s) {
      const OfflineResult rg = random_greedy(f, ground, k, mix_key(options.seed, 40 + t, s));
      subset_ok = subset_ok && rg.set.size() <= k && is_canonical(rg.set);
      const double v = f.evaluate(rg.set);
      dominance = dominance && v <= opt + kTolerance && v >= 0.0;
      sample.add(v);
    }
    if (sample.mean() < opt / std::numbers::e - 3.0 * sample.std_error()) mean_ok = false;
    worst += detail::fmt(sample.mean() / std::max(opt, 1e-300)) + " ";
  }
  for (int t = 0; t < 4; ++t) {
    const Oracle f = make_random_coverage(10, 20, 0.2, options.seed + 100 + t);
    const ElementSet ground = full_set(f.n());
    const double opt = f.evaluate(brute_force(f, ground, 3).set);
    detail::Sample sample;
    for (int s = 0; s < 200; ++s) {
      sample.add(f.evaluate(random_greedy(f, ground, 3, mix_key(options.seed, 50 + t, s)).set));
    }
    if (sample.mean() < (1.0 - 1.0 / std::numbers::e) * opt - 3.0 * sample.std_error()) {
      monotone_ok = false;
    }
  }
  checks.add("outputs are feasible subsets", subset_ok);
  checks.add("brute force dominates random greedy", dominance);
  checks.add("random greedy mean >= OPT/e", mean_ok, "mean ratios " + worst);
  checks.add("random greedy monotone mean >= (1-1/e) OPT", monotone_ok);
  {
    const Oracle f = make_modular({3.0, 1.0, 2.0});
    checks.add("plain greedy picks top weights",
               plain_greedy(f, full_set(3), 2).set == ElementSet{0, 2});
  }
  return checks.take();
}

// ---- streaming ------------------------------------------------------------

inline std::vector<Oracle> streaming_instances(std::uint64_t seed, std::size_t count) {
  std::vector<Oracle> out;
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t n = 8 + t % 5;
    out.push_back(make_random_cut(n, 0.3 + 0.1 * static_cast<double>(t % 4),
                                  seed + 7 * t, t % 3 == 2));
  }
  out.push_back(make_hard_instance(3, 9));
  return out;
}

inline SuiteResult verify_threshold(const VerifyOptions& options) {
  detail::CheckList checks("threshold");
  const auto instances = streaming_instances(options.seed, 16);
  const OfflineAlgorithm offline = brute_force_offline();
  std::size_t violations = 0, late_start_checked = 0;
  bool guarantee = true, late_ok = true, ladder_ok = true, deterministic = true,
       known_ok = true, full_ok = true, disjoint = true;
  double worst_ratio = 1.0;
  for (std::size_t t = 0; t < instances.size(); ++t) {
    const Oracle& f = instances[t];
    const std::size_t k = 2 + t % 3;
    const double opt = f.raw()(brute_force(f, full_set(f.n()), k).set);
    std::vector<ElementId> order(f.n());
    for (std::size_t i = 0; i < f.n(); ++i) order[i] = static_cast<ElementId>(i);
    if (t % 2 == 1) Rng(mix_key(options.seed, 60, t)).shuffle(order);

    ThresholdConfig config;
    config.epsilon = 0.2;
    ThresholdStream stream(f, k, config);
    for (ElementId e : order) stream.process(e);
    const StreamOutcome out = stream.finalize(offline);
    violations += stream.violations().size();
    if (out.value < (0.5 - 0.2) * opt - kTolerance) guarantee = false;
    if (opt > 0.0) worst_ratio = std::min(worst_ratio, out.value / opt);

    ThresholdStream again(f, k, config);
    for (ElementId e : order) again.process(e);
    const StreamOutcome out2 = again.finalize(offline);
    deterministic = deterministic && out2.set == out.set && out2.value == out.value;

    if (stream.m() > 0.0) {
      bool found = false;
      for (const auto& [h, bank] : stream.banks()) {
        const double tau = bank.tau();
        found = found || (tau >= (1.0 - config.ladder_step()) * opt - kTolerance &&
                          tau <= opt + kTolerance);
      }
      ladder_ok = ladder_ok && found;
    }

    for (const auto& [h, bank] : stream.banks()) {
      const auto fresh = replay_bank(f, k, bank.tau(), config, order);
      ++late_start_checked;
      for (std::size_t i = 0; i < fresh.size(); ++i) {
        late_ok = late_ok && fresh[i].arrival == bank.solutions()[i].arrival;
      }
      ElementSet seen;
      std::size_t total = 0;
      for (const auto& s : bank.solutions()) {
        seen = set_union(seen, s.members);
        total += s.members.size();
      }
      disjoint = disjoint && seen.size() == total;
    }

    const double tau = (1.0 - 0.1) * opt;
    KnownTauStream known(f, k, tau, config);
    for (ElementId e : order) known.process(e);
    const StreamOutcome kout = known.finalize(offline);
    violations += known.violations().size();
    if (kout.value < (0.5 - 0.2) * opt - kTolerance) known_ok = false;
    for (const auto& s : known.bank().solutions()) {
      if (s.members.size() == k && kout.value < 0.5 * tau - kTolerance) full_ok = false;
    }
  }
  checks.add("runtime invariants (value bound, size bound, ladder shape, admission)",
             violations == 0, std::to_string(violations) + " violations");
  checks.add("ladder guarantee >= (1/2 - eps) OPT", guarantee,
             "worst ratio " + detail::fmt(worst_ratio));
  checks.add("known-tau guarantee >= (1/2 - eps) OPT", known_ok);
  checks.add("full solution implies value >= alpha tau / (1 + alpha)", full_ok);
  checks.add("ladder contains a guess in [(1 - eps') OPT, OPT]", ladder_ok);
  checks.add("late-start equivalence", late_ok,
             std::to_string(late_start_checked) + " banks replayed");
  checks.add("bank solutions pairwise disjoint", disjoint);
  checks.add("determinism", deterministic);
  return checks.take();
}

inline SuiteResult verify_extension_stream(const VerifyOptions& options) {
  detail::CheckList checks("extension-stream");
  const auto instances = streaming_instances(options.seed + 11, 10);
  const OfflineAlgorithm offline = brute_force_offline();
  std::size_t violations = 0;
  bool guarantee = true, rejection_ok = true, below_k_ok = true;
  double worst_ratio = 1.0;
  for (std::size_t t = 0; t < instances.size(); ++t) {
    const Oracle& f = instances[t];
    const std::size_t k = 2 + t % 2;
    const ElementSet opt_set = brute_force(f, full_set(f.n()), k).set;
    const double opt = f.raw()(opt_set);
    ExtensionConfig config;
    config.epsilon = 0.4;
    const double tau = (1.0 - config.epsilon / 8.0) * opt;
    ExtensionStream stream(f, k, tau, config);
    for (ElementId e = 0; e < f.n(); ++e) stream.process(e);
    violations += stream.violations().size();
    const StreamOutcome out = stream.finalize(offline, RoundingChoice::Pipage());
    if (out.value < (0.5 - 0.4) * opt - kTolerance) guarantee = false;
    if (opt > 0.0) worst_ratio = std::min(worst_ratio, out.value / opt);
    for (const Rejection& r : stream.rejections()) {
      rejection_ok = rejection_ok && r.derivative < stream.threshold();
    }
    if (!stream.frozen()) {
      const ElementSet missing = set_difference(opt_set, stream.x().support());
      FractionalPoint lifted = stream.x();
      for (ElementId e : missing) lifted.set(e, 1.0);
      const double b = static_cast<double>(missing.size()) / static_cast<double>(k);
      if (multilinear_exact(f, lifted) >
          multilinear_exact(f, stream.x()) + b * stream.threshold() * static_cast<double>(k) +
              kTolerance) {
        below_k_ok = false;
      }
    }
  }
  checks.add("runtime invariants (structure, mass, support, full-mass value)",
             violations == 0, std::to_string(violations) + " violations");
  checks.add("guarantee >= (1/2 - eps) OPT", guarantee,
             "worst ratio " + detail::fmt(worst_ratio));
  checks.add("rejected derivatives below threshold", rejection_ok);
  checks.add("unfilled point: F(x + 1_{OPT - supp}) <= F(x) + b c tau", below_k_ok);
  return checks.take();
}

inline SuiteResult verify_randomized(const VerifyOptions& options) {
  detail::CheckList checks("randomized");
  const auto instances = streaming_instances(options.seed + 23, 6);
  const OfflineAlgorithm offline = brute_force_offline();
  std::size_t violations = 0;
  bool deterministic = true, partition = true, consistency = true, mean_ok = true,
       cell_is_greedy = true;
  std::size_t consistency_checked = 0;
  RandomizedConfig config;
  config.epsilon = 0.25;
  for (std::size_t t = 0; t < instances.size(); ++t) {
    const Oracle& f = instances[t];
    const std::size_t k = 2 + t % 2;
    const ElementSet opt_set = brute_force(f, full_set(f.n()), k).set;
    const double opt = f.raw()(opt_set);
    const double rho = threshold_for(1.0, opt, k);
    std::vector<ElementId> order(f.n());
    for (std::size_t i = 0; i < f.n(); ++i) order[i] = static_cast<ElementId>(i);
    detail::Sample sample;
    for (std::uint64_t s = 0; s < 100; ++s) {
      config.seed = mix_key(options.seed, 70 + t, s);
      RandomizedStream stream(f, k, rho, config);
      for (std::size_t i = 0; i < order.size(); ++i) stream.process(order[i], i);
      violations += stream.violations().size();
      sample.add(stream.post_process(offline).value);

      if (s < 5) {
        RandomizedStream again(f, k, rho, config);
        for (std::size_t i = 0; i < order.size(); ++i) again.process(order[i], i);
        for (std::size_t i = 0; i < again.repetitions(); ++i) {
          for (std::size_t j = 0; j < again.parts(); ++j) {
            deterministic = deterministic &&
                            again.grid()[i][j].arrival == stream.grid()[i][j].arrival;
          }
        }
        for (std::size_t i = 0; i < stream.repetitions(); ++i) {
          ElementSet all;
          std::size_t total = 0;
          for (std::size_t j = 0; j < stream.parts(); ++j) {
            const ElementSet part = stream_part(order, config.seed, i, j, stream.parts());
            all = set_union(all, part);
            total += part.size();
          }
          partition = partition && all == full_set(f.n()) && total == f.n();
        }
        const ElementSet v11 = stream_part(order, config.seed, 0, 0, stream.parts());
        const ElementSet s11 = stream.grid()[0][0].members;
        cell_is_greedy = cell_is_greedy &&
                         st_greedy(f, in_stream_order(order, v11), k, rho) == s11;
        if (s11.size() < k) {
          const OptSplit split = split_opt(f, order, opt_set, k, rho, stream.parts(),
                                           config.epsilon);
          const ElementSet rejected =
              rejected_given_part(f, order, v11, split.rare, k, rho);
          const auto run = in_stream_order(order, set_union(v11, rejected));
          consistency = consistency && st_greedy(f, run, k, rho) == s11;
          ++consistency_checked;
        }
      }
    }
    if (sample.mean() < (0.5 - 3.0 * config.epsilon) * opt - 3.0 * sample.std_error()) {
      mean_ok = false;
    }
  }
  checks.add("per-cell value bound", violations == 0,
             std::to_string(violations) + " violations");
  checks.add("seeded determinism", deterministic);
  checks.add("routing partitions the stream", partition);
  checks.add("cell (1,1) equals threshold greedy on its part", cell_is_greedy);
  checks.add("consistency with rejected rare optimal elements", consistency,
             std::to_string(consistency_checked) + " runs probed");
  checks.add("mean >= (1/2 - 3 eps) OPT - 3 se", mean_ok);

  {
    const Oracle f = make_random_cut(8, 0.5, options.seed + 5);
    std::vector<ElementId> order(f.n());
    for (std::size_t i = 0; i < f.n(); ++i) order[i] = static_cast<ElementId>(i);
    const double opt = f.raw()(brute_force(f, full_set(f.n()), 2).set);
    const double rho = threshold_for(1.0, opt, 2);
    bool ok = true;
    for (ElementId e = 0; e < f.n(); ++e) {
      const double exact = exact_pe(f, order, e, 2, rho, 4);
      const Estimate est = estimate_pe(f, order, e, 2, rho, 4, 4000, mix_key(options.seed, 80, e));
      const double se = std::max(est.std_error, std::sqrt(exact * (1 - exact) / 4000.0));
      ok = ok && std::abs(est.mean - exact) <= 3.0 * se + 1e-12;
    }
    checks.add("p_e estimate matches enumeration", ok);
  }
  return checks.take();
}

inline std::vector<SuiteResult> verify(const std::string& suite,
                                       const VerifyOptions& options = {}) {
  using Runner = std::function<SuiteResult(const VerifyOptions&)>;
  const std::vector<std::pair<std::string, Runner>> runners = {
      {"oracle", verify_oracle},
      {"extensions", verify_extensions},
      {"rounding", verify_rounding},
      {"offline", verify_offline},
      {"threshold", verify_threshold},
      {"extension-stream", verify_extension_stream},
      {"randomized", verify_randomized}};
  std::vector<SuiteResult> results;
  for (const auto& [name, runner] : runners) {
    if (suite == "all" || suite == name) results.push_back(runner(options));
  }
  if (results.empty()) {
    throw InputError("unknown verify suite '" + suite +
                     "' (oracle | extensions | rounding | offline | threshold | "
                     "extension-stream | randomized | all)");
  }
  return results;
}

}  // namespace streamsub::harness
