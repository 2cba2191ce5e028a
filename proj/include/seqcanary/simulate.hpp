// Copyright 2026 seqcanary authors.
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
// Continuous-monitoring simulation study.  Two independent gamma streams are
// sampled pairwise; after every new pair each test (fixed-n KS, fixed-n
// Mann-Whitney, sequential equality) is evaluated at the configured level,
// and the first crossing below alpha is recorded as that test's stopping
// time.  Under the null scenario both arms draw from the same distribution,
// so every stop is a false positive; the point of the exercise is that the
// fixed-n tests accumulate false positives under per-pair evaluation while
// the sequential test does not.

#ifndef SEQCANARY_SIMULATE_HPP_
#define SEQCANARY_SIMULATE_HPP_

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "seqcanary/baselines.hpp"
#include "seqcanary/empirical.hpp"
#include "seqcanary/random.hpp"
#include "seqcanary/testing.hpp"

namespace seqcanary {

struct SimulationConfig {
  std::uint64_t seed = 1;
  std::int64_t runs = 100;
  std::int64_t cap = 5000;  // observations per arm before a run is censored
  double alpha = 0.05;
  double gamma_shape = 10.0;
  double rate_a = 10.0;
  double rate_b = 11.0;  // arm B rate in the alternative scenario

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw Error(Errc::kInvalidArgument, "alpha must lie in (0,1)");
    }
    if (runs < 1 || cap < 1) {
      throw Error(Errc::kInvalidArgument, "runs and cap must be positive");
    }
    if (!(gamma_shape > 0.0) || !(rate_a > 0.0) || !(rate_b > 0.0)) {
      throw Error(Errc::kInvalidArgument, "gamma parameters must be positive");
    }
  }
};

inline constexpr std::int64_t kCensored = -1;

struct MethodOutcome {
  std::string name;
  std::int64_t rejections = 0;
  // Number of pairs at the first rejection, kCensored if none by the cap.
  std::vector<std::int64_t> stop_times;
};

struct ScenarioResult {
  std::string name;
  MethodOutcome ks;
  MethodOutcome mw;
  MethodOutcome seq;
};

struct SimulationResult {
  SimulationConfig config;
  ScenarioResult null_scenario;
  ScenarioResult alt_scenario;
};

namespace detail {

inline ScenarioResult run_scenario(const SimulationConfig& cfg, bool alternative,
                                   std::uint64_t scenario_id) {
  ScenarioResult result;
  result.name = alternative ? "alternative" : "null";
  result.ks.name = "ks";
  result.mw.name = "mw";
  result.seq.name = "sequential";
  const double rate_b = alternative ? cfg.rate_b : cfg.rate_a;
  for (std::int64_t run = 0; run < cfg.runs; ++run) {
    const std::uint64_t stream =
        (scenario_id * static_cast<std::uint64_t>(cfg.runs) +
         static_cast<std::uint64_t>(run)) * 2;
    Rng rng_a(derive_seed(cfg.seed, stream));
    Rng rng_b(derive_seed(cfg.seed, stream + 1));
    ArmSample a, b;
    std::int64_t stop_ks = kCensored, stop_mw = kCensored, stop_seq = kCensored;
    for (std::int64_t k = 1; k <= cfg.cap; ++k) {
      a.insert(rng_a.gamma(cfg.gamma_shape, cfg.rate_a));
      b.insert(rng_b.gamma(cfg.gamma_shape, rate_b));
      if (stop_ks != kCensored && stop_mw != kCensored && stop_seq != kCensored) {
        break;  // every test has stopped; nothing left to record
      }
      const auto scan = two_sample_scan(a, b);
      const double d = std::max(scan.sup_d, -scan.inf_d);
      if (stop_seq == kCensored) {
        const double p = pvalue_for(d, k, k, SequentialKernel{});
        if (p < cfg.alpha) stop_seq = k;
      }
      if (stop_ks == kCensored) {
        const double lambda = std::sqrt(static_cast<double>(k) / 2.0) * d;
        if (kolmogorov_asymptotic_pvalue(lambda) < cfg.alpha) stop_ks = k;
      }
      if (stop_mw == kCensored) {
        double p;
        if (2 * k <= 12) {
          std::vector<double> pooled = a.values();
          pooled.insert(pooled.end(), b.values().begin(), b.values().end());
          const double na = static_cast<double>(k);
          const double u = scan.rank_sum_a - na * (na + 1.0) / 2.0;
          p = mann_whitney_exact_pvalue(pooled, static_cast<std::size_t>(k), u);
        } else {
          const double na = static_cast<double>(k);
          const double n = 2.0 * na;
          const double u = scan.rank_sum_a - na * (na + 1.0) / 2.0;
          const double var =
              na * na / 12.0 * ((n + 1.0) - scan.tie_sum / (n * (n - 1.0)));
          if (var <= 0.0) {
            p = 1.0;
          } else {
            const double z = std::max(0.0, std::abs(u - na * na / 2.0) - 0.5) /
                             std::sqrt(var);
            p = std::clamp(2.0 * (1.0 - normal_cdf(z)), 0.0, 1.0);
          }
        }
        if (p < cfg.alpha) stop_mw = k;
      }
    }
    result.ks.stop_times.push_back(stop_ks);
    result.mw.stop_times.push_back(stop_mw);
    result.seq.stop_times.push_back(stop_seq);
    if (stop_ks != kCensored) ++result.ks.rejections;
    if (stop_mw != kCensored) ++result.mw.rejections;
    if (stop_seq != kCensored) ++result.seq.rejections;
  }
  return result;
}

}  // namespace detail

inline SimulationResult run_simulation(const SimulationConfig& cfg) {
  cfg.validate();
  SimulationResult result;
  result.config = cfg;
  result.null_scenario = detail::run_scenario(cfg, false, 0);
  result.alt_scenario = detail::run_scenario(cfg, true, 1);
  return result;
}

// Median stopping time with censored runs counted as beyond the cap.
// Returns kCensored when fewer than half the runs stopped.
inline std::int64_t median_stop_time(const MethodOutcome& outcome) {
  std::vector<std::int64_t> sorted = outcome.stop_times;
  for (auto& t : sorted) {
    if (t == kCensored) t = std::numeric_limits<std::int64_t>::max();
  }
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty()) return kCensored;
  const std::int64_t mid = sorted[sorted.size() / 2];
  return mid == std::numeric_limits<std::int64_t>::max() ? kCensored : mid;
}

}  // namespace seqcanary

#endif  // SEQCANARY_SIMULATE_HPP_
