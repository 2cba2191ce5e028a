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
// Fixed-n two-sample baselines: Kolmogorov-Smirnov and Mann-Whitney U.
// Their p-values are valid for a single look only; applying them after
// every datapoint inflates the false-positive rate, which is the behavior
// the simulation tooling demonstrates against the sequential test.

#ifndef SEQCANARY_BASELINES_HPP_
#define SEQCANARY_BASELINES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "seqcanary/empirical.hpp"
#include "seqcanary/errors.hpp"
#include "seqcanary/twosample.hpp"

namespace seqcanary {

enum class BaselineMethod { kKolmogorovSmirnov, kMannWhitney };

struct FixedTestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  BaselineMethod method = BaselineMethod::kKolmogorovSmirnov;
};

namespace detail {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Asymptotic Kolmogorov distribution tail: 2 sum_k (-1)^(k-1) exp(-2 k^2 L^2),
// truncated once terms drop below 1e-12.
inline double kolmogorov_asymptotic_pvalue(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k < 100000; ++k) {
    const double term = std::exp(-2.0 * static_cast<double>(k) * k * lambda * lambda);
    if (term < 1e-12) break;
    sum += sign * term;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// Exact two-sided Mann-Whitney p-value by enumerating all assignments of the
// pooled sample into the two arms.  Only used for n_a + n_b <= 12.
inline double mann_whitney_exact_pvalue(const std::vector<double>& pooled,
                                        std::size_t n_a, double u_obs) {
  const std::size_t n = pooled.size();
  const double mn = static_cast<double>(n_a) * static_cast<double>(n - n_a);
  const double u_tail = std::min(u_obs, mn - u_obs);
  std::int64_t total = 0, extreme = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != n_a) continue;
    double u = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (mask & (1u << j)) continue;
        if (pooled[i] > pooled[j]) u += 1.0;
        else if (pooled[i] == pooled[j]) u += 0.5;
      }
    }
    ++total;
    if (u <= u_tail + 1e-9 || u >= mn - u_tail - 1e-9) ++extreme;
  }
  return static_cast<double>(extreme) / static_cast<double>(total);
}

}  // namespace detail

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.  The
// statistic is the sup-norm of F_nb - F_na on the merged grid, shared with
// the sequential machinery.
inline FixedTestResult ks_test(const ArmSample& a, const ArmSample& b) {
  const auto scan = detail::two_sample_scan(a, b);
  const double d = std::max(scan.sup_d, -scan.inf_d);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double lambda = std::sqrt(na * nb / (na + nb)) * d;
  return FixedTestResult{d, detail::kolmogorov_asymptotic_pvalue(lambda),
                         BaselineMethod::kKolmogorovSmirnov};
}

// Mann-Whitney U with midrank tie handling.  Exact enumeration for pooled
// sizes up to 12; otherwise two-sided normal approximation with
// tie-corrected variance and continuity correction.
inline FixedTestResult mann_whitney(const ArmSample& a, const ArmSample& b) {
  const auto scan = detail::two_sample_scan(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double n = na + nb;
  // U counts pairs where the A observation exceeds the B observation,
  // with ties counting one half.
  const double u = scan.rank_sum_a - na * (na + 1.0) / 2.0;

  FixedTestResult out;
  out.method = BaselineMethod::kMannWhitney;
  out.statistic = u;

  if (a.size() + b.size() <= 12) {
    std::vector<double> pooled = a.values();
    pooled.insert(pooled.end(), b.values().begin(), b.values().end());
    out.p_value = detail::mann_whitney_exact_pvalue(
        pooled, static_cast<std::size_t>(a.size()), u);
    return out;
  }

  const double mean = na * nb / 2.0;
  const double var =
      na * nb / 12.0 * ((n + 1.0) - scan.tie_sum / (n * (n - 1.0)));
  if (var <= 0.0) {
    out.p_value = 1.0;  // fully tied pooled sample
    return out;
  }
  const double z = std::max(0.0, std::abs(u - mean) - 0.5) / std::sqrt(var);
  out.p_value = std::clamp(2.0 * (1.0 - detail::normal_cdf(z)), 0.0, 1.0);
  return out;
}

}  // namespace seqcanary

#endif  // SEQCANARY_BASELINES_HPP_
