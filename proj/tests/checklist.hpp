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
// Five independently evaluated formulations of "the two-sided test rejects
// at level alpha".  Each is computed from scratch (not through a shared
// code path) so the tests can assert that all five agree exactly.

#ifndef SEQCANARY_TESTS_CHECKLIST_HPP_
#define SEQCANARY_TESTS_CHECKLIST_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "seqcanary/bounds.hpp"
#include "seqcanary/empirical.hpp"
#include "seqcanary/twosample.hpp"

namespace checklist {

struct Conditions {
  bool supnorm_lower_positive;   // l > 0
  bool band_extrema_exclude;     // sup d_l > 0 or inf d_u < 0
  bool band_excludes_zero;       // pointwise: lower > 0 or upper < 0 somewhere
  bool cdf_bands_disjoint;       // per-arm alpha/2 cdf bands miss somewhere
  bool quantile_bands_disjoint;  // per-arm alpha/2 quantile bands miss somewhere

  bool all_equal() const {
    return supnorm_lower_positive == band_extrema_exclude &&
           band_extrema_exclude == band_excludes_zero &&
           band_excludes_zero == cdf_bands_disjoint &&
           cdf_bands_disjoint == quantile_bands_disjoint;
  }
};

inline Conditions evaluate(const seqcanary::ArmSample& a,
                           const seqcanary::ArmSample& b, double alpha,
                           seqcanary::EpsilonMethod method) {
  using namespace seqcanary;
  const EpsilonSpec spec{method, alpha, 2};
  const double eps_a = epsilon(spec.halved(), a.size());
  const double eps_b = epsilon(spec.halved(), b.size());

  Conditions c{};

  const DiffBand band = diff_band(a, b, spec);
  c.supnorm_lower_positive = supnorm_interval(band).lo > 0.0;
  const auto [sup, inf] = sup_inf_intervals(band);
  c.band_extrema_exclude = sup.lo > 0.0 || inf.hi < 0.0;
  c.band_excludes_zero = false;
  for (std::size_t i = 0; i < band.grid.size(); ++i) {
    if (band.lower[i] > 0.0 || band.upper[i] < 0.0) c.band_excludes_zero = true;
  }

  // CDF bands evaluated directly from the ECDFs on the merged grid plus the
  // below-minimum point.
  c.cdf_bands_disjoint = false;
  std::vector<double> xs = merged_grid(a, b);
  xs.insert(xs.begin(), std::min(a.min(), b.min()) - 1.0);
  for (double x : xs) {
    const double fa = x < a.min() ? 0.0 : ecdf_at(a, x);
    const double fb = x < b.min() ? 0.0 : ecdf_at(b, x);
    const double a_lo = std::max(0.0, fa - eps_a);
    const double a_hi = std::min(1.0, fa + eps_a);
    const double b_lo = std::max(0.0, fb - eps_b);
    const double b_hi = std::min(1.0, fb + eps_b);
    if (b_lo > a_hi || a_lo > b_hi) c.cdf_bands_disjoint = true;
  }

  // Quantile bands checked on every breakpoint of either arm's shifted
  // order-statistic grid, plus nearby points for the open/closed sides.
  std::vector<double> ps;
  auto add_breaks = [&](std::int64_t n, double eps) {
    for (std::int64_t k = 0; k <= n; ++k) {
      const double base = static_cast<double>(k) / static_cast<double>(n);
      for (double shift : {eps, -eps}) {
        for (double nudge : {-1e-9, 0.0, 1e-9}) {
          const double p = base + shift + nudge;
          if (p >= 0.0 && p <= 1.0) ps.push_back(p);
        }
      }
    }
  };
  add_breaks(a.size(), eps_a);
  add_breaks(b.size(), eps_b);
  ps.push_back(0.0);
  ps.push_back(1.0);
  std::sort(ps.begin(), ps.end());
  std::vector<double> probe = ps;
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    probe.push_back(0.5 * (ps[i] + ps[i + 1]));
  }
  c.quantile_bands_disjoint = false;
  auto q_hi = [&](const ArmSample& s, double p, double eps) {
    return upper_quantile(s, p + eps);
  };
  auto q_lo = [&](const ArmSample& s, double p, double eps) {
    return p - eps <= 0.0 ? kNegInf : lower_quantile(s, p - eps);
  };
  for (double p : probe) {
    const double a_hi = q_hi(a, p, eps_a);
    const double a_lo = q_lo(a, p, eps_a);
    const double b_hi = q_hi(b, p, eps_b);
    const double b_lo = q_lo(b, p, eps_b);
    if (b_lo > a_hi || a_lo > b_hi) c.quantile_bands_disjoint = true;
  }
  return c;
}

}  // namespace checklist

#endif  // SEQCANARY_TESTS_CHECKLIST_HPP_
