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
// Two-arm machinery around the difference function d(x) = F_b(x) - F_a(x).
//
// Each arm gets a one-sample band at level alpha/2; a union bound makes the
// pair simultaneous at level alpha.  The band on d is then
//
//     d_u(x) = min(1, F_nb + eps_b) - max(0, F_na - eps_a)
//     d_l(x) = max(0, F_nb - eps_b) - min(1, F_na + eps_a)
//
// with eps_i evaluated at alpha/2 and that arm's own sample size.  Extrema of
// the clamped envelopes over the whole real line are attained on the merged
// sample grid plus one point strictly below the pooled minimum (where both
// ECDFs are zero but the clamps are asymmetric).

#ifndef SEQCANARY_TWOSAMPLE_HPP_
#define SEQCANARY_TWOSAMPLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "seqcanary/bounds.hpp"
#include "seqcanary/empirical.hpp"
#include "seqcanary/errors.hpp"

namespace seqcanary {

struct ScalarInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// Band on F_b - F_a over the merged grid.  grid.front() is the sentinel
// point below the pooled minimum.
struct DiffBand {
  std::vector<double> grid;
  std::vector<double> lower;
  std::vector<double> upper;
  double alpha = 0.0;
  std::int64_t n_a = 0;
  std::int64_t n_b = 0;
};

namespace detail {

// Extrema of the clamped difference band, without materializing the band.
struct BandExtrema {
  double sup_dl;
  double inf_dl;
  double sup_du;
  double inf_du;
};

template <typename Visit>
inline void walk_diff_band(const std::vector<double>& xa,
                           const std::vector<double>& xb, double eps_a,
                           double eps_b, Visit&& visit) {
  const double na = static_cast<double>(xa.size());
  const double nb = static_cast<double>(xb.size());
  // Sentinel below the minimum: both ECDFs are 0.
  visit(std::min(1.0, eps_b), 0.0 - std::min(1.0, eps_a));
  std::size_t ia = 0, ib = 0;
  while (ia < xa.size() || ib < xb.size()) {
    double v;
    if (ib >= xb.size() || (ia < xa.size() && xa[ia] <= xb[ib])) {
      v = xa[ia];
    } else {
      v = xb[ib];
    }
    while (ia < xa.size() && xa[ia] == v) ++ia;
    while (ib < xb.size() && xb[ib] == v) ++ib;
    const double fa = static_cast<double>(ia) / na;
    const double fb = static_cast<double>(ib) / nb;
    const double du = std::min(1.0, fb + eps_b) - std::max(0.0, fa - eps_a);
    const double dl = std::max(0.0, fb - eps_b) - std::min(1.0, fa + eps_a);
    visit(du, dl);
  }
}

inline BandExtrema diff_band_extrema(const ArmSample& a, const ArmSample& b,
                                     double eps_a, double eps_b) {
  require_nonempty(a);
  require_nonempty(b);
  BandExtrema e{-2.0, 2.0, -2.0, 2.0};
  walk_diff_band(a.values(), b.values(), eps_a, eps_b, [&](double du, double dl) {
    e.sup_du = std::max(e.sup_du, du);
    e.inf_du = std::min(e.inf_du, du);
    e.sup_dl = std::max(e.sup_dl, dl);
    e.inf_dl = std::min(e.inf_dl, dl);
  });
  return e;
}

// One merge pass over both sorted samples producing the extrema of the raw
// difference d_n plus the Mann-Whitney rank aggregates.  Shared by the
// p-value machinery and the fixed-n baselines so that all of them see the
// identical sup-norm.
struct TwoSampleScan {
  double sup_d = 0.0;   // includes the tails where d_n = 0
  double inf_d = 0.0;
  double rank_sum_a = 0.0;  // midrank sum of arm A in the pooled sample
  double tie_sum = 0.0;     // sum over tie groups of t^3 - t
};

inline TwoSampleScan two_sample_scan(const ArmSample& a, const ArmSample& b) {
  require_nonempty(a);
  require_nonempty(b);
  const auto& xa = a.values();
  const auto& xb = b.values();
  const double na = static_cast<double>(xa.size());
  const double nb = static_cast<double>(xb.size());
  TwoSampleScan s;
  std::size_t ia = 0, ib = 0, seen = 0;
  while (ia < xa.size() || ib < xb.size()) {
    double v;
    if (ib >= xb.size() || (ia < xa.size() && xa[ia] <= xb[ib])) {
      v = xa[ia];
    } else {
      v = xb[ib];
    }
    std::size_t ca = 0, cb = 0;
    while (ia < xa.size() && xa[ia] == v) { ++ia; ++ca; }
    while (ib < xb.size() && xb[ib] == v) { ++ib; ++cb; }
    const double d = static_cast<double>(ib) / nb - static_cast<double>(ia) / na;
    s.sup_d = std::max(s.sup_d, d);
    s.inf_d = std::min(s.inf_d, d);
    const double g = static_cast<double>(ca + cb);
    const double midrank = static_cast<double>(seen) + (g + 1.0) / 2.0;
    s.rank_sum_a += static_cast<double>(ca) * midrank;
    s.tie_sum += g * g * g - g;
    seen += ca + cb;
  }
  return s;
}

}  // namespace detail

// Simultaneous confidence band on d = F_b - F_a at level alpha (alpha/2 per
// arm).  The first grid entry is the below-minimum sentinel point.
inline DiffBand diff_band(const ArmSample& a, const ArmSample& b,
                          const EpsilonSpec& spec) {
  detail::require_nonempty(a);
  detail::require_nonempty(b);
  const EpsilonSpec half = spec.halved();
  const double eps_a = epsilon(half, a.size());
  const double eps_b = epsilon(half, b.size());
  DiffBand band;
  band.alpha = spec.alpha;
  band.n_a = a.size();
  band.n_b = b.size();
  const double lo = std::min(a.min(), b.min());
  std::vector<double> grid = merged_grid(a, b);
  band.grid.reserve(grid.size() + 1);
  band.grid.push_back(lo - 1.0);
  band.grid.insert(band.grid.end(), grid.begin(), grid.end());
  band.lower.reserve(band.grid.size());
  band.upper.reserve(band.grid.size());
  detail::walk_diff_band(a.values(), b.values(), eps_a, eps_b,
                         [&](double du, double dl) {
                           band.upper.push_back(du);
                           band.lower.push_back(dl);
                         });
  return band;
}

// Confidence intervals for sup d and inf d: each is bracketed by the same
// extremum of the band's lower and upper envelopes.
inline std::pair<ScalarInterval, ScalarInterval> sup_inf_intervals(
    const DiffBand& band) {
  double sup_l = -2.0, sup_u = -2.0, inf_l = 2.0, inf_u = 2.0;
  for (std::size_t i = 0; i < band.grid.size(); ++i) {
    sup_l = std::max(sup_l, band.lower[i]);
    sup_u = std::max(sup_u, band.upper[i]);
    inf_l = std::min(inf_l, band.lower[i]);
    inf_u = std::min(inf_u, band.upper[i]);
  }
  return {ScalarInterval{sup_l, sup_u}, ScalarInterval{inf_l, inf_u}};
}

// Confidence interval for the sup-norm of d.  The lower endpoint is the
// distance by which the band escapes zero: positive parts of sup d_l and
// -inf d_u (zero when the band straddles 0 everywhere, in which case no
// positive deviation is certified).  The upper endpoint is the largest
// absolute envelope value.
inline ScalarInterval supnorm_interval(const DiffBand& band) {
  auto [sup, inf] = sup_inf_intervals(band);
  ScalarInterval out;
  out.lo = std::max({sup.lo, -inf.hi, 0.0});
  out.hi = std::max(std::abs(inf.lo), std::abs(sup.hi));
  return out;
}

// Pointwise image of [lower, upper] under x -> |x|.
inline BandCurve abs_diff_band(const DiffBand& band) {
  BandCurve out;
  out.kind = BandKind::kAbsDiff;
  out.alpha = band.alpha;
  out.grid = band.grid;
  out.lower.reserve(band.grid.size());
  out.upper.reserve(band.grid.size());
  for (std::size_t i = 0; i < band.grid.size(); ++i) {
    const double dl = band.lower[i];
    const double du = band.upper[i];
    double lo = 0.0;
    if (dl > 0.0) lo = dl;
    else if (du < 0.0) lo = -du;
    out.lower.push_back(lo);
    out.upper.push_back(std::max(std::abs(dl), std::abs(du)));
  }
  return out;
}

// Running intersection of scalar confidence intervals.  Each update can only
// shrink the interval; an empty intersection is collapsed to the midpoint of
// the overlap boundary and flagged (under correct coverage this happens with
// probability at most alpha).
struct RunningIntersection {
  ScalarInterval current{-std::numeric_limits<double>::infinity(),
                         std::numeric_limits<double>::infinity()};
  std::int64_t count_updates = 0;
  bool empty_flagged = false;
};

inline RunningIntersection update_running(const RunningIntersection& r,
                                          const ScalarInterval& next) {
  RunningIntersection out = r;
  out.current.lo = std::max(r.current.lo, next.lo);
  out.current.hi = std::min(r.current.hi, next.hi);
  if (out.current.lo > out.current.hi) {
    const double mid = (out.current.lo + out.current.hi) / 2.0;
    out.current.lo = mid;
    out.current.hi = mid;
    out.empty_flagged = true;
  }
  out.count_updates = r.count_updates + 1;
  return out;
}

}  // namespace seqcanary

#endif  // SEQCANARY_TWOSAMPLE_HPP_
