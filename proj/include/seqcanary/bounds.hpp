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
// Band radii for empirical distribution functions.
//
// The fixed-n radius is the Dvoretzky-Kiefer-Wolfowitz-Massart bound
//
//     eps_n(alpha) = sqrt(log(2/alpha) / 2n),
//
// valid for a single look at the data.  The three sequential variants are
// drop-in replacements whose coverage holds uniformly over all n, which is
// what permits continuous monitoring:
//
//   Darling-Robbins   sqrt((n+1)(2 log n - log(alpha (n*-1))) / n^2),  n >= n*
//   Szorenyi          sqrt(log(pi^2 n^2 / 3 alpha) / 2n)
//   Howard et al.     0.85 sqrt((log log(e n) + 0.8 log(1612/alpha)) / n)
//
// The Howard radius is the tightest of the three at useful sample sizes and
// is the default for monitoring.

#ifndef SEQCANARY_BOUNDS_HPP_
#define SEQCANARY_BOUNDS_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

#include "seqcanary/empirical.hpp"
#include "seqcanary/errors.hpp"

namespace seqcanary {

enum class EpsilonMethod { kFixedDkwm, kDarlingRobbins, kSzorenyi, kHoward };

inline const char* to_string(EpsilonMethod m) {
  switch (m) {
    case EpsilonMethod::kFixedDkwm: return "fixed";
    case EpsilonMethod::kDarlingRobbins: return "darling";
    case EpsilonMethod::kSzorenyi: return "szorenyi";
    case EpsilonMethod::kHoward: return "howard";
  }
  return "unknown";
}

inline bool is_sequential(EpsilonMethod m) {
  return m != EpsilonMethod::kFixedDkwm;
}

struct EpsilonSpec {
  EpsilonMethod method = EpsilonMethod::kHoward;
  double alpha = 0.05;
  // Darling-Robbins only: the radius is valid for all n >= n_star.
  std::int64_t n_star = 2;

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw Error(Errc::kInvalidArgument, "alpha must lie in (0,1)");
    }
    if (method == EpsilonMethod::kDarlingRobbins && n_star < 2) {
      throw Error(Errc::kInvalidArgument,
                  "darling-robbins requires n_star >= 2");
    }
  }

  EpsilonSpec halved() const {
    EpsilonSpec s = *this;
    s.alpha = alpha / 2.0;
    return s;
  }
};

// Band radius at sample size n for the selected method.
inline double epsilon(const EpsilonSpec& spec, std::int64_t n) {
  spec.validate();
  if (n < 1) throw Error(Errc::kInvalidArgument, "n must be positive");
  const double nd = static_cast<double>(n);
  switch (spec.method) {
    case EpsilonMethod::kFixedDkwm:
      return std::sqrt(std::log(2.0 / spec.alpha) / (2.0 * nd));
    case EpsilonMethod::kDarlingRobbins: {
      if (n < spec.n_star) {
        throw Error(Errc::kBelowNStar,
                    "darling-robbins radius is undefined below n_star");
      }
      const double inner = 2.0 * std::log(nd) -
                           std::log(spec.alpha * (static_cast<double>(spec.n_star) - 1.0));
      return std::sqrt((nd + 1.0) * inner / (nd * nd));
    }
    case EpsilonMethod::kSzorenyi: {
      const double pi = 3.14159265358979323846;
      return std::sqrt(std::log(pi * pi * nd * nd / (3.0 * spec.alpha)) / (2.0 * nd));
    }
    case EpsilonMethod::kHoward:
      return 0.85 * std::sqrt((std::log(std::log(std::exp(1.0) * nd)) +
                               0.8 * std::log(1612.0 / spec.alpha)) /
                              nd);
  }
  throw Error(Errc::kInvalidArgument, "unknown epsilon method");
}

enum class BandKind { kCdf, kQuantile, kDiff, kAbsDiff };

inline const char* to_string(BandKind k) {
  switch (k) {
    case BandKind::kCdf: return "cdf";
    case BandKind::kQuantile: return "quantile";
    case BandKind::kDiff: return "diff";
    case BandKind::kAbsDiff: return "abs_diff";
  }
  return "unknown";
}

// Piecewise-constant lower/upper envelopes over an evaluation grid.  For CDF
// bands the grid holds measurement values and the envelope is clamped to
// [0,1]; for quantile bands the grid holds probabilities and the envelope
// may contain +/-infinity sentinels.
struct BandCurve {
  BandKind kind;
  std::vector<double> grid;
  std::vector<ExtendedReal> lower;
  std::vector<ExtendedReal> upper;
  double alpha = 0.0;
};

// Confidence band on the distribution function, evaluated on the sample's
// own grid: [max(0, F_n - eps), min(1, F_n + eps)].
inline BandCurve cdf_band(const ArmSample& s, const EpsilonSpec& spec) {
  detail::require_nonempty(s);
  const double eps = epsilon(spec, s.size());
  BandCurve band;
  band.kind = BandKind::kCdf;
  band.alpha = spec.alpha;
  const auto& v = s.values();
  const double n = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i + 1 < v.size() && v[i + 1] == v[i]) continue;  // collapse ties
    const double f = static_cast<double>(i + 1) / n;
    band.grid.push_back(v[i]);
    band.lower.push_back(std::max(0.0, f - eps));
    band.upper.push_back(std::min(1.0, f + eps));
  }
  return band;
}

// Default probability grid used when exporting quantile bands.
inline std::vector<double> default_prob_grid() {
  std::vector<double> probs;
  probs.reserve(99);
  for (int i = 1; i <= 99; ++i) probs.push_back(static_cast<double>(i) / 100.0);
  return probs;
}

// Confidence band on the quantile function: upper(p) = Q_n(p + eps),
// lower(p) = Q_n->(p - eps).  Probabilities shifted outside [0,1] produce
// infinite sentinels rather than finite envelope values.
inline BandCurve quantile_band(const ArmSample& s, const EpsilonSpec& spec,
                               const std::vector<double>& probs) {
  detail::require_nonempty(s);
  const double eps = epsilon(spec, s.size());
  BandCurve band;
  band.kind = BandKind::kQuantile;
  band.alpha = spec.alpha;
  band.grid.reserve(probs.size());
  for (double p : probs) {
    if (p < 0.0 || p > 1.0) {
      throw Error(Errc::kInvalidProbability, "quantile band needs p in [0,1]");
    }
    band.grid.push_back(p);
    band.upper.push_back(upper_quantile(s, p + eps));
    const double lo = p - eps;
    band.lower.push_back(lo <= 0.0 ? kNegInf : lower_quantile(s, lo));
  }
  return band;
}

inline BandCurve quantile_band(const ArmSample& s, const EpsilonSpec& spec) {
  return quantile_band(s, spec, default_prob_grid());
}

}  // namespace seqcanary

#endif  // SEQCANARY_BOUNDS_HPP_
