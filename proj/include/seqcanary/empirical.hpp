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

#ifndef SEQCANARY_EMPIRICAL_HPP_
#define SEQCANARY_EMPIRICAL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "seqcanary/errors.hpp"

namespace seqcanary {

// The upper quantile function is unbounded once the probability argument
// reaches 1, so quantile evaluations live on the extended real line.  IEEE
// infinities already order below/above every finite value, which is exactly
// the sentinel behavior needed.
using ExtendedReal = double;

inline constexpr ExtendedReal kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr ExtendedReal kPosInf = std::numeric_limits<double>::infinity();

inline bool is_finite(ExtendedReal x) { return std::isfinite(x); }

// One arm's observations, kept as a sorted multiset.  Insertion keeps the
// array ordered so order statistics and ECDF counts are direct lookups.
class ArmSample {
 public:
  ArmSample() = default;

  explicit ArmSample(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) check_value(v);
    std::sort(values_.begin(), values_.end());
  }

  void insert(double x) {
    check_value(x);
    values_.insert(std::upper_bound(values_.begin(), values_.end(), x), x);
  }

  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
  bool empty() const { return values_.empty(); }

  const std::vector<double>& values() const { return values_; }

  double min() const { return values_.front(); }
  double max() const { return values_.back(); }

 private:
  static void check_value(double v) {
    if (!std::isfinite(v)) {
      throw Error(Errc::kInvalidArgument, "sample values must be finite");
    }
  }

  std::vector<double> values_;
};

namespace detail {
inline void require_nonempty(const ArmSample& s) {
  if (s.empty()) throw Error(Errc::kEmptySample, "sample has no observations");
}
}  // namespace detail

// F_n(x): fraction of observations <= x.  Right-continuous step function.
inline double ecdf_at(const ArmSample& s, double x) {
  detail::require_nonempty(s);
  const auto& v = s.values();
  auto it = std::upper_bound(v.begin(), v.end(), x);
  return static_cast<double>(it - v.begin()) / static_cast<double>(v.size());
}

// Upper empirical quantile: sup{x : F_n(x) <= p}, the (floor(np)+1)-th order
// statistic for p in [0,1).  The sup is unbounded above for p >= 1 and empty
// for p < 0, hence the sentinels.
inline ExtendedReal upper_quantile(const ArmSample& s, double p) {
  detail::require_nonempty(s);
  if (p < 0.0) return kNegInf;
  if (p >= 1.0) return kPosInf;
  const auto& v = s.values();
  auto idx = static_cast<std::size_t>(std::floor(static_cast<double>(v.size()) * p));
  if (idx >= v.size()) idx = v.size() - 1;  // floating-point guard near p ~ 1
  return v[idx];
}

// Lower empirical quantile: the ceil(np)-th order statistic for p in (0,1],
// extended to the infimum of the domain (no finite value) for p <= 0.
inline ExtendedReal lower_quantile(const ArmSample& s, double p) {
  detail::require_nonempty(s);
  if (p > 1.0) {
    throw Error(Errc::kInvalidProbability, "lower quantile needs p <= 1");
  }
  if (p <= 0.0) return kNegInf;
  const auto& v = s.values();
  auto rank = static_cast<std::size_t>(std::ceil(static_cast<double>(v.size()) * p));
  if (rank < 1) rank = 1;
  if (rank > v.size()) rank = v.size();
  return v[rank - 1];
}

// Sorted distinct union of two samples.  Every step function built from the
// two samples is constant between consecutive grid points and beyond the
// extremes, so extrema over the whole real line are attained on this grid
// plus one evaluation point strictly below the minimum.
inline std::vector<double> merged_grid(const ArmSample& a, const ArmSample& b) {
  detail::require_nonempty(a);
  detail::require_nonempty(b);
  std::vector<double> grid;
  grid.reserve(a.values().size() + b.values().size());
  std::merge(a.values().begin(), a.values().end(), b.values().begin(),
             b.values().end(), std::back_inserter(grid));
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace seqcanary

#endif  // SEQCANARY_EMPIRICAL_HPP_
