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
// Sequential hypothesis engine for two-armed metric streams.
//
// Three null hypotheses are supported, stated through the difference
// d(x) = F_b(x) - F_a(x):
//
//   A precedes B   (A =< B stochastically):  F_a >= F_b, i.e. d <= 0
//   A succeeds B   (A >= B stochastically):  F_a <= F_b, i.e. d >= 0
//   A equals B:                              d = 0
//
// P-values invert the band-radius calibration: the p-value is the smallest
// alpha at which the relevant sup-norm statistic exceeds the combined
// two-sample radius.  For equal sample sizes the inversion has a closed
// form; otherwise the root is bracketed by the equal-n closed forms at
// min(n_a, n_b) and max(n_a, n_b) and found by bisection.
//
// Stopping decisions use the simultaneous band on d at the configured
// (time-uniform) radius:
//
//   hypothesis      reject                 approximate accept
//   A =< B          sup d_l > 0            sup d_u < tau
//   A >= B          inf d_u < 0            inf d_l > -tau
//   A = B           l > 0                  u < tau
//
// where [l, u] is the sup-norm interval.  Rejection wins if both predicates
// hold in the same update.  The running minimum q of the sequential p-value
// is itself a sequential p-value and is what monitors report.

#ifndef SEQCANARY_TESTING_HPP_
#define SEQCANARY_TESTING_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "seqcanary/bounds.hpp"
#include "seqcanary/empirical.hpp"
#include "seqcanary/errors.hpp"
#include "seqcanary/twosample.hpp"

namespace seqcanary {

enum class Hypothesis { kAPrecedesB, kASucceedsB, kEqual };

inline const char* to_string(Hypothesis h) {
  switch (h) {
    case Hypothesis::kAPrecedesB: return "a_precedes_b";
    case Hypothesis::kASucceedsB: return "a_succeeds_b";
    case Hypothesis::kEqual: return "equal";
  }
  return "unknown";
}

struct TestConfig {
  Hypothesis hypothesis = Hypothesis::kEqual;
  double alpha = 0.05;
  // Practical-irrelevance tolerance on the CDF-difference scale.
  double tau = 0.1;
  EpsilonSpec epsilon{EpsilonMethod::kHoward, 0.05, 2};

  void validate() const {
    epsilon.validate();
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw Error(Errc::kInvalidArgument, "alpha must lie in (0,1)");
    }
    if (!(tau > 0.0)) {
      throw Error(Errc::kInvalidArgument, "tau must be positive");
    }
    if (!is_sequential(epsilon.method)) {
      throw Error(Errc::kInvalidArgument,
                  "sequential monitoring needs a sequential epsilon method");
    }
    if (epsilon.alpha != alpha) {
      throw Error(Errc::kInvalidArgument,
                  "epsilon spec alpha must match test alpha");
    }
  }
};

enum class Verdict { kContinue, kRejectNull, kAcceptApproxNull };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kContinue: return "continue";
    case Verdict::kRejectNull: return "reject_null";
    case Verdict::kAcceptApproxNull: return "accept_approx_null";
  }
  return "unknown";
}

// Bound scalars backing a stopping decision.
struct Decision {
  Verdict verdict = Verdict::kContinue;
  double p_at_decision = 1.0;
  double sup_d_l = 0.0;
  double inf_d_u = 0.0;
  ScalarInterval supnorm;
};

struct DecisionPoint {
  std::int64_t n_a = 0;
  std::int64_t n_b = 0;
  std::string wall;
};

struct TestState {
  TestConfig config;
  double q = 1.0;  // running-minimum sequential p-value
  std::int64_t n_a = 0;
  std::int64_t n_b = 0;
  Verdict decision = Verdict::kContinue;
  std::optional<Decision> decision_detail;
  std::optional<DecisionPoint> decided_at;
};

// Scalars produced by one evaluation; exported as a decision record.
struct Evaluation {
  double p = 1.0;
  double q = 1.0;
  double sup_d_l = 0.0;
  double inf_d_u = 0.0;
  double lower = 0.0;  // sup-norm interval endpoints
  double upper = 0.0;
  Verdict decision = Verdict::kContinue;
};

namespace detail {

// Per-arm radius kernels used only for p-value inversion.  These are
// calibrated so that for n_a = n_b the root of
//     D = kernel(n_a, alpha) + kernel(n_b, alpha)
// is exactly the analytic p-value:
//     fixed-n:     2 exp(-n D^2 / 2)
//     sequential:  3624 / exp((n (D/1.7)^2 - log log(e n)) / 0.8)
struct FixedKernel {
  double operator()(std::int64_t n, double alpha) const {
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
  }
  double equal_n_pvalue(std::int64_t n, double d) const {
    return 2.0 * std::exp(-static_cast<double>(n) * d * d / 2.0);
  }
};

struct SequentialKernel {
  double operator()(std::int64_t n, double alpha) const {
    const double nd = static_cast<double>(n);
    return 0.85 * std::sqrt((std::log(std::log(std::exp(1.0) * nd)) +
                             0.8 * std::log(3624.0 / alpha)) /
                            nd);
  }
  double equal_n_pvalue(std::int64_t n, double d) const {
    const double nd = static_cast<double>(n);
    const double num = nd * (d / 1.7) * (d / 1.7) -
                       std::log(std::log(std::exp(1.0) * nd));
    return 3624.0 * std::exp(-num / 0.8);
  }
};

inline double clip_pvalue(double p) {
  if (!(p < 1.0)) return 1.0;
  return std::max(p, std::numeric_limits<double>::min());
}

// Bisection for the smallest alpha with D >= kernel sum.  The combined
// radius is strictly decreasing in alpha, so f(alpha) = D - sum is strictly
// increasing and the root is unique when it exists.
template <typename Kernel>
double pvalue_root(double d, std::int64_t n_a, std::int64_t n_b,
                   const Kernel& kernel) {
  if (d <= 0.0) return 1.0;
  auto f = [&](double alpha) {
    return d - kernel(n_a, alpha) - kernel(n_b, alpha);
  };
  if (f(1.0) <= 0.0) return 1.0;  // even at alpha = 1 the radius covers D
  const std::int64_t n_min = std::min(n_a, n_b);
  const std::int64_t n_max = std::max(n_a, n_b);
  double lo = kernel.equal_n_pvalue(n_max, d);
  double hi = kernel.equal_n_pvalue(n_min, d);
  const double floor = 1e-320;
  lo = std::clamp(lo, floor, 1.0);
  hi = std::clamp(hi, floor, 1.0);
  // Guard the bracket against floating-point slop at the endpoints.
  while (f(lo) > 0.0 && lo > floor) lo /= 2.0;
  while (f(hi) < 0.0 && hi < 1.0) hi = std::min(1.0, hi * 2.0);
  if (f(lo) > 0.0) return floor;
  if (f(hi) < 0.0) return 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

template <typename Kernel>
double pvalue_for(double d, std::int64_t n_a, std::int64_t n_b,
                  const Kernel& kernel) {
  if (d <= 0.0) return 1.0;
  if (n_a == n_b) return clip_pvalue(kernel.equal_n_pvalue(n_a, d));
  return clip_pvalue(pvalue_root(d, n_a, n_b, kernel));
}

// Sup-norm statistic for the configured hypothesis: positive part for
// "A precedes B", negative part for "A succeeds B", both for equality.
inline double hypothesis_statistic(const TwoSampleScan& scan, Hypothesis hyp) {
  switch (hyp) {
    case Hypothesis::kAPrecedesB: return std::max(scan.sup_d, 0.0);
    case Hypothesis::kASucceedsB: return std::max(-scan.inf_d, 0.0);
    case Hypothesis::kEqual:
      return std::max({scan.sup_d, -scan.inf_d, 0.0});
  }
  return 0.0;
}

}  // namespace detail

// P-values computed from an already-known sup-norm statistic.
inline double fixed_pvalue_from_stat(double d, std::int64_t n_a, std::int64_t n_b) {
  return detail::pvalue_for(d, n_a, n_b, detail::FixedKernel{});
}

inline double seq_pvalue_from_stat(double d, std::int64_t n_a, std::int64_t n_b) {
  return detail::pvalue_for(d, n_a, n_b, detail::SequentialKernel{});
}

// Numeric (bisection) p-value paths, exposed so tests can compare them with
// the closed forms.
inline double fixed_pvalue_root(double d, std::int64_t n_a, std::int64_t n_b) {
  return detail::clip_pvalue(detail::pvalue_root(d, n_a, n_b, detail::FixedKernel{}));
}

inline double seq_pvalue_root(double d, std::int64_t n_a, std::int64_t n_b) {
  return detail::clip_pvalue(detail::pvalue_root(d, n_a, n_b, detail::SequentialKernel{}));
}

// Fixed-n p-value for the null "A precedes B" (F_a >= F_b everywhere),
// driven by the positive part of the empirical difference.
inline double fixed_pvalue_precedes(const ArmSample& a, const ArmSample& b) {
  const auto scan = detail::two_sample_scan(a, b);
  return detail::pvalue_for(std::max(scan.sup_d, 0.0), a.size(), b.size(),
                            detail::FixedKernel{});
}

inline double fixed_pvalue_succeeds(const ArmSample& a, const ArmSample& b) {
  const auto scan = detail::two_sample_scan(a, b);
  return detail::pvalue_for(std::max(-scan.inf_d, 0.0), a.size(), b.size(),
                            detail::FixedKernel{});
}

// Fixed-n p-value for equality: min of the two one-sided p-values, which the
// inversion realizes directly through the full sup-norm.
inline double fixed_pvalue_equal(const ArmSample& a, const ArmSample& b) {
  const auto scan = detail::two_sample_scan(a, b);
  const double d = std::max({scan.sup_d, -scan.inf_d, 0.0});
  return detail::pvalue_for(d, a.size(), b.size(), detail::FixedKernel{});
}

// Time-uniform sequential p-value, valid simultaneously over all
// (n_a, n_b).  Always uses the Howard-style radius.
inline double seq_pvalue(const ArmSample& a, const ArmSample& b,
                         Hypothesis hyp) {
  const auto scan = detail::two_sample_scan(a, b);
  const double d = detail::hypothesis_statistic(scan, hyp);
  return detail::pvalue_for(d, a.size(), b.size(), detail::SequentialKernel{});
}

// Fixed-n sample size per arm giving a difference band of radius r:
// n = 2 log(4/alpha) / r^2.
inline std::int64_t fixed_sample_size(double alpha, double r) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(Errc::kInvalidArgument, "alpha must lie in (0,1)");
  }
  if (!(r > 0.0)) throw Error(Errc::kInvalidArgument, "radius must be positive");
  const double n = 2.0 * std::log(4.0 / alpha) / (r * r);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(n)));
}

// Smallest n with 2 eps_n(alpha/2) <= r for a sequential radius: the sample
// size per arm by which a monitored test is guaranteed to stop when the
// tolerance is 2r.  Found by doubling then bisecting on n.
inline std::int64_t sequential_max_n(const EpsilonSpec& spec, double r) {
  spec.validate();
  if (!(r > 0.0)) throw Error(Errc::kInvalidArgument, "radius must be positive");
  if (!is_sequential(spec.method)) {
    throw Error(Errc::kInvalidArgument, "sequential_max_n needs a sequential method");
  }
  const EpsilonSpec half = spec.halved();
  const std::int64_t n_min =
      spec.method == EpsilonMethod::kDarlingRobbins ? spec.n_star : 1;
  auto small_enough = [&](std::int64_t n) { return 2.0 * epsilon(half, n) <= r; };
  if (small_enough(n_min)) return n_min;
  std::int64_t lo = n_min, hi = n_min;
  while (!small_enough(hi)) {
    lo = hi;
    if (hi > (std::int64_t{1} << 60)) {
      throw Error(Errc::kInvalidArgument, "radius too small to attain");
    }
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (small_enough(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

inline TestState make_test_state(const TestConfig& config) {
  config.validate();
  TestState state;
  state.config = config;
  return state;
}

// One evaluation step: recompute the sequential p-value, fold it into the
// running minimum, and apply the stopping rules with the time-uniform band.
// The state freezes permanently once a decision is reached.
inline TestState update(const TestState& state, const ArmSample& a,
                        const ArmSample& b, Evaluation* eval = nullptr,
                        const std::string& wall_stamp = std::string()) {
  if (state.decision != Verdict::kContinue) {
    throw Error(Errc::kUpdateAfterDecision, "test already decided");
  }
  detail::require_nonempty(a);
  detail::require_nonempty(b);
  const TestConfig& cfg = state.config;

  TestState next = state;
  next.n_a = a.size();
  next.n_b = b.size();

  const double p = seq_pvalue(a, b, cfg.hypothesis);
  next.q = std::min(state.q, p);

  const EpsilonSpec half = cfg.epsilon.halved();
  const auto ext = detail::diff_band_extrema(a, b, epsilon(half, a.size()),
                                             epsilon(half, b.size()));
  const double l = std::max({ext.sup_dl, -ext.inf_du, 0.0});
  const double u = std::max(std::abs(ext.inf_dl), std::abs(ext.sup_du));

  bool reject = false;
  bool accept = false;
  switch (cfg.hypothesis) {
    case Hypothesis::kAPrecedesB:
      reject = ext.sup_dl > 0.0;
      accept = ext.sup_du < cfg.tau;
      break;
    case Hypothesis::kASucceedsB:
      reject = ext.inf_du < 0.0;
      accept = ext.inf_dl > -cfg.tau;
      break;
    case Hypothesis::kEqual:
      reject = l > 0.0;
      accept = u < cfg.tau;
      break;
  }
  if (reject) {
    next.decision = Verdict::kRejectNull;
  } else if (accept) {
    next.decision = Verdict::kAcceptApproxNull;
  }
  if (next.decision != Verdict::kContinue) {
    Decision d;
    d.verdict = next.decision;
    d.p_at_decision = p;
    d.sup_d_l = ext.sup_dl;
    d.inf_d_u = ext.inf_du;
    d.supnorm = ScalarInterval{l, u};
    next.decision_detail = d;
    next.decided_at = DecisionPoint{next.n_a, next.n_b, wall_stamp};
  }
  if (eval != nullptr) {
    eval->p = p;
    eval->q = next.q;
    eval->sup_d_l = ext.sup_dl;
    eval->inf_d_u = ext.inf_du;
    eval->lower = l;
    eval->upper = u;
    eval->decision = next.decision;
  }
  return next;
}

}  // namespace seqcanary

#endif  // SEQCANARY_TESTING_HPP_
