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
// Monte-Carlo checks of the distributional guarantees.  These are slower
// than the unit tests and run as their own ctest entry.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "seqcanary/baselines.hpp"
#include "seqcanary/random.hpp"
#include "seqcanary/testing.hpp"
#include "seqcanary/twosample.hpp"

using namespace seqcanary;

TEST_CASE("sequential p-value rarely ever crosses alpha under the null") {
  // Identical continuous distributions, evaluation after every pair up to
  // 5000 observations per arm.  The fraction of runs where the running
  // minimum q ever reaches 0.05 must stay within the binomial envelope of
  // the guarantee.
  const int runs = 500;
  const int cap = 5000;
  const double alpha = 0.05;
  int crossed = 0;
  for (int r = 0; r < runs; ++r) {
    Rng rng_a(derive_seed(1111, 2 * r));
    Rng rng_b(derive_seed(1111, 2 * r + 1));
    ArmSample a, b;
    for (int k = 1; k <= cap; ++k) {
      a.insert(rng_a.uniform());
      b.insert(rng_b.uniform());
      const auto scan = detail::two_sample_scan(a, b);
      const double d = std::max(scan.sup_d, -scan.inf_d);
      if (seq_pvalue_from_stat(d, k, k) <= alpha) {
        ++crossed;
        break;
      }
    }
  }
  const double slack = 3.0 * std::sqrt(alpha * (1 - alpha) / runs);
  CHECK(static_cast<double>(crossed) / runs <= alpha + slack);
}

TEST_CASE("mann-whitney single-look rejection rate is near nominal") {
  Rng rng(20260401);
  const int runs = 2000;
  int rejected = 0;
  for (int r = 0; r < runs; ++r) {
    ArmSample a, b;
    for (int i = 0; i < 500; ++i) {
      a.insert(rng.uniform());
      b.insert(rng.uniform());
    }
    if (mann_whitney(a, b).p_value < 0.05) ++rejected;
  }
  const double rate = static_cast<double>(rejected) / runs;
  CHECK(rate >= 0.035);
  CHECK(rate <= 0.065);
}

TEST_CASE("fixed-n tests blow past alpha under continuous monitoring") {
  // The contrast motivating the sequential machinery: applying the fixed-n
  // tests after every pair inflates the false-positive rate far above the
  // nominal level even over a short horizon.
  const int runs = 60;
  const int cap = 400;
  int ks_false = 0, mw_false = 0;
  for (int r = 0; r < runs; ++r) {
    Rng rng_a(derive_seed(999, 2 * r));
    Rng rng_b(derive_seed(999, 2 * r + 1));
    ArmSample a, b;
    bool ks_hit = false, mw_hit = false;
    for (int k = 1; k <= cap && !(ks_hit && mw_hit); ++k) {
      a.insert(rng_a.uniform());
      b.insert(rng_b.uniform());
      if (!ks_hit && ks_test(a, b).p_value < 0.05) ks_hit = true;
      if (!mw_hit && mann_whitney(a, b).p_value < 0.05) mw_hit = true;
    }
    if (ks_hit) ++ks_false;
    if (mw_hit) ++mw_false;
  }
  CHECK(static_cast<double>(ks_false) / runs > 0.15);
  CHECK(static_cast<double>(mw_false) / runs > 0.15);
}

TEST_CASE("running supnorm intersection keeps covering the true value") {
  // Streams from Normal(0,1) and Normal(0.3,1); the true sup-norm of the
  // CDF difference comes from the exact normal CDFs.
  const double truth = oracles::true_supnorm_diff(
      [](double x) { return oracles::normal_cdf(x, 0.0, 1.0); },
      [](double x) { return oracles::normal_cdf(x, 0.3, 1.0); }, -8.0, 8.0,
      40000);
  const EpsilonSpec spec{EpsilonMethod::kHoward, 0.05, 2};
  const int runs = 500;
  int covered = 0;
  for (int r = 0; r < runs; ++r) {
    Rng rng_a(derive_seed(31415, 2 * r));
    Rng rng_b(derive_seed(31415, 2 * r + 1));
    ArmSample a, b;
    RunningIntersection running;
    for (int k = 1; k <= 400; ++k) {
      a.insert(rng_a.normal());
      b.insert(rng_b.normal() + 0.3);
      if (k % 20 == 0) {
        running =
            update_running(running, supnorm_interval(diff_band(a, b, spec)));
      }
    }
    if (!running.empty_flagged && running.current.lo <= truth &&
        truth <= running.current.hi) {
      ++covered;
    }
  }
  CHECK(static_cast<double>(covered) / runs >= 0.935);
}
