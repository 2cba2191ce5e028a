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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "seqcanary/bounds.hpp"
#include "seqcanary/random.hpp"

using namespace seqcanary;

namespace {
EpsilonSpec spec_of(EpsilonMethod m, double alpha) { return {m, alpha, 2}; }
}  // namespace

TEST_CASE("band radii match the closed forms") {
  CHECK(epsilon(spec_of(EpsilonMethod::kFixedDkwm, 0.05), 1000) ==
        doctest::Approx(0.042946).epsilon(2e-5));
  CHECK(epsilon(spec_of(EpsilonMethod::kHoward, 0.05), 1000) ==
        doctest::Approx(0.086569).epsilon(2e-5));
  // Independent evaluation of the printed formulas.
  CHECK(epsilon(spec_of(EpsilonMethod::kFixedDkwm, 0.05), 1000) ==
        doctest::Approx(std::sqrt(std::log(40.0) / 2000.0)));
  CHECK(epsilon(spec_of(EpsilonMethod::kSzorenyi, 0.05), 100) ==
        doctest::Approx(std::sqrt(std::log(M_PI * M_PI * 1e4 / 0.15) / 200.0)));
  CHECK(epsilon(spec_of(EpsilonMethod::kDarlingRobbins, 0.05), 100) ==
        doctest::Approx(std::sqrt(101.0 * (2.0 * std::log(100.0) - std::log(0.05)) /
                                  1e4)));
}

TEST_CASE("radius shrinks with n and grows as alpha falls") {
  for (EpsilonMethod m : {EpsilonMethod::kFixedDkwm, EpsilonMethod::kDarlingRobbins,
                          EpsilonMethod::kSzorenyi, EpsilonMethod::kHoward}) {
    const EpsilonSpec spec = spec_of(m, 0.05);
    const std::int64_t n0 = m == EpsilonMethod::kDarlingRobbins ? 2 : 1;
    double prev = epsilon(spec, n0);
    for (std::int64_t n = n0 + 1; n <= 2000; ++n) {
      const double e = epsilon(spec, n);
      CHECK(e < prev);
      prev = e;
    }
    for (std::int64_t n = 4096; n <= 1000000; n *= 2) {
      const double e = epsilon(spec, n);
      CHECK(e < prev);
      prev = e;
    }
    CHECK(epsilon(spec_of(m, 0.01), 100) > epsilon(spec_of(m, 0.05), 100));
    CHECK(epsilon(spec_of(m, 0.05), 100) > epsilon(spec_of(m, 0.2), 100));
  }
}

TEST_CASE("howard radius monotone over the full sweep") {
  const EpsilonSpec spec = spec_of(EpsilonMethod::kHoward, 0.05);
  double prev = epsilon(spec, 1);
  for (std::int64_t n = 2; n <= 1000000; ++n) {
    const double e = epsilon(spec, n);
    REQUIRE(e < prev);
    prev = e;
  }
}

TEST_CASE("howard is tighter than szorenyi once n is moderate") {
  // The Howard radius carries a larger constant, so it is looser than the
  // Szorenyi union bound for very small n; the crossover at alpha = 0.05
  // sits below n = 256, after which Howard stays strictly tighter.
  const EpsilonSpec hspec = spec_of(EpsilonMethod::kHoward, 0.05);
  const EpsilonSpec sspec = spec_of(EpsilonMethod::kSzorenyi, 0.05);
  CHECK(epsilon(hspec, 2) > epsilon(sspec, 2));
  std::int64_t crossover = -1;
  for (std::int64_t n = 2; n <= 256; ++n) {
    if (epsilon(hspec, n) < epsilon(sspec, n)) {
      crossover = n;
      break;
    }
  }
  REQUIRE(crossover > 2);
  for (std::int64_t n = crossover; n <= 4096; ++n) {
    REQUIRE(epsilon(hspec, n) < epsilon(sspec, n));
  }
  for (std::int64_t n = 8192; n <= 1000000; n *= 2) {
    REQUIRE(epsilon(hspec, n) < epsilon(sspec, n));
  }
}

TEST_CASE("darling-robbins needs n >= n_star") {
  EpsilonSpec spec{EpsilonMethod::kDarlingRobbins, 0.05, 10};
  CHECK_THROWS_WITH_AS(epsilon(spec, 9), doctest::Contains("BELOW_NSTAR"), Error);
  CHECK(epsilon(spec, 10) > 0.0);
  EpsilonSpec bad{EpsilonMethod::kDarlingRobbins, 0.05, 1};
  CHECK_THROWS_AS(epsilon(bad, 5), Error);
}

TEST_CASE("alpha outside (0,1) is rejected") {
  CHECK_THROWS_AS(epsilon(spec_of(EpsilonMethod::kFixedDkwm, 0.0), 10), Error);
  CHECK_THROWS_AS(epsilon(spec_of(EpsilonMethod::kFixedDkwm, 1.0), 10), Error);
}

TEST_CASE("cdf band saturates at tiny n") {
  ArmSample s({1, 2, 3});
  const BandCurve band = cdf_band(s, spec_of(EpsilonMethod::kFixedDkwm, 0.05));
  REQUIRE(band.grid == std::vector<double>{1, 2, 3});
  // eps = sqrt(log 40 / 6) = 0.7841 swallows the whole unit interval.
  CHECK(band.lower[1] == 0.0);
  CHECK(band.upper[1] == 1.0);
  for (std::size_t i = 0; i < band.grid.size(); ++i) {
    CHECK(band.lower[i] >= 0.0);
    CHECK(band.upper[i] <= 1.0);
    CHECK(band.lower[i] <= band.upper[i]);
  }
}

TEST_CASE("cdf band width is at most twice the radius") {
  Rng rng(5);
  std::vector<double> values;
  for (int i = 0; i < 400; ++i) values.push_back(rng.normal());
  ArmSample s(values);
  const EpsilonSpec spec = spec_of(EpsilonMethod::kFixedDkwm, 0.05);
  const double eps = epsilon(spec, s.size());
  const BandCurve band = cdf_band(s, spec);
  bool saw_unclamped = false;
  for (std::size_t i = 0; i < band.grid.size(); ++i) {
    CHECK(band.upper[i] - band.lower[i] <= 2.0 * eps + 1e-12);
    const double f = ecdf_at(s, band.grid[i]);
    if (f - eps > 0.0 && f + eps < 1.0) {
      saw_unclamped = true;
      CHECK(band.upper[i] - band.lower[i] == doctest::Approx(2.0 * eps));
    }
  }
  CHECK(saw_unclamped);
}

TEST_CASE("fixed-n band covers the true cdf at roughly the nominal rate") {
  Rng rng(2024);
  const EpsilonSpec spec = spec_of(EpsilonMethod::kFixedDkwm, 0.05);
  const double eps = epsilon(spec, 500);
  int covered = 0;
  const int runs = 300;
  for (int r = 0; r < runs; ++r) {
    std::vector<double> values;
    for (int i = 0; i < 500; ++i) values.push_back(rng.uniform());
    const double d =
        oracles::ks_distance_to_cdf(values, [](double x) { return x; });
    if (d <= eps) ++covered;
  }
  CHECK(static_cast<double>(covered) / runs >= 0.90);
}

TEST_CASE("quantile band shifts order statistics by the radius") {
  std::vector<double> values;
  for (int i = 1; i <= 100; ++i) values.push_back(i);
  ArmSample s(values);
  const BandCurve band =
      quantile_band(s, spec_of(EpsilonMethod::kFixedDkwm, 0.05), {0.5, 0.999});
  CHECK(band.lower[0] == 37.0);
  CHECK(band.upper[0] == 64.0);
  CHECK(band.upper[1] == kPosInf);  // p + eps >= 1

  ArmSample tiny({1, 2, 3});
  const BandCurve tb =
      quantile_band(tiny, spec_of(EpsilonMethod::kFixedDkwm, 0.05), {0.5});
  CHECK(tb.lower[0] == kNegInf);
  CHECK(tb.upper[0] == kPosInf);
}

TEST_CASE("quantile band rejects probabilities outside the unit interval") {
  ArmSample s({1, 2, 3});
  CHECK_THROWS_AS(
      quantile_band(s, spec_of(EpsilonMethod::kFixedDkwm, 0.05), {1.2}), Error);
}

TEST_CASE("quantile and cdf bands exclude the same points") {
  Rng rng(17);
  const EpsilonSpec spec = spec_of(EpsilonMethod::kFixedDkwm, 0.2);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform() * 48);
    std::vector<double> values;
    for (int i = 0; i < n; ++i) values.push_back(rng.normal());
    ArmSample s(values);
    const double eps = epsilon(spec, n);
    for (int j = 0; j < 25; ++j) {
      const double y = rng.normal() * 1.5;  // generic: almost surely no tie
      const double p = 0.02 + 0.96 * rng.uniform();
      const double f = ecdf_at(s, y);
      const bool cdf_excludes =
          p < std::max(0.0, f - eps) || p > std::min(1.0, f + eps);
      const double q_up = upper_quantile(s, p + eps);
      const double q_lo = p - eps <= 0.0 ? kNegInf : lower_quantile(s, p - eps);
      const bool quantile_excludes = y < q_lo || y > q_up;
      CHECK(cdf_excludes == quantile_excludes);
    }
  }
}
