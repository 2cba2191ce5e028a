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

#include <vector>

#include "seqcanary/random.hpp"
#include "seqcanary/renewal.hpp"

using namespace seqcanary;

namespace {

TestConfig equal_config(double tau = 0.1) {
  TestConfig cfg;
  cfg.hypothesis = Hypothesis::kEqual;
  cfg.alpha = 0.05;
  cfg.tau = tau;
  cfg.epsilon = EpsilonSpec{EpsilonMethod::kHoward, 0.05, 2};
  return cfg;
}

EpochStream poisson_stream(Arm arm, double rate, double horizon, Rng& rng) {
  EpochStream s{arm, {}};
  double t = 0.0;
  for (;;) {
    t += rng.exponential(rate);
    if (t > horizon) break;
    s.timestamps.push_back(t);
  }
  return s;
}

}  // namespace

TEST_CASE("gap extraction keeps order and length") {
  EpochStream s{Arm::kA, {0, 1, 3, 6}};
  CHECK(to_gaps(s).gaps == std::vector<double>{1, 2, 3});
  EpochStream t{Arm::kA, {0, 0.5}};
  CHECK(to_gaps(t).gaps == std::vector<double>{0.5});
}

TEST_CASE("gap extraction error paths") {
  EpochStream one{Arm::kA, {1.0}};
  CHECK_THROWS_WITH_AS(to_gaps(one), doctest::Contains("INSUFFICIENT_EVENTS"),
                       Error);
  EpochStream tied{Arm::kA, {0, 1, 1, 2}};
  CHECK_THROWS_WITH_AS(to_gaps(tied),
                       doctest::Contains("NONINCREASING_TIMESTAMPS"), Error);
}

TEST_CASE("epoch stream appends enforce the invariants") {
  EpochStream s{Arm::kB, {}};
  s.append(1.0);
  CHECK_THROWS_AS(s.append(1.0), Error);
  CHECK_THROWS_AS(s.append(0.5), Error);
  EpochStream neg{Arm::kB, {}};
  CHECK_THROWS_AS(neg.append(-1.0), Error);
}

TEST_CASE("gaps do not move under a time-origin shift") {
  EpochStream s{Arm::kA, {0.5, 2.0, 2.25, 9.0}};
  EpochStream shifted{Arm::kA, {}};
  for (double t : s.timestamps) shifted.timestamps.push_back(t + 1000.0);
  const auto g1 = to_gaps(s).gaps;
  const auto g2 = to_gaps(shifted).gaps;
  REQUIRE(g1.size() == g2.size());
  for (std::size_t i = 0; i < g1.size(); ++i) {
    CHECK(g1[i] == doctest::Approx(g2[i]).epsilon(1e-12));
  }
}

TEST_CASE("count metric test needs two events per arm") {
  EpochStream a{Arm::kA, {0, 1}};
  EpochStream b{Arm::kB, {0.5}};
  CHECK_THROWS_AS(count_metric_test(a, b, equal_config()), Error);
}

TEST_CASE("a clear rate difference rejects the renewal null") {
  Rng rng(314);
  EpochStream a = poisson_stream(Arm::kA, 10.0, 200.0, rng);
  EpochStream b = poisson_stream(Arm::kB, 5.0, 200.0, rng);
  Evaluation eval;
  const TestState state = count_metric_test(a, b, equal_config(), &eval);
  CHECK(state.decision == Verdict::kRejectNull);
  CHECK(eval.lower > 0.0);
}

TEST_CASE("equal rates keep the renewal null alive at one look") {
  Rng rng(2718);
  EpochStream a = poisson_stream(Arm::kA, 10.0, 50.0, rng);
  EpochStream b = poisson_stream(Arm::kB, 10.0, 50.0, rng);
  const TestState state = count_metric_test(a, b, equal_config());
  CHECK(state.decision != Verdict::kRejectNull);
}

TEST_CASE("time rescaling leaves the verdict sequence unchanged") {
  Rng rng(161803);
  EpochStream a = poisson_stream(Arm::kA, 10.0, 120.0, rng);
  EpochStream b = poisson_stream(Arm::kB, 6.0, 120.0, rng);
  const double c = 3.5;
  EpochStream as{Arm::kA, {}}, bs{Arm::kB, {}};
  for (double t : a.timestamps) as.timestamps.push_back(c * t);
  for (double t : b.timestamps) bs.timestamps.push_back(c * t);

  // Replay both pairs with growing prefixes and compare every verdict.
  const TestConfig cfg = equal_config();
  for (std::size_t k = 2; k <= std::min(a.timestamps.size(), b.timestamps.size());
       k += 7) {
    auto prefix = [&](const EpochStream& s, std::size_t m) {
      EpochStream p{s.arm, {}};
      p.timestamps.assign(s.timestamps.begin(), s.timestamps.begin() + m);
      return p;
    };
    const TestState plain =
        count_metric_test(prefix(a, k), prefix(b, k), cfg);
    const TestState scaled =
        count_metric_test(prefix(as, k), prefix(bs, k), cfg);
    CHECK(plain.decision == scaled.decision);
    CHECK(plain.q == doctest::Approx(scaled.q).epsilon(1e-12));
  }
}
