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
// Count metrics carry only event timestamps.  The stream is modeled as a
// renewal process and differences between arms are tested on the
// inter-arrival (renewal) distributions: fewer events per unit time in one
// arm shows up as stochastically larger gaps there.  Only realized gaps are
// tested; the censored interval between the last event and "now" is not
// used, which biases slow streams toward late detection.

#ifndef SEQCANARY_RENEWAL_HPP_
#define SEQCANARY_RENEWAL_HPP_

#include <cstdint>
#include <vector>

#include "seqcanary/empirical.hpp"
#include "seqcanary/errors.hpp"
#include "seqcanary/testing.hpp"

namespace seqcanary {

enum class Arm { kA, kB };

inline const char* to_string(Arm a) { return a == Arm::kA ? "a" : "b"; }

// Strictly increasing, non-negative event times for one arm.
struct EpochStream {
  Arm arm = Arm::kA;
  std::vector<double> timestamps;

  void append(double ts) {
    if (!(ts >= 0.0)) {
      throw Error(Errc::kInvalidArgument, "timestamps must be non-negative");
    }
    if (!timestamps.empty() && ts <= timestamps.back()) {
      throw Error(Errc::kNonincreasingTimestamps,
                  "timestamps must be strictly increasing");
    }
    timestamps.push_back(ts);
  }
};

struct InterArrivalSample {
  std::vector<double> gaps;
};

// Successive differences, order preserved.
inline InterArrivalSample to_gaps(const EpochStream& s) {
  if (s.timestamps.size() < 2) {
    throw Error(Errc::kInsufficientEvents,
                "need at least 2 timestamps to form a gap");
  }
  InterArrivalSample out;
  out.gaps.reserve(s.timestamps.size() - 1);
  for (std::size_t i = 1; i < s.timestamps.size(); ++i) {
    const double gap = s.timestamps[i] - s.timestamps[i - 1];
    if (!(gap > 0.0)) {
      throw Error(Errc::kNonincreasingTimestamps,
                  "timestamps must be strictly increasing");
    }
    out.gaps.push_back(gap);
  }
  return out;
}

// One evaluation of the sequential test on the two renewal distributions.
inline TestState count_metric_test(const EpochStream& a, const EpochStream& b,
                                   const TestConfig& config,
                                   Evaluation* eval = nullptr) {
  const ArmSample gaps_a(to_gaps(a).gaps);
  const ArmSample gaps_b(to_gaps(b).gaps);
  return update(make_test_state(config), gaps_a, gaps_b, eval);
}

}  // namespace seqcanary

#endif  // SEQCANARY_RENEWAL_HPP_
