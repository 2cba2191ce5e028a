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

#ifndef SEQCANARY_ERRORS_HPP_
#define SEQCANARY_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace seqcanary {

enum class Errc {
  kEmptySample,
  kInvalidProbability,
  kBelowNStar,
  kUpdateAfterDecision,
  kInsufficientEvents,
  kNonincreasingTimestamps,
  kMalformedEvent,
  kMissingValue,
  kOutOfOrderTimestamp,
  kVersionMismatch,
  kCorruptSnapshot,
  kInvalidArgument,
};

inline const char* to_string(Errc c) {
  switch (c) {
    case Errc::kEmptySample: return "EMPTY_SAMPLE";
    case Errc::kInvalidProbability: return "INVALID_PROBABILITY";
    case Errc::kBelowNStar: return "BELOW_NSTAR";
    case Errc::kUpdateAfterDecision: return "UPDATE_AFTER_DECISION";
    case Errc::kInsufficientEvents: return "INSUFFICIENT_EVENTS";
    case Errc::kNonincreasingTimestamps: return "NONINCREASING_TIMESTAMPS";
    case Errc::kMalformedEvent: return "MALFORMED_EVENT";
    case Errc::kMissingValue: return "MISSING_VALUE";
    case Errc::kOutOfOrderTimestamp: return "OUT_OF_ORDER_TIMESTAMP";
    case Errc::kVersionMismatch: return "VERSION_MISMATCH";
    case Errc::kCorruptSnapshot: return "CORRUPT_SNAPSHOT";
    case Errc::kInvalidArgument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

// All library failures are reported through this exception type so callers
// can branch on the code rather than parse messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace seqcanary

#endif  // SEQCANARY_ERRORS_HPP_
