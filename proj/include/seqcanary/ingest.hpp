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
// Event-stream data model, parsing, per-test state assembly, and snapshot
// persistence.
//
// Input events are newline-delimited JSON objects:
//
//     {"arm":"a","value":120.5,"ts":3.25}
//
// with "value" optional (ignored) in count mode.  Snapshots are versioned
// newline-delimited JSON records holding everything needed to resume a test:
// replaying the remaining events after a reload produces byte-identical
// decision records to an uninterrupted run, so the running-minimum p-value
// and any frozen decision survive restarts.

#ifndef SEQCANARY_INGEST_HPP_
#define SEQCANARY_INGEST_HPP_

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqcanary/empirical.hpp"
#include "seqcanary/errors.hpp"
#include "seqcanary/renewal.hpp"
#include "seqcanary/testing.hpp"
#include "seqcanary/twosample.hpp"

namespace seqcanary {

inline constexpr int kSnapshotFormatVersion = 1;

enum class MetricMode { kMeasurement, kCount };

inline const char* to_string(MetricMode m) {
  return m == MetricMode::kMeasurement ? "measurement" : "count";
}

enum class OutOfOrderPolicy { kReject, kSort };

struct Event {
  Arm arm = Arm::kA;
  std::optional<double> value;
  double ts = 0.0;

  bool operator==(const Event&) const = default;
};

// Parses one input line.  Unknown fields are ignored.  line_no is only used
// to point at the offending line in error messages.
inline Event parse_event(const std::string& line, MetricMode mode,
                         std::int64_t line_no = 0) {
  const auto where = " (line " + std::to_string(line_no) + ")";
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(Errc::kMalformedEvent, "not a JSON object" + where);
  }
  Event e;
  if (!j.contains("arm") || !j["arm"].is_string()) {
    throw Error(Errc::kMalformedEvent, "missing arm field" + where);
  }
  const std::string arm = j["arm"].get<std::string>();
  if (arm == "a") {
    e.arm = Arm::kA;
  } else if (arm == "b") {
    e.arm = Arm::kB;
  } else {
    throw Error(Errc::kMalformedEvent, "arm must be \"a\" or \"b\"" + where);
  }
  if (!j.contains("ts") || !j["ts"].is_number()) {
    throw Error(Errc::kMalformedEvent, "missing ts field" + where);
  }
  e.ts = j["ts"].get<double>();
  if (!(e.ts >= 0.0)) {
    throw Error(Errc::kMalformedEvent, "ts must be non-negative" + where);
  }
  if (j.contains("value")) {
    if (!j["value"].is_number()) {
      throw Error(Errc::kMalformedEvent, "value must be a number" + where);
    }
    e.value = j["value"].get<double>();
  } else if (mode == MetricMode::kMeasurement) {
    throw Error(Errc::kMissingValue, "measurement event without value" + where);
  }
  return e;
}

struct Diagnostics {
  std::int64_t ignored_post_decision = 0;
  std::int64_t ties_perturbed = 0;
  std::int64_t starved_evaluations = 0;

  bool operator==(const Diagnostics&) const = default;
};

// Full resumable state of one monitored test.
struct TestSnapshot {
  TestConfig config;
  MetricMode mode = MetricMode::kMeasurement;
  std::int64_t cadence = 1;
  double tie_epsilon = 1e-9;
  OutOfOrderPolicy out_of_order = OutOfOrderPolicy::kReject;

  TestState state;
  ArmSample sample_a;  // measurements, or inter-arrival gaps in count mode
  ArmSample sample_b;
  EpochStream epochs_a{Arm::kA, {}};
  EpochStream epochs_b{Arm::kB, {}};
  RunningIntersection supnorm_running;

  std::int64_t events_seen = 0;
  std::int64_t accepted_a = 0;
  std::int64_t accepted_b = 0;
  double last_ts = 0.0;
  Diagnostics diag;
};

inline TestSnapshot make_snapshot(const TestConfig& config, MetricMode mode,
                                  std::int64_t cadence = 1) {
  config.validate();
  if (cadence < 1) throw Error(Errc::kInvalidArgument, "cadence must be >= 1");
  TestSnapshot snap;
  snap.config = config;
  snap.state = make_test_state(config);
  snap.mode = mode;
  snap.cadence = cadence;
  return snap;
}

inline std::string wall_stamp_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace detail {

// Inserts a count-mode timestamp, perturbing exact ties so gaps stay
// strictly positive.  Returns true if a perturbation was applied.
inline bool append_timestamp(EpochStream& epochs, double ts,
                             OutOfOrderPolicy policy, double tie_epsilon) {
  auto& v = epochs.timestamps;
  if (v.empty() || ts > v.back()) {
    epochs.append(ts);
    return false;
  }
  if (ts == v.back()) {
    epochs.append(v.back() + tie_epsilon);
    return true;
  }
  if (policy == OutOfOrderPolicy::kReject) {
    throw Error(Errc::kOutOfOrderTimestamp,
                "timestamp precedes the latest event for this arm");
  }
  auto pos = std::upper_bound(v.begin(), v.end(), ts);
  bool perturbed = false;
  double t = ts;
  if (pos != v.begin() && *(pos - 1) == t) {
    // Tie with an interior timestamp: nudge into the following gap.
    t = (pos != v.end()) ? (*(pos - 1) + std::min(tie_epsilon, (*pos - t) / 2.0))
                         : *(pos - 1) + tie_epsilon;
    perturbed = true;
  }
  v.insert(pos, t);
  return perturbed;
}

inline ArmSample rebuild_gaps(const EpochStream& epochs) {
  if (epochs.timestamps.size() < 2) return ArmSample{};
  return ArmSample(to_gaps(epochs).gaps);
}

}  // namespace detail

// Runs one evaluation of the sequential test if both arms have data.
// Returns the evaluation, or nothing while an arm is still starved (which
// includes waiting out the darling-robbins n_star warmup).
inline std::optional<Evaluation> evaluate_now(TestSnapshot& snap) {
  if (snap.state.decision != Verdict::kContinue) return std::nullopt;
  std::int64_t min_n = 1;
  if (snap.config.epsilon.method == EpsilonMethod::kDarlingRobbins) {
    min_n = snap.config.epsilon.n_star;
  }
  if (snap.sample_a.size() < min_n || snap.sample_b.size() < min_n) {
    ++snap.diag.starved_evaluations;
    return std::nullopt;
  }
  Evaluation eval;
  snap.state = update(snap.state, snap.sample_a, snap.sample_b, &eval,
                      wall_stamp_now());
  snap.supnorm_running =
      update_running(snap.supnorm_running, ScalarInterval{eval.lower, eval.upper});
  return eval;
}

// Applies one event: inserts the measurement (or appends the timestamp and
// derives the new gap) and triggers an evaluation on cadence boundaries.
// Events arriving after the decision froze are counted and ignored.
inline std::optional<Evaluation> apply_event(TestSnapshot& snap, const Event& e) {
  if (snap.state.decision != Verdict::kContinue) {
    ++snap.diag.ignored_post_decision;
    return std::nullopt;
  }
  if (snap.mode == MetricMode::kMeasurement) {
    if (!e.value.has_value()) {
      throw Error(Errc::kMissingValue, "measurement event without value");
    }
    if (e.arm == Arm::kA) {
      snap.sample_a.insert(*e.value);
      ++snap.accepted_a;
    } else {
      snap.sample_b.insert(*e.value);
      ++snap.accepted_b;
    }
  } else {
    EpochStream& epochs = e.arm == Arm::kA ? snap.epochs_a : snap.epochs_b;
    ArmSample& gaps = e.arm == Arm::kA ? snap.sample_a : snap.sample_b;
    const std::size_t before = epochs.timestamps.size();
    const bool mid_insert =
        before >= 1 && e.ts < epochs.timestamps.back() && e.ts != epochs.timestamps.back();
    if (detail::append_timestamp(epochs, e.ts, snap.out_of_order, snap.tie_epsilon)) {
      ++snap.diag.ties_perturbed;
    }
    if (mid_insert) {
      gaps = detail::rebuild_gaps(epochs);
    } else if (before >= 1) {
      gaps.insert(epochs.timestamps.back() -
                  epochs.timestamps[epochs.timestamps.size() - 2]);
    }
    (e.arm == Arm::kA ? snap.accepted_a : snap.accepted_b) += 1;
  }
  snap.last_ts = e.ts;
  ++snap.events_seen;
  if (snap.events_seen % snap.cadence == 0) {
    return evaluate_now(snap);
  }
  return std::nullopt;
}

// Final evaluation at end of stream when the last event fell between
// cadence boundaries.
inline std::optional<Evaluation> flush(TestSnapshot& snap) {
  if (snap.events_seen == 0 || snap.events_seen % snap.cadence == 0) {
    return std::nullopt;
  }
  return evaluate_now(snap);
}

// Decision record line, with all numerics at 6 significant digits so replays
// are byte-stable.
inline std::string decision_record_line(double t, const Evaluation& ev,
                                        std::int64_t n_a, std::int64_t n_b) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "{\"t\":%.6g,\"n_a\":%lld,\"n_b\":%lld,\"p\":%.6g,\"q\":%.6g,"
                "\"sup_d_l\":%.6g,\"inf_d_u\":%.6g,\"l\":%.6g,\"u\":%.6g,"
                "\"decision\":\"%s\"}",
                t, static_cast<long long>(n_a), static_cast<long long>(n_b),
                ev.p, ev.q, ev.sup_d_l, ev.inf_d_u, ev.lower, ev.upper,
                to_string(ev.decision));
  return buf;
}

namespace detail {

inline nlohmann::json interval_to_json(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

inline double interval_from_json(const nlohmann::json& j, double infinity) {
  if (j.is_null()) return infinity;
  return j.get<double>();
}

inline nlohmann::json config_to_json(const TestConfig& c) {
  return nlohmann::json{
      {"hypothesis", to_string(c.hypothesis)},
      {"alpha", c.alpha},
      {"tau", c.tau},
      {"epsilon",
       {{"method", to_string(c.epsilon.method)},
        {"alpha", c.epsilon.alpha},
        {"n_star", c.epsilon.n_star}}}};
}

inline Hypothesis hypothesis_from_string(const std::string& s) {
  if (s == "a_precedes_b") return Hypothesis::kAPrecedesB;
  if (s == "a_succeeds_b") return Hypothesis::kASucceedsB;
  if (s == "equal") return Hypothesis::kEqual;
  throw Error(Errc::kCorruptSnapshot, "unknown hypothesis: " + s);
}

inline EpsilonMethod method_from_string(const std::string& s) {
  if (s == "fixed") return EpsilonMethod::kFixedDkwm;
  if (s == "darling") return EpsilonMethod::kDarlingRobbins;
  if (s == "szorenyi") return EpsilonMethod::kSzorenyi;
  if (s == "howard") return EpsilonMethod::kHoward;
  throw Error(Errc::kCorruptSnapshot, "unknown epsilon method: " + s);
}

inline Verdict verdict_from_string(const std::string& s) {
  if (s == "continue") return Verdict::kContinue;
  if (s == "reject_null") return Verdict::kRejectNull;
  if (s == "accept_approx_null") return Verdict::kAcceptApproxNull;
  throw Error(Errc::kCorruptSnapshot, "unknown verdict: " + s);
}

inline TestConfig config_from_json(const nlohmann::json& j) {
  TestConfig c;
  c.hypothesis = hypothesis_from_string(j.at("hypothesis").get<std::string>());
  c.alpha = j.at("alpha").get<double>();
  c.tau = j.at("tau").get<double>();
  const auto& e = j.at("epsilon");
  c.epsilon.method = method_from_string(e.at("method").get<std::string>());
  c.epsilon.alpha = e.at("alpha").get<double>();
  c.epsilon.n_star = e.at("n_star").get<std::int64_t>();
  return c;
}

}  // namespace detail

inline void save_snapshot(const std::string& path, const TestSnapshot& snap) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::kInvalidArgument, "cannot open " + path);
  out << nlohmann::json{{"format_version", kSnapshotFormatVersion}}.dump() << "\n";

  nlohmann::json header;
  header["config"] = detail::config_to_json(snap.config);
  header["mode"] = to_string(snap.mode);
  header["cadence"] = snap.cadence;
  header["tie_epsilon"] = snap.tie_epsilon;
  header["out_of_order"] =
      snap.out_of_order == OutOfOrderPolicy::kReject ? "reject" : "sort";
  out << header.dump() << "\n";

  nlohmann::json state;
  state["q"] = snap.state.q;
  state["n_a"] = snap.state.n_a;
  state["n_b"] = snap.state.n_b;
  state["decision"] = to_string(snap.state.decision);
  if (snap.state.decided_at.has_value()) {
    state["decided_at"] = {{"n_a", snap.state.decided_at->n_a},
                           {"n_b", snap.state.decided_at->n_b},
                           {"wall", snap.state.decided_at->wall}};
  } else {
    state["decided_at"] = nullptr;
  }
  if (snap.state.decision_detail.has_value()) {
    const Decision& d = *snap.state.decision_detail;
    state["decision_detail"] = {{"verdict", to_string(d.verdict)},
                                {"p", d.p_at_decision},
                                {"sup_d_l", d.sup_d_l},
                                {"inf_d_u", d.inf_d_u},
                                {"l", d.supnorm.lo},
                                {"u", d.supnorm.hi}};
  } else {
    state["decision_detail"] = nullptr;
  }
  state["events_seen"] = snap.events_seen;
  state["accepted_a"] = snap.accepted_a;
  state["accepted_b"] = snap.accepted_b;
  state["last_ts"] = snap.last_ts;
  state["ignored_post_decision"] = snap.diag.ignored_post_decision;
  state["ties_perturbed"] = snap.diag.ties_perturbed;
  state["starved_evaluations"] = snap.diag.starved_evaluations;
  out << state.dump() << "\n";

  nlohmann::json running;
  running["lo"] = detail::interval_to_json(snap.supnorm_running.current.lo);
  running["hi"] = detail::interval_to_json(snap.supnorm_running.current.hi);
  running["count_updates"] = snap.supnorm_running.count_updates;
  running["empty_flagged"] = snap.supnorm_running.empty_flagged;
  out << running.dump() << "\n";

  if (snap.mode == MetricMode::kMeasurement) {
    out << nlohmann::json{{"arm", "a"}, {"values", snap.sample_a.values()}}.dump()
        << "\n";
    out << nlohmann::json{{"arm", "b"}, {"values", snap.sample_b.values()}}.dump()
        << "\n";
  } else {
    out << nlohmann::json{{"arm", "a"}, {"timestamps", snap.epochs_a.timestamps}}.dump()
        << "\n";
    out << nlohmann::json{{"arm", "b"}, {"timestamps", snap.epochs_b.timestamps}}.dump()
        << "\n";
  }
  if (!out) throw Error(Errc::kInvalidArgument, "write failed: " + path);
}

inline TestSnapshot load_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kCorruptSnapshot, "cannot open " + path);
  auto next_line = [&](const char* what) {
    std::string line;
    if (!std::getline(in, line)) {
      throw Error(Errc::kCorruptSnapshot, std::string("missing record: ") + what);
    }
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(Errc::kCorruptSnapshot, std::string("bad record: ") + what);
    }
    return j;
  };

  const nlohmann::json version = next_line("version");
  if (!version.contains("format_version") ||
      !version["format_version"].is_number_integer()) {
    throw Error(Errc::kCorruptSnapshot, "format_version missing");
  }
  if (version["format_version"].get<int>() != kSnapshotFormatVersion) {
    throw Error(Errc::kVersionMismatch,
                "snapshot format_version " +
                    std::to_string(version["format_version"].get<int>()) +
                    " unsupported");
  }

  TestSnapshot snap;
  try {
    const nlohmann::json header = next_line("header");
    snap.config = detail::config_from_json(header.at("config"));
    snap.mode = header.at("mode").get<std::string>() == "count"
                    ? MetricMode::kCount
                    : MetricMode::kMeasurement;
    snap.cadence = header.at("cadence").get<std::int64_t>();
    snap.tie_epsilon = header.at("tie_epsilon").get<double>();
    snap.out_of_order = header.at("out_of_order").get<std::string>() == "sort"
                            ? OutOfOrderPolicy::kSort
                            : OutOfOrderPolicy::kReject;

    const nlohmann::json state = next_line("state");
    snap.state.config = snap.config;
    snap.state.q = state.at("q").get<double>();
    snap.state.n_a = state.at("n_a").get<std::int64_t>();
    snap.state.n_b = state.at("n_b").get<std::int64_t>();
    snap.state.decision = detail::verdict_from_string(state.at("decision").get<std::string>());
    if (!state.at("decided_at").is_null()) {
      const auto& d = state.at("decided_at");
      snap.state.decided_at = DecisionPoint{d.at("n_a").get<std::int64_t>(),
                                            d.at("n_b").get<std::int64_t>(),
                                            d.at("wall").get<std::string>()};
    }
    if (!state.at("decision_detail").is_null()) {
      const auto& d = state.at("decision_detail");
      Decision dec;
      dec.verdict = detail::verdict_from_string(d.at("verdict").get<std::string>());
      dec.p_at_decision = d.at("p").get<double>();
      dec.sup_d_l = d.at("sup_d_l").get<double>();
      dec.inf_d_u = d.at("inf_d_u").get<double>();
      dec.supnorm = ScalarInterval{d.at("l").get<double>(), d.at("u").get<double>()};
      snap.state.decision_detail = dec;
    }
    snap.events_seen = state.at("events_seen").get<std::int64_t>();
    snap.accepted_a = state.at("accepted_a").get<std::int64_t>();
    snap.accepted_b = state.at("accepted_b").get<std::int64_t>();
    snap.last_ts = state.at("last_ts").get<double>();
    snap.diag.ignored_post_decision = state.at("ignored_post_decision").get<std::int64_t>();
    snap.diag.ties_perturbed = state.at("ties_perturbed").get<std::int64_t>();
    snap.diag.starved_evaluations = state.at("starved_evaluations").get<std::int64_t>();

    const nlohmann::json running = next_line("running");
    snap.supnorm_running.current.lo = detail::interval_from_json(
        running.at("lo"), -std::numeric_limits<double>::infinity());
    snap.supnorm_running.current.hi = detail::interval_from_json(
        running.at("hi"), std::numeric_limits<double>::infinity());
    snap.supnorm_running.count_updates = running.at("count_updates").get<std::int64_t>();
    snap.supnorm_running.empty_flagged = running.at("empty_flagged").get<bool>();

    for (int i = 0; i < 2; ++i) {
      const nlohmann::json arm = next_line("arm");
      const bool is_a = arm.at("arm").get<std::string>() == "a";
      if (snap.mode == MetricMode::kMeasurement) {
        auto values = arm.at("values").get<std::vector<double>>();
        (is_a ? snap.sample_a : snap.sample_b) = ArmSample(std::move(values));
      } else {
        auto ts = arm.at("timestamps").get<std::vector<double>>();
        EpochStream& epochs = is_a ? snap.epochs_a : snap.epochs_b;
        epochs.arm = is_a ? Arm::kA : Arm::kB;
        epochs.timestamps = std::move(ts);
        (is_a ? snap.sample_a : snap.sample_b) = detail::rebuild_gaps(epochs);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kCorruptSnapshot, e.what());
  }
  try {
    snap.config.validate();
  } catch (const Error& e) {
    throw Error(Errc::kCorruptSnapshot, e.what());
  }
  return snap;
}

}  // namespace seqcanary

#endif  // SEQCANARY_INGEST_HPP_
