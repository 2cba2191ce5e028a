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
// Operator CLI: monitor a two-armed metric stream with sequential stopping
// rules, export confidence bands for plotting, run the continuous-monitoring
// simulation study, and plan sample sizes.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seqcanary/seqcanary.hpp"

namespace {

using namespace seqcanary;

std::string fmt6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Hypothesis flags are stated for the treatment arm B relative to control A:
// "leq" tests the null B =< A (undesirable direction is up), "geq" tests
// B >= A, "eq" tests equality in distribution.
Hypothesis hypothesis_from_flag(const std::string& flag) {
  if (flag == "leq") return Hypothesis::kASucceedsB;  // null: F_a <= F_b
  if (flag == "geq") return Hypothesis::kAPrecedesB;  // null: F_a >= F_b
  if (flag == "eq") return Hypothesis::kEqual;
  throw Error(Errc::kInvalidArgument, "hypothesis must be leq, geq or eq");
}

EpsilonMethod method_from_flag(const std::string& flag) {
  if (flag == "howard") return EpsilonMethod::kHoward;
  if (flag == "szorenyi") return EpsilonMethod::kSzorenyi;
  if (flag == "darling") return EpsilonMethod::kDarlingRobbins;
  if (flag == "fixed") return EpsilonMethod::kFixedDkwm;
  throw Error(Errc::kInvalidArgument,
              "epsilon must be howard, szorenyi, darling or fixed");
}

struct CommonOpts {
  std::string in = "-";
  std::string out = "-";
  double alpha = 0.05;
  double tau = 0.1;
  std::string hypothesis = "eq";
  std::string mode = "measurement";
  std::string epsilon = "howard";
  std::int64_t n_star = 2;
  std::int64_t cadence = 1;
  std::string out_of_order = "reject";
  double tie_epsilon = 1e-9;
};

MetricMode mode_from_flag(const std::string& flag) {
  if (flag == "measurement") return MetricMode::kMeasurement;
  if (flag == "count") return MetricMode::kCount;
  throw Error(Errc::kInvalidArgument, "mode must be measurement or count");
}

TestConfig build_config(const CommonOpts& o) {
  TestConfig cfg;
  cfg.hypothesis = hypothesis_from_flag(o.hypothesis);
  cfg.alpha = o.alpha;
  cfg.tau = o.tau;
  cfg.epsilon = EpsilonSpec{method_from_flag(o.epsilon), o.alpha, o.n_star};
  cfg.validate();
  return cfg;
}

class LineSource {
 public:
  explicit LineSource(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ifstream>(path);
      if (!*file_) throw Error(Errc::kInvalidArgument, "cannot open " + path);
    }
  }
  bool next(std::string& line) {
    std::istream& in = file_ ? *file_ : std::cin;
    return static_cast<bool>(std::getline(in, line));
  }

 private:
  std::unique_ptr<std::ifstream> file_;
};

class LineSink {
 public:
  explicit LineSink(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::trunc);
      if (!*file_) throw Error(Errc::kInvalidArgument, "cannot open " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// ---------------------------------------------------------------------------
// monitor

int run_monitor(const CommonOpts& o, const std::string& resume,
                const std::string& snapshot_out) {
  TestSnapshot snap;
  if (!resume.empty()) {
    snap = load_snapshot(resume);
  } else {
    snap = make_snapshot(build_config(o), mode_from_flag(o.mode), o.cadence);
    snap.tie_epsilon = o.tie_epsilon;
    snap.out_of_order = o.out_of_order == "sort" ? OutOfOrderPolicy::kSort
                                                 : OutOfOrderPolicy::kReject;
  }

  LineSource src(o.in);
  LineSink sink(o.out);
  std::string line;
  std::int64_t line_no = 0;
  while (src.next(line)) {
    ++line_no;
    if (line.empty()) continue;
    const Event e = parse_event(line, snap.mode, line_no);
    if (auto eval = apply_event(snap, e)) {
      sink.stream() << decision_record_line(snap.last_ts, *eval, snap.state.n_a,
                                            snap.state.n_b)
                    << "\n";
    }
  }
  if (auto eval = flush(snap)) {
    sink.stream() << decision_record_line(snap.last_ts, *eval, snap.state.n_a,
                                          snap.state.n_b)
                  << "\n";
  }
  if (!snapshot_out.empty()) save_snapshot(snapshot_out, snap);

  std::cerr << "verdict=" << to_string(snap.state.decision)
            << " q=" << fmt6(snap.state.q) << " n_a=" << snap.state.n_a
            << " n_b=" << snap.state.n_b << " events=" << snap.events_seen;
  if (snap.diag.ignored_post_decision > 0) {
    std::cerr << " ignored_post_decision=" << snap.diag.ignored_post_decision;
  }
  if (snap.diag.ties_perturbed > 0) {
    std::cerr << " ties_perturbed=" << snap.diag.ties_perturbed;
  }
  if (snap.diag.starved_evaluations > 0) {
    std::cerr << " diagnostic=STARVED_ARM";
  }
  if (snap.supnorm_running.empty_flagged) {
    std::cerr << " diagnostic=EMPTY_INTERSECTION";
  }
  std::cerr << "\n";

  switch (snap.state.decision) {
    case Verdict::kAcceptApproxNull: return 0;
    case Verdict::kRejectNull: return 2;
    case Verdict::kContinue: return 3;
  }
  return 3;
}

// ---------------------------------------------------------------------------
// bands

void write_band_rows(std::ostream& out, const std::string& kind,
                     const BandCurve& band, std::int64_t n_a, std::int64_t n_b) {
  for (std::size_t i = 0; i < band.grid.size(); ++i) {
    out << kind << "," << fmt6(band.grid[i]) << ",";
    if (is_finite(band.lower[i])) out << fmt6(band.lower[i]);
    out << ",";
    if (is_finite(band.upper[i])) out << fmt6(band.upper[i]);
    out << "," << fmt6(band.alpha) << "," << n_a << "," << n_b << "\n";
  }
}

void write_diff_rows(std::ostream& out, const std::string& kind,
                     const DiffBand& band) {
  for (std::size_t i = 0; i < band.grid.size(); ++i) {
    out << kind << "," << fmt6(band.grid[i]) << "," << fmt6(band.lower[i]) << ","
        << fmt6(band.upper[i]) << "," << fmt6(band.alpha) << "," << band.n_a
        << "," << band.n_b << "\n";
  }
}

bool looks_like_snapshot(const std::string& path) {
  if (path == "-") return false;
  std::ifstream in(path);
  std::string first;
  if (!in || !std::getline(in, first)) return false;
  return first.find("format_version") != std::string::npos;
}

int run_bands(const CommonOpts& o) {
  ArmSample a, b;
  EpsilonMethod method = method_from_flag(o.epsilon);
  double alpha = o.alpha;
  std::int64_t n_star = o.n_star;
  RunningIntersection running;
  bool have_running = false;

  if (looks_like_snapshot(o.in)) {
    TestSnapshot snap = load_snapshot(o.in);
    a = snap.sample_a;
    b = snap.sample_b;
    method = snap.config.epsilon.method;
    alpha = snap.config.alpha;
    n_star = snap.config.epsilon.n_star;
    running = snap.supnorm_running;
    have_running = snap.supnorm_running.count_updates > 0;
  } else {
    const MetricMode mode = mode_from_flag(o.mode);
    EpochStream ea{Arm::kA, {}}, eb{Arm::kB, {}};
    const OutOfOrderPolicy policy = o.out_of_order == "sort"
                                        ? OutOfOrderPolicy::kSort
                                        : OutOfOrderPolicy::kReject;
    LineSource src(o.in);
    std::string line;
    std::int64_t line_no = 0, seen = 0;
    const EpsilonSpec half{method, alpha / 2.0, n_star};
    const bool track_running = is_sequential(method);
    while (src.next(line)) {
      ++line_no;
      if (line.empty()) continue;
      const Event e = parse_event(line, mode, line_no);
      if (mode == MetricMode::kMeasurement) {
        (e.arm == Arm::kA ? a : b).insert(*e.value);
      } else {
        EpochStream& epochs = e.arm == Arm::kA ? ea : eb;
        ArmSample& gaps = e.arm == Arm::kA ? a : b;
        const bool had = epochs.timestamps.size() >= 1;
        const double prev = had ? epochs.timestamps.back() : 0.0;
        const bool mid = had && e.ts < prev;
        detail::append_timestamp(epochs, e.ts, policy, o.tie_epsilon);
        if (mid) {
          gaps = detail::rebuild_gaps(epochs);
        } else if (had) {
          gaps.insert(epochs.timestamps.back() -
                      epochs.timestamps[epochs.timestamps.size() - 2]);
        }
      }
      ++seen;
      const std::int64_t min_n =
          method == EpsilonMethod::kDarlingRobbins ? n_star : 1;
      if (track_running && seen % o.cadence == 0 && a.size() >= min_n &&
          b.size() >= min_n) {
        const auto ext = detail::diff_band_extrema(
            a, b, epsilon(half, a.size()), epsilon(half, b.size()));
        const double l = std::max({ext.sup_dl, -ext.inf_du, 0.0});
        const double u = std::max(std::abs(ext.inf_dl), std::abs(ext.sup_du));
        running = update_running(running, ScalarInterval{l, u});
        have_running = true;
      }
    }
  }

  if (a.empty() || b.empty()) {
    throw Error(Errc::kEmptySample, "both arms need at least one observation");
  }

  const EpsilonSpec half{method, alpha / 2.0, n_star};
  const EpsilonSpec full{method, alpha, n_star};
  LineSink sink(o.out);
  std::ostream& out = sink.stream();
  out << "kind,grid,lower,upper,alpha,n_a,n_b\n";
  write_band_rows(out, "cdf_a", cdf_band(a, half), a.size(), b.size());
  write_band_rows(out, "cdf_b", cdf_band(b, half), a.size(), b.size());
  write_band_rows(out, "quantile_a", quantile_band(a, half), a.size(), b.size());
  write_band_rows(out, "quantile_b", quantile_band(b, half), a.size(), b.size());
  const DiffBand diff = diff_band(a, b, full);
  write_diff_rows(out, "diff", diff);
  write_band_rows(out, "abs_diff", abs_diff_band(diff), a.size(), b.size());
  const ScalarInterval sup =
      have_running ? running.current : supnorm_interval(diff);
  out << "supnorm,," << fmt6(sup.lo) << "," << fmt6(sup.hi) << ","
      << fmt6(alpha) << "," << a.size() << "," << b.size() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

int run_simulate(const SimulationConfig& cfg, const std::string& out_path) {
  const SimulationResult result = run_simulation(cfg);
  std::cout << "# seqcanary simulate seed=" << cfg.seed << " runs=" << cfg.runs
            << " cap=" << cfg.cap << " alpha=" << fmt6(cfg.alpha)
            << " gamma_shape=" << fmt6(cfg.gamma_shape) << " rate_a="
            << fmt6(cfg.rate_a) << " rate_b=" << fmt6(cfg.rate_b) << "\n";
  std::cout << "# generator=" << kGeneratorName << "\n";
  std::cout << "scenario,method,rejections,runs,median_stop\n";
  for (const ScenarioResult* s : {&result.null_scenario, &result.alt_scenario}) {
    for (const MethodOutcome* m : {&s->ks, &s->mw, &s->seq}) {
      const std::int64_t med = median_stop_time(*m);
      std::cout << s->name << "," << m->name << "," << m->rejections << ","
                << cfg.runs << ",";
      if (med != kCensored) std::cout << med;
      std::cout << "\n";
    }
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw Error(Errc::kInvalidArgument, "cannot open " + out_path);
    out << "# seed=" << cfg.seed << " generator=" << kGeneratorName << "\n";
    out << "scenario,run,method,stop_n\n";
    for (const ScenarioResult* s : {&result.null_scenario, &result.alt_scenario}) {
      for (const MethodOutcome* m : {&s->ks, &s->mw, &s->seq}) {
        for (std::size_t r = 0; r < m->stop_times.size(); ++r) {
          out << s->name << "," << r << "," << m->name << ",";
          if (m->stop_times[r] != kCensored) out << m->stop_times[r];
          out << "\n";  // empty stop_n marks no stop by cap
        }
      }
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// plan

int run_plan(double alpha, double r, double tau, const std::string& eps,
             std::int64_t n_star) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(Errc::kInvalidArgument, "alpha must lie in (0,1)");
  }
  double radius = r;
  if (radius <= 0.0 && tau > 0.0) radius = tau / 2.0;
  if (!(radius > 0.0)) {
    throw Error(Errc::kInvalidArgument, "need a positive --r or --tau");
  }
  std::cout << "fixed_n," << fixed_sample_size(alpha, radius) << "\n";
  const EpsilonMethod method = method_from_flag(eps);
  if (is_sequential(method)) {
    const EpsilonSpec spec{method, alpha, n_star};
    std::cout << "sequential_max_n_" << to_string(method) << ","
              << sequential_max_n(spec, radius) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anytime-valid sequential canary analysis"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string resume, snapshot_out, sim_out;
  SimulationConfig sim;
  double plan_r = 0.0, plan_tau = 0.0;

  auto add_common = [&](CLI::App& sub, bool with_test_flags) {
    sub.add_option("--in", opts.in, "input events file, or - for stdin");
    sub.add_option("--out", opts.out, "output path, or - for stdout");
    sub.add_option("--alpha", opts.alpha, "type I error level");
    sub.add_option("--mode", opts.mode, "measurement or count");
    sub.add_option("--epsilon", opts.epsilon,
                   "band radius: howard, szorenyi, darling, fixed");
    sub.add_option("--n-star", opts.n_star, "darling-robbins n*");
    sub.add_option("--cadence", opts.cadence, "evaluate every k events");
    sub.add_option("--out-of-order", opts.out_of_order,
                   "count mode timestamp policy: reject or sort");
    sub.add_option("--tie-epsilon", opts.tie_epsilon,
                   "perturbation applied to tied count-mode timestamps");
    if (with_test_flags) {
      sub.add_option("--tau", opts.tau, "practical-irrelevance tolerance");
      sub.add_option("--hypothesis", opts.hypothesis,
                     "null for treatment arm B vs control A: leq, geq, eq");
    }
  };

  CLI::App& mon = *app.add_subcommand(
      "monitor", "stream events and emit decision records");
  add_common(mon, true);
  mon.add_option("--resume", resume, "resume from a snapshot file");
  mon.add_option("--snapshot-out", snapshot_out, "write a snapshot at end");

  CLI::App& bands = *app.add_subcommand(
      "bands", "export confidence bands as CSV from events or a snapshot");
  add_common(bands, false);

  CLI::App& simulate = *app.add_subcommand(
      "simulate", "continuous-monitoring comparison of KS, Mann-Whitney and "
                  "the sequential test");
  simulate.add_option("--seed", sim.seed, "random seed")->required();
  simulate.add_option("--runs", sim.runs, "simulations per scenario");
  simulate.add_option("--cap", sim.cap, "observations per arm before censoring");
  simulate.add_option("--alpha", sim.alpha, "test level");
  simulate.add_option("--gamma-shape", sim.gamma_shape, "gamma shape parameter");
  simulate.add_option("--rate-a", sim.rate_a, "gamma rate for arm A");
  simulate.add_option("--rate-b", sim.rate_b,
                      "gamma rate for arm B in the alternative scenario");
  simulate.add_option("--out", sim_out, "per-run stopping times CSV");

  CLI::App& plan = *app.add_subcommand(
      "plan", "sample size needed for a difference band of a given radius");
  plan.add_option("--alpha", opts.alpha, "confidence level");
  plan.add_option("--r", plan_r, "target band radius");
  plan.add_option("--tau", plan_tau, "tolerance; radius defaults to tau/2");
  plan.add_option("--epsilon", opts.epsilon, "sequential radius for max-n");
  plan.add_option("--n-star", opts.n_star, "darling-robbins n*");

  CLI11_PARSE(app, argc, argv);

  try {
    if (mon.parsed()) return run_monitor(opts, resume, snapshot_out);
    if (bands.parsed()) return run_bands(opts);
    if (simulate.parsed()) return run_simulate(sim, sim_out);
    if (plan.parsed()) return run_plan(opts.alpha, plan_r, plan_tau,
                                       opts.epsilon, opts.n_star);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
