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
// Deterministic sampling layer.  std::mt19937_64 output is fully specified
// by the standard but the std:: distributions are not, so the variate
// transforms live here: seeded runs then reproduce bit-for-bit across
// standard libraries.  Generator name: mt19937_64 + polar normal +
// Marsaglia-Tsang gamma.

#ifndef SEQCANARY_RANDOM_HPP_
#define SEQCANARY_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <random>

#include "seqcanary/errors.hpp"

namespace seqcanary {

inline constexpr const char* kGeneratorName =
    "mt19937_64+polar-normal+marsaglia-tsang-gamma";

// SplitMix64 step, used to derive independent stream seeds from a base seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t s = base;
  std::uint64_t first = splitmix64(s);
  s = first ^ (stream * 0x9e3779b97f4a7c15ULL + 0x165667b19e3779f9ULL);
  return splitmix64(s);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via the Marsaglia polar method.  The spare variate is
  // discarded to keep the draw sequence a pure function of the generator
  // position.
  double normal() {
    for (;;) {
      const double u = 2.0 * uniform() - 1.0;
      const double v = 2.0 * uniform() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) {
        return u * std::sqrt(-2.0 * std::log(s) / s);
      }
    }
  }

  double exponential(double rate) {
    if (!(rate > 0.0)) throw Error(Errc::kInvalidArgument, "rate must be positive");
    double u = uniform();
    if (u == 0.0) u = 0x1.0p-53;
    return -std::log1p(-u) / rate;
  }

  // Marsaglia-Tsang for shape >= 1, boosted for shape < 1.
  double gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0)) {
      throw Error(Errc::kInvalidArgument, "gamma parameters must be positive");
    }
    if (shape < 1.0) {
      double u = uniform();
      if (u == 0.0) u = 0x1.0p-53;
      return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
      const double x = normal();
      const double t = 1.0 + c * x;
      if (t <= 0.0) continue;
      const double v = t * t * t;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
        return d * v / rate;
      }
    }
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  std::mt19937_64& raw() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace seqcanary

#endif  // SEQCANARY_RANDOM_HPP_
