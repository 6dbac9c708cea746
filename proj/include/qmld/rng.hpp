// Copyright 2026 The qmld authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

#include "qmld/common.hpp"

namespace qmld {

/// One step of the splitmix64 generator, used for seed scrambling so that
/// nearby user seeds do not produce correlated engine states.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic sub-seed for stream `stream` of a master seed.  Every channel
/// realization, optimizer restart and sampling pass gets its own stream, so
/// results never depend on the order in which those pieces run.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  (void)splitmix64_next(s);
  return splitmix64_next(s);
}

/// Seeded random source.  All draws go through explicitly written transforms
/// (never std::*_distribution, whose output is implementation-defined), so a
/// given seed regenerates the identical stream on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(scramble(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Single uniform bit.
  int bit() { return static_cast<int>(next_u64() & 1u); }

  /// Pair of independent N(0,1) draws (Box-Muller transform).
  std::pair<double, double> normal_pair() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();  // log(0) guard
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(t), r * std::sin(t)};
  }

  /// Circularly-symmetric complex normal CN(0, variance): real and imaginary
  /// parts are independent N(0, variance/2).
  complex cnormal(double variance = 1.0) {
    const auto [a, b] = normal_pair();
    const double s = std::sqrt(variance / 2.0);
    return {s * a, s * b};
  }

 private:
  static std::uint64_t scramble(std::uint64_t seed) {
    std::uint64_t s = seed;
    return splitmix64_next(s);
  }

  std::mt19937_64 engine_;
};

}  // namespace qmld
