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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>

#include "qmld/channel.hpp"
#include "qmld/constellation.hpp"
#include "qmld/rng.hpp"

using namespace qmld;

TEST_CASE("gray code round-trips and steps one bit at a time", "[constellation]") {
  for (std::uint32_t r = 0; r < 1024; ++r) {
    CHECK(gray_decode(gray_encode(r)) == r);
    if (r > 0) {
      CHECK(std::popcount(gray_encode(r) ^ gray_encode(r - 1)) == 1);
    }
  }
}

TEST_CASE("QPSK uses the textbook table", "[constellation]") {
  const Constellation c = build_qpsk();
  REQUIRE(c.n_bits == 2);
  REQUIRE(c.points.size() == 4);
  CHECK(c.points[0] == complex(1.0, 1.0));
  CHECK(c.points[1] == complex(-1.0, 1.0));
  CHECK(c.points[2] == complex(1.0, -1.0));
  CHECK(c.points[3] == complex(-1.0, -1.0));
  CHECK(c.labeling == Labeling::rect_gray);
  CHECK(c.inphase_bits == std::vector<int>{0});
  CHECK(c.quadrature_bits == std::vector<int>{1});
  CHECK(average_energy(c) == 2.0);
  CHECK_NOTHROW(validate(c));
}

namespace {

// Geometric neighbours on the rectangular grid (distance exactly 2 along one
// axis) must carry labels that differ in exactly one bit.
void check_rect_gray_adjacency(const Constellation& c) {
  const int m = c.size();
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      const complex diff = c.points[static_cast<std::size_t>(a)] -
                           c.points[static_cast<std::size_t>(b)];
      const bool neighbours = std::abs(std::abs(diff) - 2.0) < 1e-12 &&
                              (diff.real() == 0.0 || diff.imag() == 0.0);
      if (neighbours) {
        CHECK(std::popcount(static_cast<std::uint32_t>(a) ^
                            static_cast<std::uint32_t>(b)) == 1);
      }
    }
  }
}

}  // namespace

TEST_CASE("rectangular QAM grids are Gray labelled", "[constellation]") {
  check_rect_gray_adjacency(build_qpsk());
  check_rect_gray_adjacency(build_rect_qam(1, 1));
  check_rect_gray_adjacency(build_rect_qam(2, 1));
  check_rect_gray_adjacency(build_rect_qam(2, 2));
  check_rect_gray_adjacency(build_rect_qam(3, 2));
  check_rect_gray_adjacency(build_rect_qam(3, 3));
}

TEST_CASE("rectangular QAM covers the odd-integer grid once", "[constellation]") {
  const Constellation c = build_rect_qam(2, 1);  // 8 points: 4 x 2
  CHECK(c.name == "8QAM");
  std::set<std::pair<double, double>> coords;
  for (const complex& p : c.points) coords.insert({p.real(), p.imag()});
  CHECK(coords.size() == 8);
  for (const auto& [re, im] : coords) {
    CHECK((re == -3.0 || re == -1.0 || re == 1.0 || re == 3.0));
    CHECK((im == -1.0 || im == 1.0));
  }
  // in-phase group is the top two label bits, read as a Gray codeword
  for (std::uint32_t i = 0; i < 8; ++i) {
    const std::uint32_t gi = i >> 1;
    CHECK(c.points[i].real() == -3.0 + 2.0 * gray_decode(gi));
  }
  CHECK_NOTHROW(validate(c));
  CHECK_NOTHROW(validate(build_rect_qam(3, 3)));
}

TEST_CASE("MPSK rings are Gray labelled around the circle", "[constellation]") {
  for (int n_bits : {2, 3, 4}) {
    const Constellation c = build_mpsk(n_bits);
    const int m = c.size();
    // the label at ring position r is gray_encode(r); walk the ring
    for (int r = 0; r < m; ++r) {
      const std::uint32_t a = gray_encode(static_cast<std::uint32_t>(r));
      const std::uint32_t b = gray_encode(static_cast<std::uint32_t>((r + 1) % m));
      CHECK(std::popcount(a ^ b) == 1);
      const double t = 2.0 * std::numbers::pi * r / m;
      CHECK_THAT(c.points[a].real(), Catch::Matchers::WithinAbs(std::cos(t), 1e-12));
      CHECK_THAT(c.points[a].imag(), Catch::Matchers::WithinAbs(std::sin(t), 1e-12));
    }
    CHECK_THAT(average_energy(c), Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("builders reject nonsense", "[constellation]") {
  CHECK_THROWS_AS(build_rect_qam(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_rect_qam(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_rect_qam(1, 2), std::invalid_argument);  // quadrature bigger
  CHECK_THROWS_AS(constellation_by_name("7qam"), std::invalid_argument);
  CHECK(constellation_by_name("16QAM").size() == 16);  // case-insensitive
}

TEST_CASE("normalization yields unit average energy", "[constellation]") {
  const Constellation c = build_rect_qam(2, 2, true);
  CHECK_THAT(average_energy(c), Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK_THAT(average_energy(normalized(build_rect_qam(3, 3))),
             Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("joint labels concatenate component labels", "[constellation]") {
  const JointConstellation j =
      joint_constellation({build_qpsk(), build_rect_qam(2, 1)});
  REQUIRE(j.total_bits == 5);
  // oracle: enumerate every pair and concatenate the label bit strings
  for (std::uint32_t i0 = 0; i0 < 4; ++i0) {
    for (std::uint32_t i1 = 0; i1 < 8; ++i1) {
      const std::string cat =
          bits_to_string(bits_of_index(i0, 2)) + bits_to_string(bits_of_index(i1, 3));
      const std::uint32_t joint = joint_index(j, {i0, i1});
      CHECK(bits_to_string(bits_of_index(joint, 5)) == cat);
      CHECK(component_indices(j, joint) == std::vector<std::uint32_t>{i0, i1});
    }
  }
  CHECK(component_indices(j, 5) == std::vector<std::uint32_t>{0, 5});
}

TEST_CASE("instance generation is reproducible", "[channel]") {
  const JointConstellation j = joint_constellation({build_qpsk()});
  const ChannelInstance a = generate_instance(j, 1, ChannelKind::rayleigh, 12.0, 42);
  const ChannelInstance b = generate_instance(j, 1, ChannelKind::rayleigh, 12.0, 42);
  CHECK(a.h.a == b.h.a);
  CHECK(a.tx_bits == b.tx_bits);
  CHECK(a.noise == b.noise);
  CHECK(a.received == b.received);
  const ChannelInstance c = generate_instance(j, 1, ChannelKind::rayleigh, 12.0, 43);
  CHECK(a.received != c.received);
}

TEST_CASE("AWGN means an identity channel", "[channel]") {
  const JointConstellation j = joint_constellation({build_qpsk(), build_qpsk()});
  const ChannelInstance inst = generate_instance(j, 2, ChannelKind::awgn, 10.0, 7);
  CHECK(inst.h(0, 0) == complex(1.0, 0.0));
  CHECK(inst.h(1, 1) == complex(1.0, 0.0));
  CHECK(inst.h(0, 1) == complex(0.0, 0.0));
  CHECK(inst.h(1, 0) == complex(0.0, 0.0));
}

TEST_CASE("SNR scaling matches its definition", "[channel]") {
  const JointConstellation j =
      joint_constellation({build_qpsk(), build_rect_qam(2, 2)});
  const double snr_db = 9.0;
  const ChannelInstance inst = generate_instance(j, 2, ChannelKind::rayleigh, snr_db, 3);
  const double snr_linear = std::pow(10.0, snr_db / 10.0);
  for (int k = 0; k < 2; ++k) {
    const double e = average_energy(j.components[static_cast<std::size_t>(k)]);
    CHECK_THAT(inst.scale[static_cast<std::size_t>(k)] * inst.scale[static_cast<std::size_t>(k)] * e,
               Catch::Matchers::WithinRel(snr_linear, 1e-12));
  }
}

TEST_CASE("noiseless instances are exact and unscaled", "[channel]") {
  const JointConstellation j = joint_constellation({build_rect_qam(2, 1)});
  const double inf = std::numeric_limits<double>::infinity();
  const ChannelInstance inst = generate_instance(j, 1, ChannelKind::rayleigh, inf, 11);
  CHECK(inst.scale[0] == 1.0);
  CHECK(inst.noise[0] == complex(0.0, 0.0));
  CHECK(inst.received[0] == inst.h(0, 0) * inst.tx_symbols[0]);
}

TEST_CASE("transmitted bits look uniform", "[channel]") {
  const JointConstellation j = joint_constellation({build_rect_qam(2, 2)});
  double ones = 0.0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    const ChannelInstance inst =
        generate_instance(j, 1, ChannelKind::awgn, 10.0, 1000 + static_cast<std::uint64_t>(t));
    for (std::uint8_t b : inst.tx_bits) ones += b;
  }
  const double frac = ones / (4.0 * trials);
  CHECK(frac > 0.45);
  CHECK(frac < 0.55);
}

TEST_CASE("the rng regenerates identical streams and sane moments", "[rng]") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng r(7);
  double mean = 0.0, var = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto [x, y] = r.normal_pair();
    mean += x + y;
    var += x * x + y * y;
  }
  mean /= 2 * n;
  var /= 2 * n;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.03);
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  CHECK(mix_seed(5, 3) == mix_seed(5, 3));
}
