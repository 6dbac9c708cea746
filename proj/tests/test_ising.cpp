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
#include <limits>
#include <vector>

#include "qmld/channel.hpp"
#include "qmld/constellation.hpp"
#include "qmld/ising.hpp"
#include "qmld/objective.hpp"
#include "qmld/polynomial.hpp"

using namespace qmld;

namespace {

double coupling(const IsingHamiltonian& h, std::uint32_t mask) {
  const auto it = h.couplings.find(mask);
  return it == h.couplings.end() ? 0.0 : it->second;
}

MultilinearPolynomial expand_instance(const JointConstellation& joint,
                                      const ChannelInstance& inst) {
  return fast_expand(clause_weights(joint, inst), joint);
}

/// Local eigenvalue of one subsystem under a global spin assignment.
double part_eigenvalue(const Subsystem& part, std::uint32_t global_ones) {
  std::uint32_t local_ones = 0;
  for (std::size_t j = 0; j < part.qubits.size(); ++j) {
    if (global_ones & (1u << part.qubits[j])) local_ones |= 1u << j;
  }
  const int n = part.local.n_qubits;
  return eigenvalue_at_index(part.local, varmask_to_index(local_ones, n));
}

}  // namespace

TEST_CASE("spin form of elementary polynomials", "[ising]") {
  SECTION("affine") {
    MultilinearPolynomial f;
    f.n_vars = 1;
    f.constant = 3.0;
    f.terms[0b1] = 2.0;
    const IsingHamiltonian h = to_ising(f);
    CHECK_THAT(h.constant, Catch::Matchers::WithinAbs(4.0, 1e-15));
    CHECK_THAT(coupling(h, 0b1), Catch::Matchers::WithinAbs(-1.0, 1e-15));
    CHECK(h.couplings.size() == 1);
  }
  SECTION("pure product z0 z1") {
    MultilinearPolynomial f;
    f.n_vars = 2;
    f.terms[0b11] = 1.0;
    const IsingHamiltonian h = to_ising(f);
    CHECK_THAT(h.constant, Catch::Matchers::WithinAbs(0.25, 1e-15));
    CHECK_THAT(coupling(h, 0b01), Catch::Matchers::WithinAbs(-0.25, 1e-15));
    CHECK_THAT(coupling(h, 0b10), Catch::Matchers::WithinAbs(-0.25, 1e-15));
    CHECK_THAT(coupling(h, 0b11), Catch::Matchers::WithinAbs(0.25, 1e-15));
  }
  SECTION("cancelling contributions are erased") {
    MultilinearPolynomial f;
    f.n_vars = 2;
    f.terms[0b01] = 1.0;   // -(1/2) sigma_0
    f.terms[0b11] = -2.0;  // +(1/2) sigma_0 + (1/2) sigma_1 - (1/2) sigma_0 sigma_1
    const IsingHamiltonian h = to_ising(f);
    CHECK(h.couplings.count(0b01) == 0);  // -1/2 + 1/2
    CHECK_THAT(coupling(h, 0b10), Catch::Matchers::WithinAbs(0.5, 1e-15));
    CHECK_THAT(coupling(h, 0b11), Catch::Matchers::WithinAbs(-0.5, 1e-15));
    CHECK_THAT(h.constant, Catch::Matchers::WithinAbs(0.0, 1e-15));
  }
}

TEST_CASE("QPSK worked example in spin variables", "[ising]") {
  const JointConstellation joint = joint_constellation({build_qpsk()});
  ChannelInstance inst;
  inst.kind = ChannelKind::awgn;
  inst.snr_db = std::numeric_limits<double>::infinity();
  inst.n_rx = 1;
  inst.h = CMatrix(1, 1);
  inst.h(0, 0) = complex(1.0, 0.0);
  inst.scale = {1.0};
  inst.received = {complex(0.5, 0.3)};
  const ClauseWeights w = clause_weights(joint, inst);
  const IsingHamiltonian h = to_ising(fast_expand(w, joint));
  // bar d_0 = 1.2, bar d_1 = 2.0, bar d_01 = 0, constant 0.74
  CHECK_THAT(coupling(h, 0b01), Catch::Matchers::WithinAbs(-0.6, 1e-12));
  CHECK_THAT(coupling(h, 0b10), Catch::Matchers::WithinAbs(-1.0, 1e-12));
  CHECK(coupling(h, 0b11) == 0.0);
  CHECK_THAT(h.constant, Catch::Matchers::WithinAbs(2.34, 1e-12));
  // eigenvalues reproduce the residuals label by label
  for (std::uint32_t i = 0; i < 4; ++i) {
    CHECK_THAT(eigenvalue_at_index(h, i),
               Catch::Matchers::WithinRel(w.at(0, i), 1e-12));
  }
}

TEST_CASE("spin eigenvalues equal polynomial values everywhere", "[ising]") {
  const std::vector<std::vector<Constellation>> roster = {
      {build_rect_qam(2, 1)},
      {build_rect_qam(2, 2)},
      {build_mpsk(3)},
      {build_qpsk(), build_qpsk()},
  };
  std::uint64_t seed = 880;
  for (const auto& comps : roster) {
    const JointConstellation joint = joint_constellation(comps);
    const ChannelInstance inst = generate_instance(
        joint, joint.n_components(), ChannelKind::rayleigh, 11.0, seed++);
    const MultilinearPolynomial f = expand_instance(joint, inst);
    const IsingHamiltonian h = to_ising(f);
    REQUIRE(h.n_qubits == f.n_vars);
    const std::vector<double> table = eigenvalue_table(h);
    const double scale = *std::max_element(table.begin(), table.end());
    for (std::uint32_t i = 0; i < table.size(); ++i) {
      CAPTURE(joint.components[0].name, i);
      CHECK_THAT(table[i], Catch::Matchers::WithinAbs(evaluate_at_index(f, i),
                                                      1e-11 * scale));
      CHECK(table[i] == eigenvalue_at_index(h, i));
    }
  }
}

TEST_CASE("16QAM objective splits into its two bit groups", "[ising]") {
  const JointConstellation joint = joint_constellation({build_rect_qam(2, 2)});
  const ChannelInstance inst =
      generate_instance(joint, 1, ChannelKind::rayleigh, 13.0, 321);
  const IsingHamiltonian h = to_ising(expand_instance(joint, inst));
  const SubsystemSplit split = split_independent(h);
  REQUIRE(split.parts.size() == 2);
  CHECK(split.free_qubits.empty());
  CHECK(split.parts[0].qubits == std::vector<int>{0, 1});
  CHECK(split.parts[1].qubits == std::vector<int>{2, 3});
  CHECK(split.parts[0].local.n_qubits == 2);
  CHECK(split.parts[1].local.n_qubits == 2);
  CHECK(split.parts[1].local.constant == 0.0);
  // local coupling of part 1 on {0,1} is the global {2,3} coupling
  CHECK(coupling(split.parts[1].local, 0b11) == coupling(h, 0b1100));
  // recombination: parts + constant reproduce every eigenvalue
  for (std::uint32_t i = 0; i < 16; ++i) {
    const std::uint32_t ones = index_to_varmask(i, 4);
    double v = split.constant;
    for (const auto& part : split.parts) v += part_eigenvalue(part, ones);
    CHECK_THAT(v, Catch::Matchers::WithinRel(eigenvalue_at_index(h, i), 1e-12));
  }
}

TEST_CASE("a mixing channel welds both antennas into one part", "[ising]") {
  const JointConstellation joint = joint_constellation({build_qpsk(), build_qpsk()});
  const ChannelInstance inst =
      generate_instance(joint, 2, ChannelKind::rayleigh, 15.0, 99);
  const SubsystemSplit split = split_independent(to_ising(expand_instance(joint, inst)));
  REQUIRE(split.parts.size() == 1);
  CHECK(split.parts[0].qubits == std::vector<int>{0, 1, 2, 3});
  CHECK(split.free_qubits.empty());
}

TEST_CASE("qubits outside every coupling are reported free", "[ising]") {
  IsingHamiltonian h;
  h.n_qubits = 3;
  h.constant = 1.5;
  h.couplings[0b101] = 2.0;  // touches qubits 0 and 2 only
  const SubsystemSplit split = split_independent(h);
  REQUIRE(split.parts.size() == 1);
  CHECK(split.parts[0].qubits == std::vector<int>{0, 2});
  CHECK(split.free_qubits == std::vector<int>{1});
  CHECK(coupling(split.parts[0].local, 0b11) == 2.0);
}

TEST_CASE("exhaustive ground state matches a direct scan", "[ising]") {
  const JointConstellation joint = joint_constellation({build_rect_qam(2, 1), build_qpsk()});
  std::uint64_t seed = 1717;
  for (int t = 0; t < 4; ++t) {
    const ChannelInstance inst =
        generate_instance(joint, 2, ChannelKind::rayleigh, 9.0, seed++);
    const MultilinearPolynomial f = expand_instance(joint, inst);
    const IsingHamiltonian h = to_ising(f);
    const auto [bits, value] = ground_state(h);
    std::uint32_t best = 0;
    double best_value = evaluate_at_index(f, 0);
    for (std::uint32_t i = 1; i < (1u << f.n_vars); ++i) {
      const double v = evaluate_at_index(f, i);
      if (v < best_value) {
        best_value = v;
        best = i;
      }
    }
    CHECK(index_of_bits(bits) == best);
    CHECK_THAT(value, Catch::Matchers::WithinRel(best_value, 1e-10));
  }
}

TEST_CASE("ground state ties resolve to the smallest bit string", "[ising]") {
  IsingHamiltonian flat;
  flat.n_qubits = 3;
  flat.constant = 7.0;
  const auto [bits, value] = ground_state(flat);
  CHECK(bits == std::vector<std::uint8_t>{0, 0, 0});
  CHECK(value == 7.0);
}

TEST_CASE("quadratization leaves quadratic inputs alone", "[ising]") {
  const JointConstellation joint = joint_constellation({build_rect_qam(2, 2)});
  const ChannelInstance inst =
      generate_instance(joint, 1, ChannelKind::rayleigh, 10.0, 22);
  const MultilinearPolynomial f = expand_instance(joint, inst);
  REQUIRE(degree(f) <= 2);
  double abs_sum = 0.0;
  for (const auto& [mask, c] : f.terms) {
    (void)mask;
    abs_sum += std::abs(c);
  }
  const MultilinearPolynomial g = quadratize_by_substitution(f, 2.0 * abs_sum + 1.0);
  CHECK(g.n_vars == f.n_vars);
  CHECK(g.terms == f.terms);
  CHECK(g.constant == f.constant);
}

TEST_CASE("quadratizing a cubic preserves values after minimizing the auxiliary",
          "[ising]") {
  MultilinearPolynomial f;
  f.n_vars = 3;
  f.constant = 0.5;
  f.terms[0b111] = 2.0;
  f.terms[0b001] = -1.0;
  f.terms[0b110] = 0.75;
  const double penalty = 2.0 * (2.0 + 1.0 + 0.75) + 1.0;
  const MultilinearPolynomial g = quadratize_by_substitution(f, penalty);
  CHECK(degree(g) <= 2);
  REQUIRE(g.n_vars == 4);
  // min over the auxiliary recovers f pointwise
  for (std::uint32_t i = 0; i < 8; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t wv = 0; wv < 2; ++wv) {
      // extended index: original bits first (MSB-first), auxiliary appended
      best = std::min(best, evaluate_at_index(g, (i << 1) | wv));
    }
    CHECK_THAT(best, Catch::Matchers::WithinAbs(evaluate_at_index(f, i), 1e-12));
  }
}

TEST_CASE("quadratization handles the 64QAM cubic objective", "[ising]") {
  const JointConstellation joint = joint_constellation({build_rect_qam(3, 3)});
  const ChannelInstance inst =
      generate_instance(joint, 1, ChannelKind::rayleigh, 16.0, 5150);
  const MultilinearPolynomial f = expand_instance(joint, inst);
  REQUIRE(degree(f) == 3);
  double abs_sum = 0.0;
  for (const auto& [mask, c] : f.terms) {
    (void)mask;
    abs_sum += std::abs(c);
  }
  const MultilinearPolynomial g = quadratize_by_substitution(f, 2.0 * abs_sum + 1.0);
  CHECK(degree(g) <= 2);
  CHECK(g.n_vars == 8);  // one auxiliary per cubic bit group
  const std::vector<double> tf = value_table(f);
  const std::vector<double> tg = value_table(g);
  const double min_f = *std::min_element(tf.begin(), tf.end());
  const double min_g = *std::min_element(tg.begin(), tg.end());
  CHECK_THAT(min_g, Catch::Matchers::WithinRel(min_f, 1e-10));
}

TEST_CASE("quadratization rejects a timid penalty", "[ising]") {
  MultilinearPolynomial f;
  f.n_vars = 3;
  f.terms[0b111] = 2.0;
  CHECK_THROWS_AS(quadratize_by_substitution(f, 3.9), std::invalid_argument);
}
