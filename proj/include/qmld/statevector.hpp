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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qmld/common.hpp"
#include "qmld/ising.hpp"
#include "qmld/polynomial.hpp"
#include "qmld/rng.hpp"

namespace qmld {

/// Dense n-qubit state.  Amplitude index follows the MSB-first convention of
/// common.hpp: qubit 0's bit is the most significant bit of the index.
struct StateVector {
  int n_qubits = 0;
  std::vector<complex> amps;

  std::size_t size() const { return amps.size(); }
};

inline StateVector uniform_state(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxDenseVars) {
    throw size_cap_error("uniform_state: qubit count out of range");
  }
  StateVector s;
  s.n_qubits = n_qubits;
  const std::size_t size = std::size_t{1} << n_qubits;
  s.amps.assign(size, complex(1.0 / std::sqrt(static_cast<double>(size)), 0.0));
  return s;
}

inline double norm_squared(const StateVector& s) {
  double n = 0.0;
  for (const complex& a : s.amps) n += std::norm(a);
  return n;
}

/// Phase separation layer exp(-i gamma H) for a diagonal H given as its
/// eigenvalue table over the basis indices.
inline void apply_phase_layer(StateVector& s, const std::vector<double>& eigenvalues,
                              double gamma) {
  if (eigenvalues.size() != s.size()) {
    throw std::invalid_argument("apply_phase_layer: table size mismatch");
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    s.amps[i] *= std::polar(1.0, -gamma * eigenvalues[i]);
  }
}

/// Phase separation layer for the objective polynomial itself (the diagonal
/// Hamiltonian whose eigenvalue on |b> is f(b)).
inline void apply_phase_layer(StateVector& s, const MultilinearPolynomial& f,
                              double gamma) {
  if (f.n_vars != s.n_qubits) {
    throw std::invalid_argument("apply_phase_layer: variable/qubit mismatch");
  }
  apply_phase_layer(s, value_table(f), gamma);
}

/// Transverse mixer layer: Rx(2 beta) = exp(-i beta X) on every qubit.
inline void apply_mixer_layer(StateVector& s, double beta) {
  const double c = std::cos(beta);
  const complex ms(0.0, -std::sin(beta));
  for (int q = 0; q < s.n_qubits; ++q) {
    const std::size_t stride = std::size_t{1} << (s.n_qubits - 1 - q);
    for (std::size_t base = 0; base < s.size(); base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) {
        const complex a0 = s.amps[i];
        const complex a1 = s.amps[i + stride];
        s.amps[i] = c * a0 + ms * a1;
        s.amps[i + stride] = ms * a0 + c * a1;
      }
    }
  }
}

/// Depth-p circuit: |psi> = prod_{k=1..p} [mixer(beta_k) phase(gamma_k)] |+...+>,
/// phase first within each layer.
inline StateVector run_qaoa(const MultilinearPolynomial& f,
                            const std::vector<double>& gammas,
                            const std::vector<double>& betas) {
  if (gammas.size() != betas.size()) {
    throw std::invalid_argument("run_qaoa: schedule lengths differ");
  }
  StateVector s = uniform_state(f.n_vars);
  const std::vector<double> table = value_table(f);
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    apply_phase_layer(s, table, gammas[k]);
    apply_mixer_layer(s, betas[k]);
  }
  return s;
}

/// <psi| H |psi> for a diagonal H given by its eigenvalue table.
inline double expectation(const StateVector& s, const std::vector<double>& eigenvalues) {
  if (eigenvalues.size() != s.size()) {
    throw std::invalid_argument("expectation: table size mismatch");
  }
  double e = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) e += std::norm(s.amps[i]) * eigenvalues[i];
  return e;
}

inline double expectation(const StateVector& s, const MultilinearPolynomial& f) {
  return expectation(s, value_table(f));
}

// ---------------------------------------------------------------------------
// Elementary gates.  Only what the gate-level cross-check needs.
// ---------------------------------------------------------------------------

/// Rz(theta) = diag(e^{-i theta/2}, e^{+i theta/2}) on one qubit.
inline void apply_rz(StateVector& s, int qubit, double theta) {
  const complex lo = std::polar(1.0, -theta / 2.0);
  const complex hi = std::polar(1.0, theta / 2.0);
  const std::size_t bit = std::size_t{1} << (s.n_qubits - 1 - qubit);
  for (std::size_t i = 0; i < s.size(); ++i) s.amps[i] *= (i & bit) ? hi : lo;
}

/// Rx(theta) = exp(-i theta X / 2) on one qubit.
inline void apply_rx(StateVector& s, int qubit, double theta) {
  const double c = std::cos(theta / 2.0);
  const complex ms(0.0, -std::sin(theta / 2.0));
  const std::size_t stride = std::size_t{1} << (s.n_qubits - 1 - qubit);
  for (std::size_t base = 0; base < s.size(); base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const complex a0 = s.amps[i];
      const complex a1 = s.amps[i + stride];
      s.amps[i] = c * a0 + ms * a1;
      s.amps[i + stride] = ms * a0 + c * a1;
    }
  }
}

inline void apply_cnot(StateVector& s, int control, int target) {
  const std::size_t cbit = std::size_t{1} << (s.n_qubits - 1 - control);
  const std::size_t tbit = std::size_t{1} << (s.n_qubits - 1 - target);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(s.amps[i], s.amps[i | tbit]);
  }
}

/// Gate decomposition of exp(-i gamma H) for an at-most-quadratic Hamiltonian:
/// Rz(2 gamma g) for each field term and CNOT - Rz(2 gamma g) - CNOT for each
/// two-qubit coupling.  The additive constant is not representable by gates,
/// so the result differs from the diagonal path by the global phase
/// exp(-i gamma constant); compare states up to global phase.
inline void gate_level_phase_layer(StateVector& s, const IsingHamiltonian& h,
                                   double gamma) {
  if (h.n_qubits != s.n_qubits) {
    throw std::invalid_argument("gate_level_phase_layer: qubit count mismatch");
  }
  for (const auto& [mask, g] : h.couplings) {
    const int weight = std::popcount(mask);
    if (weight == 1) {
      apply_rz(s, std::countr_zero(mask), 2.0 * gamma * g);
    } else if (weight == 2) {
      const int low = std::countr_zero(mask);
      const int high = 31 - std::countl_zero(mask);
      apply_cnot(s, low, high);
      apply_rz(s, high, 2.0 * gamma * g);
      apply_cnot(s, low, high);
    } else {
      throw std::invalid_argument(
          "gate_level_phase_layer: couplings of weight > 2 need quadratization");
    }
  }
}

/// Measurement histogram: `shots` independent draws from |amp|^2, keyed by the
/// bit string b_0..b_{n-1} of the outcome.  Deterministic in the seed.
inline std::map<std::string, std::int64_t> sample(const StateVector& s,
                                                  std::int64_t shots,
                                                  std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("sample: shots must be positive");
  std::vector<double> cdf(s.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    acc += std::norm(s.amps[i]);
    cdf[i] = acc;
  }
  Rng rng(seed);
  std::map<std::string, std::int64_t> hist;
  for (std::int64_t t = 0; t < shots; ++t) {
    const double u = rng.uniform01() * acc;
    const std::size_t idx = static_cast<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    const std::uint32_t i = static_cast<std::uint32_t>(std::min(idx, s.size() - 1));
    ++hist[bits_to_string(bits_of_index(i, s.n_qubits))];
  }
  return hist;
}

/// Tensor assembly: joint state over n_qubits whose factors are the given
/// part states living on the listed (disjoint, ascending) global qubits; any
/// qubit covered by no part is taken as |+>.  Part-local amplitude indices use
/// the part's own MSB-first convention over its qubit list.
inline StateVector assemble_from_parts(int n_qubits,
                                       const std::vector<std::vector<int>>& part_qubits,
                                       const std::vector<StateVector>& part_states) {
  if (part_qubits.size() != part_states.size()) {
    throw std::invalid_argument("assemble_from_parts: part count mismatch");
  }
  StateVector out = uniform_state(n_qubits);  // free qubits stay |+>
  for (std::size_t i = 0; i < out.size(); ++i) {
    complex a = out.amps[i];
    for (std::size_t part = 0; part < part_qubits.size(); ++part) {
      const std::vector<int>& qs = part_qubits[part];
      std::uint32_t local = 0;
      for (int q : qs) {
        local = (local << 1) |
                static_cast<std::uint32_t>(bit_of_index(static_cast<std::uint32_t>(i),
                                                        q, n_qubits));
      }
      a *= part_states[part].amps[local] * std::sqrt(static_cast<double>(std::size_t{1} << qs.size()));
    }
    out.amps[i] = a;
  }
  return out;
}

/// Closed form of the depth-1 expectation landscape for a two-variable
/// objective a0 z0 + a1 z1 + a01 z0 z1 (constant removed), in the spin frame
/// where an = dbar_n / 2:
///
///     F1(gamma, beta) = sum_n an sin(2 beta) sin(2 an gamma) cos(2 a01 gamma).
///
/// For a Gray-labelled QPSK instance a01 = 0 and this equals
/// expectation(run_qaoa(f, {gamma}, {beta})) - to_ising(f).constant exactly;
/// the arguments to pass are (-g0, -g1, 2 g01) read off to_ising(f).
inline double f1_qpsk_analytic(double a0, double a1, double a01, double gamma,
                               double beta) {
  const double s2b = std::sin(2.0 * beta);
  const double cross = std::cos(2.0 * a01 * gamma);
  return a0 * s2b * std::sin(2.0 * a0 * gamma) * cross +
         a1 * s2b * std::sin(2.0 * a1 * gamma) * cross;
}

}  // namespace qmld
