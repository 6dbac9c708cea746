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
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "qmld/common.hpp"
#include "qmld/polynomial.hpp"

namespace qmld {

/// Diagonal spin Hamiltonian
///
///     H = constant + sum_S couplings[S] * prod_{k in S} sigma_k
///
/// where sigma_k is the Pauli-Z eigenvalue (+1 / -1) of qubit k and S ranges
/// over non-empty varmasks.  The additive constant is kept: eigenvalues equal
/// the original objective values, so approximation ratios stay meaningful.
struct IsingHamiltonian {
  int n_qubits = 0;
  double constant = 0.0;
  std::map<std::uint32_t, double> couplings;
};

/// Exact substitution z_k = (1 - sigma_k) / 2.  Every binary monomial of size
/// m spreads over the 2^m spin subsets with coefficient c (-1)^|T| / 2^m.
inline IsingHamiltonian to_ising(const MultilinearPolynomial& f) {
  IsingHamiltonian h;
  h.n_qubits = f.n_vars;
  h.constant = f.constant;
  for (const auto& [mask, coeff] : f.terms) {
    const double base = coeff / static_cast<double>(1u << std::popcount(mask));
    // every subset T of mask, sign (-1)^|T|
    std::uint32_t sub = mask;
    while (true) {
      const double v = (std::popcount(sub) % 2 == 0) ? base : -base;
      if (sub == 0) {
        h.constant += v;
      } else {
        h.couplings[sub] += v;
      }
      if (sub == 0) break;
      sub = (sub - 1) & mask;
    }
  }
  std::erase_if(h.couplings, [](const auto& kv) { return kv.second == 0.0; });
  return h;
}

/// Eigenvalue of H on the basis index i (MSB-first bit convention): each spin
/// subset contributes its coupling times (-1)^(number of 1-bits inside it).
inline double eigenvalue_at_index(const IsingHamiltonian& h, std::uint32_t index) {
  const std::uint32_t ones = index_to_varmask(index, h.n_qubits);
  double value = h.constant;
  for (const auto& [mask, g] : h.couplings) {
    value += (std::popcount(mask & ones) % 2 == 0) ? g : -g;
  }
  return value;
}

/// Dense table of eigenvalues over all 2^n basis indices.
inline std::vector<double> eigenvalue_table(const IsingHamiltonian& h) {
  if (h.n_qubits > kMaxDenseVars) {
    throw size_cap_error("eigenvalue_table: too many qubits");
  }
  const std::size_t size = std::size_t{1} << h.n_qubits;
  std::vector<double> table(size);
  for (std::uint32_t i = 0; i < size; ++i) table[i] = eigenvalue_at_index(h, i);
  return table;
}

/// One connected component of the coupling hypergraph.
struct Subsystem {
  std::vector<int> qubits;  ///< global qubit ids, ascending
  IsingHamiltonian local;   ///< over qubits.size() local qubits, constant 0
};

/// H split into independent subsystems: no coupling crosses parts, so the
/// QAOA state stays a tensor product across parts and each part can be
/// simulated on its own small statevector.  Qubits that appear in no coupling
/// are listed separately; they contribute nothing to the energy.
struct SubsystemSplit {
  int n_qubits = 0;
  double constant = 0.0;
  std::vector<Subsystem> parts;   ///< ordered by smallest member qubit
  std::vector<int> free_qubits;   ///< untouched by any coupling
};

inline SubsystemSplit split_independent(const IsingHamiltonian& h) {
  // union-find over qubits, merging along every coupling subset
  std::vector<int> parent(static_cast<std::size_t>(h.n_qubits));
  for (int q = 0; q < h.n_qubits; ++q) parent[static_cast<std::size_t>(q)] = q;
  auto find = [&](int q) {
    while (parent[static_cast<std::size_t>(q)] != q) {
      parent[static_cast<std::size_t>(q)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(q)])];
      q = parent[static_cast<std::size_t>(q)];
    }
    return q;
  };
  std::vector<bool> used(static_cast<std::size_t>(h.n_qubits), false);
  for (const auto& [mask, g] : h.couplings) {
    (void)g;
    int first = -1;
    for (int q = 0; q < h.n_qubits; ++q) {
      if (!(mask & (1u << q))) continue;
      used[static_cast<std::size_t>(q)] = true;
      if (first < 0) {
        first = q;
      } else {
        parent[static_cast<std::size_t>(find(q))] = find(first);
      }
    }
  }

  SubsystemSplit split;
  split.n_qubits = h.n_qubits;
  split.constant = h.constant;
  std::map<int, std::vector<int>> groups;  // root -> members (both ascending)
  for (int q = 0; q < h.n_qubits; ++q) {
    if (used[static_cast<std::size_t>(q)]) {
      groups[find(q)].push_back(q);
    } else {
      split.free_qubits.push_back(q);
    }
  }
  std::vector<std::vector<int>> ordered;
  for (auto& [root, members] : groups) ordered.push_back(std::move(members));
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  for (auto& members : ordered) {
    Subsystem part;
    part.qubits = members;
    part.local.n_qubits = static_cast<int>(members.size());
    std::map<int, int> to_local;
    for (std::size_t j = 0; j < members.size(); ++j) {
      to_local[members[j]] = static_cast<int>(j);
    }
    for (const auto& [mask, g] : h.couplings) {
      if (find(std::countr_zero(mask)) != find(members.front())) continue;
      std::uint32_t local_mask = 0;
      for (int q = 0; q < h.n_qubits; ++q) {
        if (mask & (1u << q)) local_mask |= 1u << to_local[q];
      }
      part.local.couplings.emplace(local_mask, g);
    }
    split.parts.push_back(std::move(part));
  }
  return split;
}

/// Exhaustive ground state: the minimizing basis index and its eigenvalue,
/// ties resolved to the lexicographically smallest bit string.
inline std::pair<std::vector<std::uint8_t>, double> ground_state(const IsingHamiltonian& h) {
  if (h.n_qubits > kMaxDenseVars) {
    throw size_cap_error("ground_state: too many qubits for exhaustive search");
  }
  if (h.n_qubits < 1) throw std::invalid_argument("ground_state: empty Hamiltonian");
  const std::size_t size = std::size_t{1} << h.n_qubits;
  std::uint32_t best = 0;
  double best_value = eigenvalue_at_index(h, 0);
  for (std::uint32_t i = 1; i < size; ++i) {
    const double v = eigenvalue_at_index(h, i);
    if (v < best_value) {  // strict: ascending scan keeps the lex-smallest tie
      best_value = v;
      best = i;
    }
  }
  return {bits_of_index(best, h.n_qubits), best_value};
}

/// Rosenberg-style reduction to degree <= 2 by pair substitution.  Repeatedly
/// picks the variable pair (a, b) occurring in the most monomials of size >= 3
/// (ties: smallest pair lexicographically), replaces it there by a fresh
/// auxiliary w, and adds the penalty
///
///     penalty * (z_a z_b - 2 z_a w - 2 z_b w + 3 w)
///
/// which is 0 when w = z_a z_b and >= penalty otherwise.  Requires
/// penalty > 2 * sum of |coefficients|, which makes every optimum of the
/// output sit at consistent auxiliary values, so the minimum (including the
/// retained constant) is preserved exactly.
inline MultilinearPolynomial quadratize_by_substitution(MultilinearPolynomial f,
                                                        double penalty) {
  double abs_sum = 0.0;
  for (const auto& [mask, coeff] : f.terms) {
    (void)mask;
    abs_sum += std::abs(coeff);
  }
  if (!(penalty > 2.0 * abs_sum)) {
    throw std::invalid_argument(
        "quadratize_by_substitution: penalty must exceed twice the total "
        "coefficient magnitude");
  }
  while (degree(f) > 2) {
    if (f.n_vars >= 32) {
      throw size_cap_error("quadratize_by_substitution: variable budget exhausted");
    }
    // most frequent pair inside big monomials; map order gives lex tie-break
    std::map<std::pair<int, int>, int> count;
    for (const auto& [mask, coeff] : f.terms) {
      (void)coeff;
      if (std::popcount(mask) < 3) continue;
      for (int a = 0; a < f.n_vars; ++a) {
        if (!(mask & (1u << a))) continue;
        for (int b = a + 1; b < f.n_vars; ++b) {
          if (mask & (1u << b)) ++count[{a, b}];
        }
      }
    }
    std::pair<int, int> pick{-1, -1};
    int best = 0;
    for (const auto& [pair, c] : count) {
      if (c > best) {
        best = c;
        pick = pair;
      }
    }
    const std::uint32_t pair_mask = (1u << pick.first) | (1u << pick.second);
    const int w = f.n_vars++;
    const std::uint32_t w_bit = 1u << w;

    MultilinearPolynomial next;
    next.n_vars = f.n_vars;
    next.constant = f.constant;
    for (const auto& [mask, coeff] : f.terms) {
      const bool substitute = std::popcount(mask) >= 3 && (mask & pair_mask) == pair_mask;
      const std::uint32_t target = substitute ? ((mask & ~pair_mask) | w_bit) : mask;
      next.terms[target] += coeff;
    }
    next.terms[pair_mask] += penalty;
    next.terms[(1u << pick.first) | w_bit] += -2.0 * penalty;
    next.terms[(1u << pick.second) | w_bit] += -2.0 * penalty;
    next.terms[w_bit] += 3.0 * penalty;
    std::erase_if(next.terms, [](const auto& kv) { return kv.second == 0.0; });
    f = std::move(next);
  }
  return f;
}

}  // namespace qmld
