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

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "qmld/common.hpp"

namespace qmld {

/// Real multilinear polynomial over binary variables z_0..z_{n_vars-1}:
///
///     f(z) = constant + sum_S  terms[S] * prod_{k in S} z_k
///
/// with every subset S a non-empty varmask (bit k of the key is z_k).  An
/// ordered map keeps iteration deterministic, which keeps every downstream
/// artifact (JSON, CSV, gate sequences) byte-stable.
struct MultilinearPolynomial {
  int n_vars = 0;
  double constant = 0.0;
  std::map<std::uint32_t, double> terms;
};

/// Largest monomial size, 0 for a constant polynomial.
inline int degree(const MultilinearPolynomial& f) {
  int deg = 0;
  for (const auto& [mask, coeff] : f.terms) {
    (void)coeff;
    deg = std::max(deg, std::popcount(mask));
  }
  return deg;
}

/// Value of f at an assignment given as a bit vector z_0..z_{n_vars-1}.
inline double evaluate(const MultilinearPolynomial& f,
                       const std::vector<std::uint8_t>& bits) {
  if (static_cast<int>(bits.size()) != f.n_vars) {
    throw std::invalid_argument("evaluate: assignment length != n_vars");
  }
  std::uint32_t assigned = 0;
  for (int k = 0; k < f.n_vars; ++k) {
    if (bits[static_cast<std::size_t>(k)]) assigned |= (1u << k);
  }
  double value = f.constant;
  for (const auto& [mask, coeff] : f.terms) {
    if ((mask & assigned) == mask) value += coeff;
  }
  return value;
}

/// Value of f at the basis index i (MSB-first bit convention).
inline double evaluate_at_index(const MultilinearPolynomial& f, std::uint32_t index) {
  const std::uint32_t assigned = index_to_varmask(index, f.n_vars);
  double value = f.constant;
  for (const auto& [mask, coeff] : f.terms) {
    if ((mask & assigned) == mask) value += coeff;
  }
  return value;
}

/// Dense table of f over all 2^n_vars basis indices.  Builds the table in
/// varmask order (enumerating the supersets of each monomial) and permutes
/// once at the end, so the cost is sum_S 2^(n - |S|) rather than |terms| 2^n.
inline std::vector<double> value_table(const MultilinearPolynomial& f) {
  if (f.n_vars > kMaxDenseVars) {
    throw size_cap_error("value_table: too many variables for dense enumeration");
  }
  const std::size_t size = std::size_t{1} << f.n_vars;
  const std::uint32_t full = static_cast<std::uint32_t>(size - 1);
  std::vector<double> by_mask(size, f.constant);
  for (const auto& [mask, coeff] : f.terms) {
    // enumerate all supersets of `mask`: mask | (submask of complement)
    const std::uint32_t free = full & ~mask;
    std::uint32_t sub = free;
    while (true) {
      by_mask[mask | sub] += coeff;
      if (sub == 0) break;
      sub = (sub - 1) & free;
    }
  }
  std::vector<double> by_index(size);
  for (std::uint32_t i = 0; i < size; ++i) {
    by_index[i] = by_mask[index_to_varmask(i, f.n_vars)];
  }
  return by_index;
}

/// Copy of f with every non-constant coefficient of magnitude < tol_abs
/// removed.  tol_abs <= 0 keeps everything.
inline MultilinearPolynomial pruned(const MultilinearPolynomial& f, double tol_abs) {
  MultilinearPolynomial out;
  out.n_vars = f.n_vars;
  out.constant = f.constant;
  for (const auto& [mask, coeff] : f.terms) {
    if (std::abs(coeff) >= tol_abs) out.terms.emplace(mask, coeff);
  }
  return out;
}

}  // namespace qmld
