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
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmld {

using complex = std::complex<double>;

/// Thrown when a request exceeds the hard instance-size caps (number of binary
/// variables for dense enumeration / statevector qubits / constellation size).
/// The CLI maps this to a dedicated exit code so batch scripts can tell
/// "too big" apart from "malformed".
class size_cap_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hard cap on the number of binary variables any dense enumeration accepts
/// (objective expansion, statevector simulation, exhaustive ground state).
inline constexpr int kMaxDenseVars = 24;

// ---------------------------------------------------------------------------
// Bit conventions
//
// A basis / constellation index i in [0, 2^n) encodes the bit string
// b_0 b_1 ... b_{n-1} with b_0 as the MOST significant bit:
//
//     b_k = (i >> (n - 1 - k)) & 1.
//
// Sets of variables are held as bitmasks ("varmask") where mask bit k
// (1u << k) stands for variable z_k.  Converting an index to the set of
// variables that equal 1 in it is therefore an n-bit reversal.
// ---------------------------------------------------------------------------

/// Value of bit b_k (MSB-first convention) of an n-bit index.
inline int bit_of_index(std::uint32_t index, int k, int n_bits) {
  return static_cast<int>((index >> (n_bits - 1 - k)) & 1u);
}

/// Set of variables equal to 1 in the n-bit index i.
inline std::uint32_t index_to_varmask(std::uint32_t index, int n_bits) {
  std::uint32_t mask = 0;
  for (int k = 0; k < n_bits; ++k) {
    if (bit_of_index(index, k, n_bits)) mask |= (1u << k);
  }
  return mask;
}

/// Inverse of index_to_varmask.
inline std::uint32_t varmask_to_index(std::uint32_t mask, int n_bits) {
  std::uint32_t index = 0;
  for (int k = 0; k < n_bits; ++k) {
    if (mask & (1u << k)) index |= (1u << (n_bits - 1 - k));
  }
  return index;
}

/// Bit vector b_0..b_{n-1} of an index (MSB-first convention).
inline std::vector<std::uint8_t> bits_of_index(std::uint32_t index, int n_bits) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n_bits));
  for (int k = 0; k < n_bits; ++k) {
    bits[static_cast<std::size_t>(k)] =
        static_cast<std::uint8_t>(bit_of_index(index, k, n_bits));
  }
  return bits;
}

/// Index whose bit string is the given vector (MSB-first convention).
inline std::uint32_t index_of_bits(const std::vector<std::uint8_t>& bits) {
  std::uint32_t index = 0;
  for (std::uint8_t b : bits) index = (index << 1) | (b ? 1u : 0u);
  return index;
}

/// "0"/"1" rendering of a bit vector, b_0 first.
inline std::string bits_to_string(const std::vector<std::uint8_t>& bits) {
  std::string s(bits.size(), '0');
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k]) s[k] = '1';
  }
  return s;
}

}  // namespace qmld
