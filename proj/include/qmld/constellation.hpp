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
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qmld/common.hpp"

namespace qmld {

/// How the bit labels of a constellation relate to its geometry.  The
/// structural zero-coefficient results only apply to the two Gray families.
enum class Labeling {
  rect_gray,  ///< rectangular grid, per-axis reflected-Gray labelled
  psk_gray,   ///< points on a circle, ring Gray labelled
  arbitrary,  ///< anything else (no structure assumed)
};

/// One modulation alphabet: 2^n_bits complex points indexed by their label
/// value.  Label bits follow the MSB-first convention of common.hpp: the label
/// of point i is b_0 b_1 ... b_{n-1} with b_0 the most significant bit of i.
///
/// For rectangular constellations, `inphase_bits` / `quadrature_bits` record
/// which label positions address the level along each of the two axes.  Only
/// the grouping matters to the structure results; which of the two orthogonal
/// axes a group happens to drive does not.
struct Constellation {
  std::string name;
  int n_bits = 0;
  Labeling labeling = Labeling::arbitrary;
  std::vector<complex> points;
  std::vector<int> inphase_bits;
  std::vector<int> quadrature_bits;

  int size() const { return static_cast<int>(points.size()); }
};

/// Reflected binary Gray code of a rank.
inline std::uint32_t gray_encode(std::uint32_t rank) { return rank ^ (rank >> 1); }

/// Rank of a reflected binary Gray codeword (inverse of gray_encode).
inline std::uint32_t gray_decode(std::uint32_t code) {
  std::uint32_t rank = code;
  for (std::uint32_t shift = code >> 1; shift != 0; shift >>= 1) rank ^= shift;
  return rank;
}

/// Mean squared magnitude of the constellation points.
inline double average_energy(const Constellation& c) {
  double e = 0.0;
  for (const complex& p : c.points) e += std::norm(p);
  return e / static_cast<double>(c.points.size());
}

/// Copy of `c` rescaled to unit average energy.
inline Constellation normalized(const Constellation& c) {
  Constellation out = c;
  const double s = 1.0 / std::sqrt(average_energy(c));
  for (complex& p : out.points) p *= s;
  return out;
}

/// Structural sanity checks; throws std::invalid_argument on violation.
inline void validate(const Constellation& c) {
  if (c.n_bits < 1 || c.n_bits > 30) {
    throw std::invalid_argument("constellation: n_bits out of range");
  }
  if (c.points.size() != (std::size_t{1} << c.n_bits)) {
    throw std::invalid_argument("constellation: needs exactly 2^n_bits points");
  }
  for (std::size_t a = 0; a < c.points.size(); ++a) {
    for (std::size_t b = a + 1; b < c.points.size(); ++b) {
      if (std::abs(c.points[a] - c.points[b]) < 1e-12) {
        throw std::invalid_argument("constellation: points must be distinct");
      }
    }
  }
  if (c.labeling == Labeling::rect_gray) {
    std::vector<int> all = c.inphase_bits;
    all.insert(all.end(), c.quadrature_bits.begin(), c.quadrature_bits.end());
    std::sort(all.begin(), all.end());
    bool partition = static_cast<int>(all.size()) == c.n_bits;
    for (int k = 0; partition && k < c.n_bits; ++k) partition = (all[static_cast<std::size_t>(k)] == k);
    if (!partition || c.inphase_bits.empty() || c.quadrature_bits.empty()) {
      throw std::invalid_argument(
          "constellation: rect_gray requires inphase/quadrature bits to "
          "partition {0..n_bits-1} with both groups non-empty");
    }
  }
}

/// Gray-labelled QPSK with the conventional textbook table
///   0 -> +1+j,  1 -> -1+j,  2 -> +1-j,  3 -> -1-j,
/// i.e. bit 0 selects the imaginary level and bit 1 the real level.
inline Constellation build_qpsk() {
  Constellation c;
  c.name = "QPSK";
  c.n_bits = 2;
  c.labeling = Labeling::rect_gray;
  c.points = {{1.0, 1.0}, {-1.0, 1.0}, {1.0, -1.0}, {-1.0, -1.0}};
  c.inphase_bits = {0};
  c.quadrature_bits = {1};
  return c;
}

/// Rectangular Gray-labelled QAM on a 2^nI x 2^nQ grid of odd-integer
/// coordinates.  The first nI label bits select the real (in-phase) level and
/// the remaining nQ bits the imaginary (quadrature) level; each group is read
/// as a reflected-Gray codeword whose rank gives the level from lowest to
/// highest, so geometric neighbours along either axis differ in exactly one
/// label bit.  With `normalize` the grid is rescaled to unit average energy.
inline Constellation build_rect_qam(int n_inphase_bits, int n_quadrature_bits,
                                    bool normalize = false) {
  if (n_inphase_bits < 1 || n_quadrature_bits < 1) {
    throw std::invalid_argument("build_rect_qam: bit counts must be positive");
  }
  if (n_inphase_bits < n_quadrature_bits) {
    throw std::invalid_argument(
        "build_rect_qam: in-phase group must not be smaller than quadrature");
  }
  if (n_inphase_bits + n_quadrature_bits > 16) {
    throw std::invalid_argument("build_rect_qam: grid too large");
  }
  Constellation c;
  c.n_bits = n_inphase_bits + n_quadrature_bits;
  c.labeling = Labeling::rect_gray;
  c.name = std::to_string(std::size_t{1} << c.n_bits) + "QAM";
  const std::uint32_t li = 1u << n_inphase_bits;
  const std::uint32_t lq = 1u << n_quadrature_bits;
  c.points.resize(std::size_t{1} << c.n_bits);
  for (std::uint32_t i = 0; i < c.points.size(); ++i) {
    const std::uint32_t gi = i >> n_quadrature_bits;
    const std::uint32_t gq = i & (lq - 1);
    const double re = -static_cast<double>(li - 1) + 2.0 * gray_decode(gi);
    const double im = -static_cast<double>(lq - 1) + 2.0 * gray_decode(gq);
    c.points[i] = {re, im};
  }
  for (int k = 0; k < n_inphase_bits; ++k) c.inphase_bits.push_back(k);
  for (int k = n_inphase_bits; k < c.n_bits; ++k) c.quadrature_bits.push_back(k);
  return normalize ? normalized(c) : c;
}

/// Gray-labelled M-PSK on the unit circle: the point with label i sits at
/// angle 2*pi*gray_decode(i)/M, so angular neighbours (including the wrap)
/// differ in exactly one label bit.
inline Constellation build_mpsk(int n_bits) {
  if (n_bits < 1 || n_bits > 16) {
    throw std::invalid_argument("build_mpsk: n_bits out of range");
  }
  Constellation c;
  c.n_bits = n_bits;
  c.labeling = Labeling::psk_gray;
  const std::uint32_t m = 1u << n_bits;
  c.name = std::to_string(m) + "PSK";
  c.points.resize(m);
  for (std::uint32_t i = 0; i < m; ++i) {
    const double t = 2.0 * std::numbers::pi * gray_decode(i) / m;
    c.points[i] = {std::cos(t), std::sin(t)};
  }
  return c;
}

/// Factory from a lowercase-insensitive name such as "qpsk", "16qam", "8psk".
inline Constellation constellation_by_name(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (name == "qpsk" || name == "4qam") return build_qpsk();
  if (name == "8qam") return build_rect_qam(2, 1);
  if (name == "16qam") return build_rect_qam(2, 2);
  if (name == "32qam") return build_rect_qam(3, 2);
  if (name == "64qam") return build_rect_qam(3, 3);
  if (name == "128qam") return build_rect_qam(4, 3);
  if (name == "256qam") return build_rect_qam(4, 4);
  if (name == "bpsk") return build_mpsk(1);
  if (name == "8psk") return build_mpsk(3);
  if (name == "16psk") return build_mpsk(4);
  throw std::invalid_argument("unknown constellation name: " + name);
}

/// Cartesian product of per-transmit-antenna alphabets.  The joint label is
/// the concatenation of the component labels, component 0 first; with the
/// MSB-first index convention that makes component 0 the top bits of the
/// joint index.
struct JointConstellation {
  std::vector<Constellation> components;
  int total_bits = 0;
  std::vector<int> bit_offsets;  ///< component k owns bits [offset_k, offset_k + n_k)

  int n_components() const { return static_cast<int>(components.size()); }
  std::uint64_t total_points() const { return std::uint64_t{1} << total_bits; }
};

inline JointConstellation joint_constellation(std::vector<Constellation> comps) {
  if (comps.empty()) {
    throw std::invalid_argument("joint_constellation: needs at least one component");
  }
  JointConstellation j;
  for (const Constellation& c : comps) {
    validate(c);
    j.bit_offsets.push_back(j.total_bits);
    j.total_bits += c.n_bits;
  }
  if (j.total_bits > 32) {
    throw size_cap_error("joint_constellation: more than 32 label bits");
  }
  j.components = std::move(comps);
  return j;
}

/// Per-component label values of a joint index (inverse of joint_index).
inline std::vector<std::uint32_t> component_indices(const JointConstellation& j,
                                                    std::uint32_t joint) {
  std::vector<std::uint32_t> out(static_cast<std::size_t>(j.n_components()));
  for (int k = 0; k < j.n_components(); ++k) {
    const int nk = j.components[static_cast<std::size_t>(k)].n_bits;
    const int shift = j.total_bits - j.bit_offsets[static_cast<std::size_t>(k)] - nk;
    out[static_cast<std::size_t>(k)] = (joint >> shift) & ((1u << nk) - 1u);
  }
  return out;
}

/// Joint index whose label is the concatenation of the component labels.
inline std::uint32_t joint_index(const JointConstellation& j,
                                 const std::vector<std::uint32_t>& comp) {
  if (comp.size() != j.components.size()) {
    throw std::invalid_argument("joint_index: component count mismatch");
  }
  std::uint32_t out = 0;
  for (int k = 0; k < j.n_components(); ++k) {
    const int nk = j.components[static_cast<std::size_t>(k)].n_bits;
    out = (out << nk) | (comp[static_cast<std::size_t>(k)] & ((1u << nk) - 1u));
  }
  return out;
}

}  // namespace qmld
