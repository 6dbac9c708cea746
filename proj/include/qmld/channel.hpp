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
#include <limits>
#include <string>
#include <vector>

#include "qmld/common.hpp"
#include "qmld/constellation.hpp"
#include "qmld/rng.hpp"

namespace qmld {

/// Dense row-major complex matrix, just big enough for channel work.
struct CMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<complex> a;

  CMatrix() = default;
  CMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

  complex& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  const complex& operator()(int r, int c) const {
    return a[static_cast<std::size_t>(r) * cols + c];
  }
};

enum class ChannelKind {
  awgn,      ///< fixed channel: h_{l,k} = 1 if l == k else 0 (no fading, no mixing)
  rayleigh,  ///< i.i.d. entries h_{l,k} ~ CN(0, 1)
};

inline std::string to_string(ChannelKind k) {
  return k == ChannelKind::awgn ? "awgn" : "rayleigh";
}

inline ChannelKind channel_kind_from_string(const std::string& s) {
  if (s == "awgn") return ChannelKind::awgn;
  if (s == "rayleigh") return ChannelKind::rayleigh;
  throw std::invalid_argument("unknown channel kind: " + s);
}

/// One detection problem: everything drawn for a single transmission.
///
/// SNR convention: the additive noise per receive antenna is CN(0,1) (variance
/// 1/2 per real component) and component k's transmit points are scaled by
/// scale[k] = sqrt(10^(snr_db/10) / E_k), E_k the mean squared magnitude of
/// its alphabet, so every transmit stream carries the requested average SNR
/// against the unit-variance noise.  snr_db = +inf means noiseless with
/// scale 1 (handy for exactness tests).
struct ChannelInstance {
  ChannelKind kind = ChannelKind::awgn;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
  int n_rx = 0;

  CMatrix h;                           ///< n_rx x n_tx channel matrix
  std::vector<std::uint8_t> tx_bits;   ///< transmitted label bits b_0..b_{N-1}
  std::vector<std::uint32_t> tx_indices;  ///< per-component label values
  std::vector<double> scale;           ///< per-component amplitude scale
  std::vector<complex> tx_symbols;     ///< scale[k] * points_k[tx_indices[k]]
  std::vector<complex> noise;          ///< length n_rx
  std::vector<complex> received;       ///< y = H s + noise
};

/// Transmit point i of component k under the instance's power scaling.
inline complex scaled_point(const JointConstellation& j, const ChannelInstance& inst,
                            int k, std::uint32_t i) {
  return inst.scale[static_cast<std::size_t>(k)] *
         j.components[static_cast<std::size_t>(k)].points[i];
}

/// Draws one transmission through the chosen channel.  Draw order is frozen
/// (and covered by tests) so a seed identifies an instance forever:
/// 1. Rayleigh only: H entries row-major, each CN(0,1).
/// 2. Transmitted bits b_0..b_{N-1}, one uniform bit each.
/// 3. Finite SNR only: noise entries, each CN(0,1).
inline ChannelInstance generate_instance(const JointConstellation& joint, int n_rx,
                                         ChannelKind kind, double snr_db,
                                         std::uint64_t seed) {
  if (n_rx < 1) throw std::invalid_argument("generate_instance: n_rx must be positive");
  const int n_tx = joint.n_components();
  const bool noiseless = std::isinf(snr_db) && snr_db > 0.0;

  ChannelInstance inst;
  inst.kind = kind;
  inst.snr_db = snr_db;
  inst.seed = seed;
  inst.n_rx = n_rx;

  Rng rng(seed);

  inst.h = CMatrix(n_rx, n_tx);
  for (int l = 0; l < n_rx; ++l) {
    for (int k = 0; k < n_tx; ++k) {
      inst.h(l, k) = (kind == ChannelKind::rayleigh) ? rng.cnormal(1.0)
                                                     : complex(l == k ? 1.0 : 0.0);
    }
  }

  inst.tx_bits.resize(static_cast<std::size_t>(joint.total_bits));
  for (auto& b : inst.tx_bits) b = static_cast<std::uint8_t>(rng.bit());
  inst.tx_indices = component_indices(joint, index_of_bits(inst.tx_bits));

  const double snr_linear = noiseless ? 1.0 : std::pow(10.0, snr_db / 10.0);
  inst.scale.resize(static_cast<std::size_t>(n_tx));
  inst.tx_symbols.resize(static_cast<std::size_t>(n_tx));
  for (int k = 0; k < n_tx; ++k) {
    const Constellation& c = joint.components[static_cast<std::size_t>(k)];
    inst.scale[static_cast<std::size_t>(k)] =
        noiseless ? 1.0 : std::sqrt(snr_linear / average_energy(c));
    inst.tx_symbols[static_cast<std::size_t>(k)] =
        scaled_point(joint, inst, k, inst.tx_indices[static_cast<std::size_t>(k)]);
  }

  inst.noise.assign(static_cast<std::size_t>(n_rx), complex(0.0, 0.0));
  if (!noiseless) {
    for (auto& n : inst.noise) n = rng.cnormal(1.0);
  }

  inst.received.resize(static_cast<std::size_t>(n_rx));
  for (int l = 0; l < n_rx; ++l) {
    complex acc = inst.noise[static_cast<std::size_t>(l)];
    for (int k = 0; k < n_tx; ++k) {
      acc += inst.h(l, k) * inst.tx_symbols[static_cast<std::size_t>(k)];
    }
    inst.received[static_cast<std::size_t>(l)] = acc;
  }
  return inst;
}

}  // namespace qmld
