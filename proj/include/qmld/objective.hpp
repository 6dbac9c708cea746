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
#include <string>
#include <vector>

#include "qmld/channel.hpp"
#include "qmld/common.hpp"
#include "qmld/constellation.hpp"
#include "qmld/polynomial.hpp"

namespace qmld {

// ---------------------------------------------------------------------------
// Maximum-likelihood detection as a weighted clause system.
//
// For each receive antenna l and joint label i, the clause "the transmitted
// label was i" carries weight d_{l,i} = |y_l - sum_k h_{l,k} s_k(i)|^2, the
// squared residual if label i had been sent.  Summing the one-hot clause
// indicators weighted by d over all labels gives a multilinear polynomial in
// the label bits whose minimizer over {0,1}^N is exactly the ML decision.
// ---------------------------------------------------------------------------

/// The d_{l,i} weight matrix (n_rx rows, one weight per joint label).
struct ClauseWeights {
  int n_rx = 0;
  std::uint32_t n_labels = 0;
  std::vector<double> d;  ///< row-major, d[l * n_labels + i]

  double at(int l, std::uint32_t i) const {
    return d[static_cast<std::size_t>(l) * n_labels + i];
  }
  double& at(int l, std::uint32_t i) {
    return d[static_cast<std::size_t>(l) * n_labels + i];
  }

  /// Largest clause weight; reference scale for relative tolerances.
  double max_weight() const {
    double m = 0.0;
    for (double w : d) m = std::max(m, w);
    return m;
  }
};

/// Squared residuals of every joint label at every receive antenna.
inline ClauseWeights clause_weights(const JointConstellation& joint,
                                    const ChannelInstance& inst) {
  const int n_tx = joint.n_components();
  if (inst.h.cols != n_tx) {
    throw std::invalid_argument("clause_weights: channel/constellation antenna mismatch");
  }
  if (joint.total_bits > kMaxDenseVars) {
    throw size_cap_error("clause_weights: alphabet too large to enumerate");
  }
  // Per-component transmit points under the instance's power scaling.
  std::vector<std::vector<complex>> pts(static_cast<std::size_t>(n_tx));
  for (int k = 0; k < n_tx; ++k) {
    const Constellation& c = joint.components[static_cast<std::size_t>(k)];
    pts[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(c.size()));
    for (std::uint32_t i = 0; i < static_cast<std::uint32_t>(c.size()); ++i) {
      pts[static_cast<std::size_t>(k)][i] = scaled_point(joint, inst, k, i);
    }
  }
  ClauseWeights w;
  w.n_rx = inst.n_rx;
  w.n_labels = static_cast<std::uint32_t>(joint.total_points());
  w.d.resize(static_cast<std::size_t>(w.n_rx) * w.n_labels);
  for (std::uint32_t i = 0; i < w.n_labels; ++i) {
    const std::vector<std::uint32_t> comp = component_indices(joint, i);
    for (int l = 0; l < w.n_rx; ++l) {
      complex acc = inst.received[static_cast<std::size_t>(l)];
      for (int k = 0; k < n_tx; ++k) {
        acc -= inst.h(l, k) * pts[static_cast<std::size_t>(k)][comp[static_cast<std::size_t>(k)]];
      }
      w.at(l, i) = std::norm(acc);
    }
  }
  return w;
}

/// Reference expansion: multiplies out every clause literal-by-literal with no
/// combinatorial shortcuts.  A clause for label i is d * prod_n B(z_n) with
/// B(z_n) = z_n when bit n of the label is 1 and (1 - z_n) otherwise.  Cost is
/// O(n_rx * 2^(2N) * N); intended as the oracle the fast path is checked
/// against, not for production use.
inline MultilinearPolynomial brute_expand(const ClauseWeights& w,
                                          const JointConstellation& joint) {
  const int n = joint.total_bits;
  if (n > kMaxDenseVars) {
    throw size_cap_error("brute_expand: too many label bits");
  }
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> acc(size, 0.0), cur(size, 0.0), next(size, 0.0);
  for (int l = 0; l < w.n_rx; ++l) {
    for (std::uint32_t i = 0; i < w.n_labels; ++i) {
      std::fill(cur.begin(), cur.end(), 0.0);
      cur[0] = w.at(l, i);
      for (int bit = 0; bit < n; ++bit) {
        std::fill(next.begin(), next.end(), 0.0);
        const std::uint32_t var = 1u << bit;
        for (std::uint32_t mask = 0; mask < size; ++mask) {
          const double c = cur[mask];
          if (c == 0.0) continue;
          if (bit_of_index(i, bit, n)) {
            next[mask | var] += c;
          } else {
            next[mask] += c;
            next[mask | var] -= c;
          }
        }
        cur.swap(next);
      }
      for (std::uint32_t mask = 0; mask < size; ++mask) acc[mask] += cur[mask];
    }
  }
  MultilinearPolynomial f;
  f.n_vars = n;
  f.constant = acc[0];
  for (std::uint32_t mask = 1; mask < size; ++mask) {
    if (acc[mask] != 0.0) f.terms.emplace(mask, acc[mask]);
  }
  return f;
}

/// Production expansion.  The coefficient of monomial S collects, over the
/// labels supported on S (all bits outside S equal 0), the clause weights with
/// sign (-1)^(number of zero bits of the label inside S); that is exactly a
/// signed subset-sum (Moebius) transform over the label lattice, done in place
/// in N 2^N steps per receive antenna.  Coefficients below
/// rel_tol * max weight are pruned (rel_tol <= 0 keeps everything); the
/// constant term is always kept so minima stay comparable across instances.
inline MultilinearPolynomial fast_expand(const ClauseWeights& w,
                                         const JointConstellation& joint,
                                         double rel_tol = 1e-9) {
  const int n = joint.total_bits;
  if (n > kMaxDenseVars) {
    throw size_cap_error("fast_expand: too many label bits");
  }
  const std::size_t size = std::size_t{1} << n;
  std::vector<double> acc(size, 0.0), t(size);
  for (int l = 0; l < w.n_rx; ++l) {
    for (std::uint32_t i = 0; i < w.n_labels; ++i) {
      t[index_to_varmask(i, n)] = w.at(l, i);
    }
    for (int bit = 0; bit < n; ++bit) {
      const std::uint32_t var = 1u << bit;
      for (std::uint32_t mask = 0; mask < size; ++mask) {
        if (mask & var) t[mask] -= t[mask ^ var];
      }
    }
    for (std::uint32_t mask = 0; mask < size; ++mask) acc[mask] += t[mask];
  }
  MultilinearPolynomial f;
  f.n_vars = n;
  f.constant = acc[0];
  const double tol = rel_tol > 0.0 ? rel_tol * w.max_weight() : 0.0;
  for (std::uint32_t mask = 1; mask < size; ++mask) {
    if (acc[mask] != 0.0 && std::abs(acc[mask]) >= tol) f.terms.emplace(mask, acc[mask]);
  }
  return f;
}

// ---------------------------------------------------------------------------
// Structural zeros.
//
// For Gray labellings, whole families of monomial coefficients vanish
// identically, independent of the received signal: the signed weight sum
// pairs up over axis-aligned rectangles of constellation points, and for any
// rectangle the two diagonals have equal total squared distance to any point
// of the plane.  The predictor enumerates the families; the expansion tests
// confirm them numerically.
// ---------------------------------------------------------------------------

/// Why a monomial is predicted to vanish.
enum class ZeroRule {
  iq_mix,        ///< single antenna, monomial mixes in-phase and quadrature bits
  iq_mix_mimo,   ///< same mixing argument applied per transmit antenna
  psk_full_set,  ///< Gray PSK: monomial covers all of one antenna's bits
  rect_cover,    ///< generic rectangle cover (existential; never searched for)
  rect_cover_mimo,  ///< generic cover across antennas (existential; never searched for)
};

inline std::string to_string(ZeroRule r) {
  switch (r) {
    case ZeroRule::iq_mix: return "iq-mix";
    case ZeroRule::iq_mix_mimo: return "iq-mix-mimo";
    case ZeroRule::psk_full_set: return "psk-full-set";
    case ZeroRule::rect_cover: return "rect-cover";
    case ZeroRule::rect_cover_mimo: return "rect-cover-mimo";
  }
  return "?";
}

/// Monomials that vanish for every channel instance, with the rule that
/// predicts each, plus the resulting bound on the objective degree.
struct ZeroPrediction {
  int n_vars = 0;
  std::map<std::uint32_t, ZeroRule> predicted;
  int degree_bound = 0;
};

/// Enumerates the structurally-zero monomials of a Gray-labelled joint
/// constellation.  Rules applied per monomial S, scanning antennas in order:
///  - rectangular Gray: if S touches both the in-phase and the quadrature
///    group of some antenna, its coefficient vanishes;
///  - Gray PSK (M >= 4): if S covers all of some antenna's bits, it vanishes.
/// The two generic rectangle-cover rules are existential statements that are
/// not searched for, so they never appear in the output map.
/// Rejects non-Gray components with std::invalid_argument.
inline ZeroPrediction predict_zero_monomials(const JointConstellation& joint) {
  const int n = joint.total_bits;
  if (n > kMaxDenseVars) {
    throw size_cap_error("predict_zero_monomials: too many label bits");
  }
  const int n_tx = joint.n_components();
  std::vector<std::uint32_t> full(static_cast<std::size_t>(n_tx), 0);
  std::vector<std::uint32_t> inphase(static_cast<std::size_t>(n_tx), 0);
  std::vector<std::uint32_t> quadrature(static_cast<std::size_t>(n_tx), 0);
  for (int k = 0; k < n_tx; ++k) {
    const Constellation& c = joint.components[static_cast<std::size_t>(k)];
    if (c.labeling == Labeling::arbitrary) {
      throw std::invalid_argument(
          "predict_zero_monomials: component '" + c.name + "' is not Gray labelled");
    }
    const int off = joint.bit_offsets[static_cast<std::size_t>(k)];
    for (int b = 0; b < c.n_bits; ++b) full[static_cast<std::size_t>(k)] |= 1u << (off + b);
    for (int b : c.inphase_bits) inphase[static_cast<std::size_t>(k)] |= 1u << (off + b);
    for (int b : c.quadrature_bits) quadrature[static_cast<std::size_t>(k)] |= 1u << (off + b);
  }

  ZeroPrediction out;
  out.n_vars = n;
  const std::uint32_t size = 1u << n;
  for (std::uint32_t mask = 1; mask < size; ++mask) {
    bool zero = false;
    for (int k = 0; k < n_tx && !zero; ++k) {
      const std::size_t kk = static_cast<std::size_t>(k);
      const Constellation& c = joint.components[kk];
      const std::uint32_t slice = mask & full[kk];
      if (c.labeling == Labeling::rect_gray) {
        if ((slice & inphase[kk]) != 0 && (slice & quadrature[kk]) != 0) {
          out.predicted.emplace(mask, n_tx == 1 ? ZeroRule::iq_mix : ZeroRule::iq_mix_mimo);
          zero = true;
        }
      } else if (c.labeling == Labeling::psk_gray) {
        if (c.n_bits >= 2 && slice == full[kk]) {
          out.predicted.emplace(mask, ZeroRule::psk_full_set);
          zero = true;
        }
      }
    }
    if (!zero) out.degree_bound = std::max(out.degree_bound, std::popcount(mask));
  }
  return out;
}

}  // namespace qmld
