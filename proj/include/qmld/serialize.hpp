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
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmld/channel.hpp"
#include "qmld/constellation.hpp"
#include "qmld/detector.hpp"
#include "qmld/experiments.hpp"
#include "qmld/objective.hpp"
#include "qmld/polynomial.hpp"

namespace qmld {

using nlohmann::json;

// complex numbers ride as [re, im]
inline json complex_to_json(const complex& z) { return json::array({z.real(), z.imag()}); }
inline complex complex_from_json(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline json complex_vector_to_json(const std::vector<complex>& v) {
  json out = json::array();
  for (const complex& z : v) out.push_back(complex_to_json(z));
  return out;
}
inline std::vector<complex> complex_vector_from_json(const json& j) {
  std::vector<complex> out;
  for (const json& e : j) out.push_back(complex_from_json(e));
  return out;
}

// SNR may be +inf (noiseless), which JSON numbers cannot carry.
inline json snr_to_json(double snr_db) {
  if (std::isinf(snr_db)) return "inf";
  return snr_db;
}
inline double snr_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("snr_db: unrecognized string value");
  }
  return j.get<double>();
}

inline std::string to_string(Labeling l) {
  switch (l) {
    case Labeling::rect_gray: return "rect-gray";
    case Labeling::psk_gray: return "psk-gray";
    case Labeling::arbitrary: return "arbitrary";
  }
  return "?";
}
inline Labeling labeling_from_string(const std::string& s) {
  if (s == "rect-gray") return Labeling::rect_gray;
  if (s == "psk-gray") return Labeling::psk_gray;
  if (s == "arbitrary") return Labeling::arbitrary;
  throw std::invalid_argument("unknown labeling: " + s);
}

inline void to_json(json& j, const Constellation& c) {
  j = json{{"name", c.name},
           {"n_bits", c.n_bits},
           {"labeling", to_string(c.labeling)},
           {"points", complex_vector_to_json(c.points)},
           {"labels", json::array()},
           {"inphase_bits", c.inphase_bits},
           {"quadrature_bits", c.quadrature_bits}};
  for (std::uint32_t i = 0; i < c.points.size(); ++i) {
    j["labels"].push_back(bits_to_string(bits_of_index(i, c.n_bits)));
  }
}

inline void from_json(const json& j, Constellation& c) {
  c.name = j.at("name").get<std::string>();
  c.n_bits = j.at("n_bits").get<int>();
  c.labeling = labeling_from_string(j.at("labeling").get<std::string>());
  c.points = complex_vector_from_json(j.at("points"));
  c.inphase_bits = j.at("inphase_bits").get<std::vector<int>>();
  c.quadrature_bits = j.at("quadrature_bits").get<std::vector<int>>();
  validate(c);
}

inline void to_json(json& j, const ChannelInstance& inst) {
  json h = json::array();
  for (int l = 0; l < inst.h.rows; ++l) {
    json row = json::array();
    for (int k = 0; k < inst.h.cols; ++k) row.push_back(complex_to_json(inst.h(l, k)));
    h.push_back(std::move(row));
  }
  j = json{{"kind", to_string(inst.kind)},
           {"snr_db", snr_to_json(inst.snr_db)},
           {"seed", inst.seed},
           {"n_rx", inst.n_rx},
           {"h", std::move(h)},
           {"tx_bits", inst.tx_bits},
           {"tx_indices", inst.tx_indices},
           {"scale", inst.scale},
           {"tx_symbols", complex_vector_to_json(inst.tx_symbols)},
           {"noise", complex_vector_to_json(inst.noise)},
           {"received", complex_vector_to_json(inst.received)}};
}

inline void from_json(const json& j, ChannelInstance& inst) {
  inst.kind = channel_kind_from_string(j.at("kind").get<std::string>());
  inst.snr_db = snr_from_json(j.at("snr_db"));
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.n_rx = j.at("n_rx").get<int>();
  const json& h = j.at("h");
  const int rows = static_cast<int>(h.size());
  const int cols = rows > 0 ? static_cast<int>(h.at(0).size()) : 0;
  inst.h = CMatrix(rows, cols);
  for (int l = 0; l < rows; ++l) {
    for (int k = 0; k < cols; ++k) inst.h(l, k) = complex_from_json(h.at(l).at(k));
  }
  inst.tx_bits = j.at("tx_bits").get<std::vector<std::uint8_t>>();
  inst.tx_indices = j.at("tx_indices").get<std::vector<std::uint32_t>>();
  inst.scale = j.at("scale").get<std::vector<double>>();
  inst.tx_symbols = complex_vector_from_json(j.at("tx_symbols"));
  inst.noise = complex_vector_from_json(j.at("noise"));
  inst.received = complex_vector_from_json(j.at("received"));
}

inline std::vector<int> varmask_to_subset(std::uint32_t mask) {
  std::vector<int> subset;
  for (int k = 0; k < 32; ++k) {
    if (mask & (1u << k)) subset.push_back(k);
  }
  return subset;
}
inline std::uint32_t subset_to_varmask(const std::vector<int>& subset) {
  std::uint32_t mask = 0;
  for (int k : subset) {
    if (k < 0 || k > 31) throw std::invalid_argument("subset: variable index out of range");
    mask |= 1u << k;
  }
  return mask;
}

inline void to_json(json& j, const MultilinearPolynomial& f) {
  json terms = json::array();
  for (const auto& [mask, coeff] : f.terms) {
    terms.push_back(json{{"subset", varmask_to_subset(mask)}, {"coeff", coeff}});
  }
  j = json{{"n_vars", f.n_vars}, {"constant", f.constant}, {"terms", std::move(terms)}};
}

inline void from_json(const json& j, MultilinearPolynomial& f) {
  f.n_vars = j.at("n_vars").get<int>();
  f.constant = j.at("constant").get<double>();
  f.terms.clear();
  for (const json& t : j.at("terms")) {
    f.terms[subset_to_varmask(t.at("subset").get<std::vector<int>>())] =
        t.at("coeff").get<double>();
  }
}

inline void to_json(json& j, const DetectionReport& rep) {
  j = json{{"constellation", rep.constellation},
           {"n_tx", rep.n_tx},
           {"n_rx", rep.n_rx},
           {"channel", to_string(rep.channel)},
           {"snr_db", snr_to_json(rep.snr_db)},
           {"instance_seed", rep.instance_seed},
           {"tx_bits", rep.tx_bits},
           {"p", rep.p},
           {"runs", rep.runs},
           {"evals_per_run", rep.evals_per_run},
           {"shots", rep.shots},
           {"seed", rep.seed},
           {"cml_bits", rep.cml_bits},
           {"f_cml", rep.f_cml},
           {"f_qml_expectation", rep.f_qml_expectation},
           {"rho", rep.rho},
           {"paper_rho", rep.paper_rho},
           {"qml_bits", rep.qml_bits},
           {"f_qml_modal", rep.f_qml_modal},
           {"best_params", rep.best_params},
           {"total_evaluations", rep.total_evaluations},
           {"histogram", rep.histogram}};
}

inline void to_json(json& j, const ZeroPrediction& z) {
  json predicted = json::array();
  for (const auto& [mask, rule] : z.predicted) {
    predicted.push_back(json{{"subset", varmask_to_subset(mask)}, {"rule", to_string(rule)}});
  }
  j = json{{"n_vars", z.n_vars},
           {"degree_bound", z.degree_bound},
           {"predicted", std::move(predicted)}};
}

/// Strict config parser: unknown keys are rejected so typos cannot silently
/// fall back to defaults.
inline ExperimentConfig experiment_config_from_json(const json& j) {
  static const std::vector<std::string> known = {
      "constellation", "n_tx", "n_rx", "channel", "snr_db", "p_list", "realizations",
      "runs", "evals_per_run", "tol", "seed", "checkpoints"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("experiment config: unknown key '" + key + "'");
    }
  }
  ExperimentConfig cfg;
  if (j.contains("constellation")) cfg.constellation = j.at("constellation").get<std::string>();
  if (j.contains("n_tx")) cfg.n_tx = j.at("n_tx").get<int>();
  if (j.contains("n_rx")) cfg.n_rx = j.at("n_rx").get<int>();
  if (j.contains("channel")) {
    cfg.channel = channel_kind_from_string(j.at("channel").get<std::string>());
  }
  if (j.contains("snr_db")) {
    cfg.snr_db.clear();
    for (const json& s : j.at("snr_db")) cfg.snr_db.push_back(snr_from_json(s));
  }
  if (j.contains("p_list")) cfg.p_list = j.at("p_list").get<std::vector<int>>();
  if (j.contains("realizations")) cfg.realizations = j.at("realizations").get<int>();
  if (j.contains("runs")) cfg.runs = j.at("runs").get<int>();
  if (j.contains("evals_per_run")) cfg.evals_per_run = j.at("evals_per_run").get<long>();
  if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("checkpoints")) cfg.checkpoints = j.at("checkpoints").get<std::vector<int>>();
  validate(cfg);
  return cfg;
}

inline json experiment_config_to_json(const ExperimentConfig& cfg) {
  json snr = json::array();
  for (double s : cfg.snr_db) snr.push_back(snr_to_json(s));
  return json{{"constellation", cfg.constellation},
              {"n_tx", cfg.n_tx},
              {"n_rx", cfg.n_rx},
              {"channel", to_string(cfg.channel)},
              {"snr_db", std::move(snr)},
              {"p_list", cfg.p_list},
              {"realizations", cfg.realizations},
              {"runs", cfg.runs},
              {"evals_per_run", cfg.evals_per_run},
              {"tol", cfg.tol},
              {"seed", cfg.seed},
              {"checkpoints", cfg.checkpoints}};
}

}  // namespace qmld
