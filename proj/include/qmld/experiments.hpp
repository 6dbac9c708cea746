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
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qmld/channel.hpp"
#include "qmld/common.hpp"
#include "qmld/constellation.hpp"
#include "qmld/detector.hpp"
#include "qmld/objective.hpp"
#include "qmld/optimizer.hpp"

namespace qmld {

/// Shortest round-trippable decimal rendering used in every CSV.
inline std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// n_tx identical transmit alphabets chosen by name.
inline JointConstellation make_joint(const std::string& constellation, int n_tx) {
  if (n_tx < 1) throw std::invalid_argument("make_joint: n_tx must be positive");
  std::vector<Constellation> comps;
  for (int k = 0; k < n_tx; ++k) comps.push_back(constellation_by_name(constellation));
  return joint_constellation(std::move(comps));
}

/// Protocol knobs for the approximation-ratio experiments.
struct ExperimentConfig {
  std::string constellation = "qpsk";
  int n_tx = 1;
  int n_rx = 1;
  ChannelKind channel = ChannelKind::awgn;
  std::vector<double> snr_db = {15.0};
  std::vector<int> p_list = {1, 2, 3, 4};
  int realizations = 100;
  int runs = 2000;
  long evals_per_run = kDefaultEvalsPerRun;
  double tol = kDefaultSimplexTol;
  std::uint64_t seed = 1;
  /// ratio_vs_runs: restart counts at which the best-so-far ratio is recorded;
  /// empty means a 1-2-5 ladder up to `runs`.
  std::vector<int> checkpoints;
};

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.n_tx < 1 || cfg.n_rx < 1) {
    throw std::invalid_argument("experiment config: antenna counts must be positive");
  }
  if (cfg.snr_db.empty()) {
    throw std::invalid_argument("experiment config: need at least one SNR");
  }
  if (cfg.p_list.empty()) {
    throw std::invalid_argument("experiment config: need at least one depth");
  }
  for (int p : cfg.p_list) {
    if (p < 1) throw std::invalid_argument("experiment config: depths must be positive");
  }
  if (cfg.realizations < 1 || cfg.runs < 1 || cfg.evals_per_run < 1) {
    throw std::invalid_argument("experiment config: counts must be positive");
  }
  for (int c : cfg.checkpoints) {
    if (c < 1 || c > cfg.runs) {
      throw std::invalid_argument("experiment config: checkpoints must lie in [1, runs]");
    }
  }
  (void)constellation_by_name(cfg.constellation);  // throws on unknown name
}

inline std::vector<int> default_checkpoints(int runs) {
  std::vector<int> out;
  for (int base = 1; base <= runs; base *= 10) {
    for (int mult : {1, 2, 5}) {
      const long c = static_cast<long>(base) * mult;
      if (c <= runs) out.push_back(static_cast<int>(c));
    }
  }
  if (out.empty() || out.back() != runs) out.push_back(runs);
  return out;
}

// Seed streams.  Instances depend only on (master, snr index, realization), so
// every depth p sees the same channels; optimizer streams additionally fold in
// p.  All derivations go through mix_seed, making each loop order-independent
// and any prefix reproducible.
inline std::uint64_t instance_seed(std::uint64_t master, int snr_index, int realization) {
  return mix_seed(mix_seed(master, 0x696e7374ULL + static_cast<std::uint64_t>(snr_index)),
                  static_cast<std::uint64_t>(realization));
}
inline std::uint64_t optimizer_seed(std::uint64_t master, int p, int snr_index,
                                    int realization) {
  return mix_seed(mix_seed(master, 0x6f707400ULL + 1000ULL * static_cast<std::uint64_t>(p) +
                                       static_cast<std::uint64_t>(snr_index)),
                  static_cast<std::uint64_t>(realization));
}

namespace detail {

struct Stats {
  double mean = 0.0, stddev = 0.0, median = 0.0;
};

inline Stats summarize(std::vector<double> xs) {
  Stats s;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) s.mean += x;
  s.mean /= n;
  if (xs.size() > 1) {
    double acc = 0.0;
    for (double x : xs) acc += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(acc / (n - 1.0));
  }
  std::sort(xs.begin(), xs.end());
  const std::size_t mid = xs.size() / 2;
  s.median = xs.size() % 2 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
  return s;
}

}  // namespace detail

/// Approximation ratio, either with constants retained (the default: both the
/// classical minimum and the expectation are genuine residual energies, so the
/// ratio lands in (0, 1]) or with the objective's constant term removed from
/// numerator and denominator.
inline double approximation_ratio(double f_cml, double f_expectation, double constant,
                                  bool drop_constant) {
  const double num = drop_constant ? f_cml - constant : f_cml;
  const double den = drop_constant ? f_expectation - constant : f_expectation;
  return num == den ? 1.0 : num / den;  // equality covers the noiseless 0/0 edge
}

/// Approximation ratio versus the number of optimizer restarts, at the first
/// configured SNR.  For every depth p and every channel realization the full
/// multi-start is run once; the monotone best-so-far trace then yields the
/// ratio after any prefix of the restarts, recorded at the checkpoints.
/// CSV columns: p, runs, mean_rho, std_rho, median_rho.
inline void experiment_ratio_vs_runs(const ExperimentConfig& cfg, std::ostream& out,
                                     bool paper_rho = false) {
  validate(cfg);
  const JointConstellation joint = make_joint(cfg.constellation, cfg.n_tx);
  std::vector<int> checkpoints =
      cfg.checkpoints.empty() ? default_checkpoints(cfg.runs) : cfg.checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());
  out << "p,runs,mean_rho,std_rho,median_rho\n";
  for (int p : cfg.p_list) {
    // rho[c][r]: ratio at checkpoint c for realization r
    std::vector<std::vector<double>> rho(checkpoints.size());
    for (int r = 0; r < cfg.realizations; ++r) {
      const ChannelInstance inst = generate_instance(
          joint, cfg.n_rx, cfg.channel, cfg.snr_db.front(), instance_seed(cfg.seed, 0, r));
      const double f_cml = cml_detect(joint, inst).value;
      const DetectionProblem prob = build_problem(joint, inst);
      const QaoaObjective objective(prob);
      const OptimizationRun opt =
          multi_start(std::cref(objective), 2 * p, cfg.runs, cfg.evals_per_run, cfg.tol,
                      optimizer_seed(cfg.seed, p, 0, r));
      for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        const double best = opt.best_by_run[static_cast<std::size_t>(checkpoints[c] - 1)];
        rho[c].push_back(
            approximation_ratio(f_cml, best, prob.objective.constant, paper_rho));
      }
    }
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      const detail::Stats s = detail::summarize(rho[c]);
      out << p << ',' << checkpoints[c] << ',' << csv_double(s.mean) << ','
          << csv_double(s.stddev) << ',' << csv_double(s.median) << '\n';
    }
  }
}

/// Approximation ratio versus SNR at the full restart budget.
/// CSV columns: p, snr_db, mean_rho, std_rho, median_rho.
inline void experiment_ratio_vs_snr(const ExperimentConfig& cfg, std::ostream& out,
                                    bool paper_rho = false) {
  validate(cfg);
  const JointConstellation joint = make_joint(cfg.constellation, cfg.n_tx);
  out << "p,snr_db,mean_rho,std_rho,median_rho\n";
  for (int p : cfg.p_list) {
    for (std::size_t s_idx = 0; s_idx < cfg.snr_db.size(); ++s_idx) {
      std::vector<double> rho;
      for (int r = 0; r < cfg.realizations; ++r) {
        const ChannelInstance inst =
            generate_instance(joint, cfg.n_rx, cfg.channel, cfg.snr_db[s_idx],
                              instance_seed(cfg.seed, static_cast<int>(s_idx), r));
        const double f_cml = cml_detect(joint, inst).value;
        const DetectionProblem prob = build_problem(joint, inst);
        const QaoaObjective objective(prob);
        const OptimizationRun opt =
            multi_start(std::cref(objective), 2 * p, cfg.runs, cfg.evals_per_run, cfg.tol,
                        optimizer_seed(cfg.seed, p, static_cast<int>(s_idx), r));
        rho.push_back(approximation_ratio(f_cml, opt.best_value, prob.objective.constant,
                                          paper_rho));
      }
      const detail::Stats st = detail::summarize(rho);
      out << p << ',' << csv_double(cfg.snr_db[s_idx]) << ',' << csv_double(st.mean)
          << ',' << csv_double(st.stddev) << ',' << csv_double(st.median) << '\n';
    }
  }
}

/// Depth-1 landscape of a two-variable instance on a uniform grid over
/// [0, pi]^2: closed form next to the simulated expectation (both with the
/// Ising constant removed).  CSV columns: gamma, beta, f1_analytic,
/// f1_simulated.
inline void landscape_f1(const JointConstellation& joint, const ChannelInstance& inst,
                         int grid, std::ostream& out) {
  if (joint.total_bits != 2) {
    throw std::invalid_argument("landscape_f1: needs a two-variable instance (one QPSK antenna)");
  }
  if (grid < 2) throw std::invalid_argument("landscape_f1: grid must be at least 2");
  const MultilinearPolynomial f = fast_expand(clause_weights(joint, inst), joint);
  const IsingHamiltonian h = to_ising(f);
  auto coupling = [&](std::uint32_t mask) {
    const auto it = h.couplings.find(mask);
    return it == h.couplings.end() ? 0.0 : it->second;
  };
  const double a0 = -coupling(0b01u);
  const double a1 = -coupling(0b10u);
  const double a01 = 2.0 * coupling(0b11u);
  out << "gamma,beta,f1_analytic,f1_simulated\n";
  const double pi = std::numbers::pi;
  for (int gi = 0; gi < grid; ++gi) {
    const double gamma = pi * gi / (grid - 1);
    for (int bi = 0; bi < grid; ++bi) {
      const double beta = pi * bi / (grid - 1);
      const double analytic = f1_qpsk_analytic(a0, a1, a01, gamma, beta);
      const StateVector psi = run_qaoa(f, {gamma}, {beta});
      const double simulated = expectation(psi, f) - h.constant;
      out << csv_double(gamma) << ',' << csv_double(beta) << ',' << csv_double(analytic)
          << ',' << csv_double(simulated) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Numerical confirmation of the structural-zero predictions.
// ---------------------------------------------------------------------------

struct TheoremCase {
  std::string constellation = "qpsk";
  int n_tx = 1;
  int n_rx = 1;
};

struct TheoremCaseReport {
  TheoremCase which;
  int trials = 0;
  int predicted_degree = 0;  ///< degree bound from the zero predictor
  int observed_degree = 0;   ///< max degree over trials after pruning
  std::size_t predicted_zeros = 0;
  /// worst |coefficient| / max clause weight among predicted-zero monomials
  double worst_predicted_rel = 0.0;
  std::map<std::string, double> worst_by_rule;
  bool pass = false;
};

struct TheoremReport {
  std::vector<TheoremCaseReport> cases;
  long total_trials = 0;
  bool all_pass = true;
};

/// Relative magnitude below which a predicted-zero coefficient counts as zero.
inline constexpr double kZeroRelTol = 1e-9;

/// Random-instance confirmation: for every case, draw Rayleigh channels at
/// SNRs uniform in [0, 20] dB, expand without pruning, and record the largest
/// relative magnitude any predicted-zero monomial ever attains plus the degree
/// actually observed after pruning.  A case passes when every predicted zero
/// stays below kZeroRelTol and the observed degree equals the predictor bound.
inline TheoremReport verify_theorems(const std::vector<TheoremCase>& cases,
                                     int trials_per_case, std::uint64_t seed) {
  if (trials_per_case < 1) {
    throw std::invalid_argument("verify_theorems: trials must be positive");
  }
  TheoremReport report;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const TheoremCase& tc = cases[ci];
    const JointConstellation joint = make_joint(tc.constellation, tc.n_tx);
    const ZeroPrediction zeros = predict_zero_monomials(joint);
    TheoremCaseReport cr;
    cr.which = tc;
    cr.trials = trials_per_case;
    cr.predicted_degree = zeros.degree_bound;
    cr.predicted_zeros = zeros.predicted.size();
    const std::uint64_t case_seed = mix_seed(seed, 0x7468ULL + ci);
    for (int t = 0; t < trials_per_case; ++t) {
      Rng snr_rng(mix_seed(case_seed, 2ULL * t));
      const double snr = snr_rng.uniform(0.0, 20.0);
      const ChannelInstance inst = generate_instance(
          joint, tc.n_rx, ChannelKind::rayleigh, snr, mix_seed(case_seed, 2ULL * t + 1));
      const ClauseWeights w = clause_weights(joint, inst);
      const MultilinearPolynomial raw = fast_expand(w, joint, 0.0);  // keep every term
      const double scale = w.max_weight();
      for (const auto& [mask, rule] : zeros.predicted) {
        const auto it = raw.terms.find(mask);
        const double rel = it == raw.terms.end() ? 0.0 : std::abs(it->second) / scale;
        cr.worst_predicted_rel = std::max(cr.worst_predicted_rel, rel);
        auto& worst = cr.worst_by_rule[to_string(rule)];
        worst = std::max(worst, rel);
      }
      cr.observed_degree =
          std::max(cr.observed_degree, degree(pruned(raw, kZeroRelTol * scale)));
    }
    cr.pass = cr.worst_predicted_rel < kZeroRelTol && cr.observed_degree == cr.predicted_degree;
    report.all_pass = report.all_pass && cr.pass;
    report.total_trials += trials_per_case;
    report.cases.push_back(std::move(cr));
  }
  return report;
}

/// Cases exercised by default: the worked single-antenna alphabets plus the
/// two-antenna QPSK system.
inline std::vector<TheoremCase> default_theorem_cases() {
  return {{"qpsk", 1, 1}, {"8qam", 1, 1}, {"16qam", 1, 1}, {"64qam", 1, 1}, {"qpsk", 2, 2}};
}

inline std::string render(const TheoremReport& report) {
  std::ostringstream os;
  os << "constellation  n_tx  n_rx  trials  zeros  degree(pred/obs)  worst|coeff|/max_w  rules\n";
  for (const TheoremCaseReport& cr : report.cases) {
    char line[160];
    std::snprintf(line, sizeof line, "%-13s %5d %5d %7d %6zu %8d / %-8d %.3e  ",
                  cr.which.constellation.c_str(), cr.which.n_tx, cr.which.n_rx, cr.trials,
                  cr.predicted_zeros, cr.predicted_degree, cr.observed_degree,
                  cr.worst_predicted_rel);
    os << line;
    bool first = true;
    for (const auto& [rule, worst] : cr.worst_by_rule) {
      if (!first) os << ", ";
      os << rule << "=" << csv_double(worst);
      first = false;
    }
    os << (cr.pass ? "  [ok]" : "  [FAIL]") << '\n';
  }
  os << (report.all_pass ? "all structural-zero checks passed" : "STRUCTURAL-ZERO CHECK FAILED")
     << " (" << report.total_trials << " instances)\n";
  return os.str();
}

}  // namespace qmld
