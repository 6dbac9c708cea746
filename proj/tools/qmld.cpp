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

// Command-line front end: compile detection instances to pseudo-Boolean
// objectives, run the simulated-QAOA detector, sweep the experiment
// protocols, and confirm the structural-zero predictions.
//
// Exit codes: 0 success, 1 invalid configuration or failed verification,
// 2 instance exceeds a hard size cap.

#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmld/experiments.hpp"
#include "qmld/serialize.hpp"

namespace {

/// Options shared by every subcommand that draws a channel instance.
struct InstanceOptions {
  std::string constellation = "qpsk";
  int n_tx = 1;
  int n_rx = 1;
  std::string channel = "awgn";
  double snr_db = 15.0;
  std::uint64_t seed = 1;
};

void add_instance_options(CLI::App* cmd, InstanceOptions& opt) {
  cmd->add_option("--constellation", opt.constellation,
                  "alphabet name (qpsk, 8qam, 16qam, 64qam, 8psk, ...)");
  cmd->add_option("--ntx", opt.n_tx, "transmit antennas");
  cmd->add_option("--nrx", opt.n_rx, "receive antennas");
  cmd->add_option("--channel", opt.channel, "awgn or rayleigh");
  cmd->add_option("--snr", opt.snr_db, "signal-to-noise ratio in dB");
  cmd->add_option("--seed", opt.seed, "instance seed");
}

qmld::ChannelInstance draw(const InstanceOptions& opt, const qmld::JointConstellation& joint) {
  return qmld::generate_instance(joint, opt.n_rx,
                                 qmld::channel_kind_from_string(opt.channel), opt.snr_db,
                                 opt.seed);
}

/// Stream that is either stdout or a file chosen by --out.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::invalid_argument("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int run(int argc, char** argv) {
  CLI::App app{"maximum-likelihood symbol detection via simulated QAOA"};
  app.require_subcommand(1);

  // --- detect ---------------------------------------------------------------
  InstanceOptions det_inst;
  int det_p = 1, det_runs = 200;
  long det_evals = qmld::kDefaultEvalsPerRun;
  std::int64_t det_shots = 1024;
  double det_tol = qmld::kDefaultSimplexTol;
  bool det_paper_rho = false;
  std::string det_out;
  CLI::App* detect = app.add_subcommand(
      "detect", "detect one instance classically and with the simulated quantum path");
  add_instance_options(detect, det_inst);
  detect->add_option("--p", det_p, "circuit depth");
  detect->add_option("--runs", det_runs, "optimizer restarts");
  detect->add_option("--evals", det_evals, "objective evaluations per restart");
  detect->add_option("--shots", det_shots, "measurement shots");
  detect->add_option("--tol", det_tol, "simplex-diameter stopping tolerance");
  detect->add_flag("--paper-rho", det_paper_rho,
                   "report the ratio with the objective constant removed");
  detect->add_option("--out", det_out, "write the JSON report here instead of stdout");

  // --- expand ---------------------------------------------------------------
  InstanceOptions exp_inst;
  double exp_rel_tol = 1e-9;
  std::string exp_out;
  CLI::App* expand = app.add_subcommand(
      "expand", "compile one instance to its objective polynomial and cross-check zeros");
  add_instance_options(expand, exp_inst);
  expand->add_option("--rel-tol", exp_rel_tol, "relative pruning tolerance");
  expand->add_option("--out", exp_out, "write the JSON here instead of stdout");

  // --- landscape ------------------------------------------------------------
  InstanceOptions land_inst;
  land_inst.seed = 100;
  int land_grid = 21;
  std::string land_out;
  CLI::App* landscape = app.add_subcommand(
      "landscape", "depth-1 expectation landscape of a QPSK instance on [0,pi]^2");
  add_instance_options(landscape, land_inst);
  landscape->add_option("--grid", land_grid, "grid points per axis");
  landscape->add_option("--out", land_out, "write the CSV here instead of stdout");

  // --- experiment -----------------------------------------------------------
  std::string cfg_runs_path, cfg_runs_out;
  std::string cfg_snr_path, cfg_snr_out;
  bool exp_paper_rho = false;
  CLI::App* experiment =
      app.add_subcommand("experiment", "approximation-ratio sweeps (CSV output)");
  experiment->require_subcommand(1);
  CLI::App* vs_runs = experiment->add_subcommand(
      "ratio-vs-runs", "mean ratio as a function of the restart budget");
  vs_runs->add_option("--config", cfg_runs_path, "JSON experiment config")->required();
  vs_runs->add_option("--out", cfg_runs_out, "write the CSV here instead of stdout");
  CLI::App* vs_snr =
      experiment->add_subcommand("ratio-vs-snr", "mean ratio as a function of SNR");
  vs_snr->add_option("--config", cfg_snr_path, "JSON experiment config")->required();
  vs_snr->add_option("--out", cfg_snr_out, "write the CSV here instead of stdout");
  experiment->add_flag("--paper-rho", exp_paper_rho,
                       "ratios with the objective constant removed");

  // --- verify-theorems --------------------------------------------------------
  int thm_trials = 200;
  std::uint64_t thm_seed = 1;
  CLI::App* verify = app.add_subcommand(
      "verify-theorems",
      "confirm the structural-zero predictions on random instances");
  verify->add_option("--trials", thm_trials, "instances per constellation case");
  verify->add_option("--seed", thm_seed, "master seed");

  CLI11_PARSE(app, argc, argv);

  if (detect->parsed()) {
    const qmld::JointConstellation joint = qmld::make_joint(det_inst.constellation, det_inst.n_tx);
    const qmld::ChannelInstance inst = draw(det_inst, joint);
    qmld::DetectionReport rep =
        qmld::qml_detect(joint, inst, det_p, det_runs, det_shots,
                         qmld::mix_seed(det_inst.seed, 0xde7ec7ULL), det_evals, det_tol);
    qmld::json j = rep;
    j["rho_convention"] = det_paper_rho ? "constant-removed" : "retained";
    if (det_paper_rho) j["rho"] = rep.paper_rho;
    OutputTarget out(det_out);
    out.stream() << j.dump(2) << '\n';
    return 0;
  }

  if (expand->parsed()) {
    const qmld::JointConstellation joint = qmld::make_joint(exp_inst.constellation, exp_inst.n_tx);
    const qmld::ChannelInstance inst = draw(exp_inst, joint);
    const qmld::ClauseWeights w = qmld::clause_weights(joint, inst);
    const qmld::MultilinearPolynomial raw = qmld::fast_expand(w, joint, 0.0);
    const qmld::MultilinearPolynomial f =
        qmld::pruned(raw, exp_rel_tol > 0 ? exp_rel_tol * w.max_weight() : 0.0);
    const qmld::ZeroPrediction zeros = qmld::predict_zero_monomials(joint);
    double worst = 0.0;
    for (const auto& [mask, rule] : zeros.predicted) {
      (void)rule;
      const auto it = raw.terms.find(mask);
      if (it != raw.terms.end()) {
        worst = std::max(worst, std::abs(it->second) / w.max_weight());
      }
    }
    qmld::json j{{"instance", inst},
                 {"objective", f},
                 {"degree", qmld::degree(f)},
                 {"prediction", zeros},
                 {"cross_check",
                  {{"worst_predicted_rel", worst}, {"pass", worst < qmld::kZeroRelTol}}}};
    OutputTarget out(exp_out);
    out.stream() << j.dump(2) << '\n';
    return 0;
  }

  if (landscape->parsed()) {
    const qmld::JointConstellation joint =
        qmld::make_joint(land_inst.constellation, land_inst.n_tx);
    const qmld::ChannelInstance inst = draw(land_inst, joint);
    OutputTarget out(land_out);
    qmld::landscape_f1(joint, inst, land_grid, out.stream());
    return 0;
  }

  if (experiment->parsed()) {
    const bool runs_mode = vs_runs->parsed();
    const std::string& path = runs_mode ? cfg_runs_path : cfg_snr_path;
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    const qmld::ExperimentConfig cfg =
        qmld::experiment_config_from_json(qmld::json::parse(in));
    OutputTarget out(runs_mode ? cfg_runs_out : cfg_snr_out);
    if (runs_mode) {
      qmld::experiment_ratio_vs_runs(cfg, out.stream(), exp_paper_rho);
    } else {
      qmld::experiment_ratio_vs_snr(cfg, out.stream(), exp_paper_rho);
    }
    return 0;
  }

  if (verify->parsed()) {
    const qmld::TheoremReport report =
        qmld::verify_theorems(qmld::default_theorem_cases(), thm_trials, thm_seed);
    std::cout << qmld::render(report);
    return report.all_pass ? 0 : 1;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const qmld::size_cap_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
