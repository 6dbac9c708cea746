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

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

fs::path temp_file(const std::string& tag) {
  return fs::temp_directory_path() / ("qmld_cli_test_" + tag);
}

// Runs the CLI with the given arguments, capturing combined output.
RunResult run_cli(const std::string& args, const std::string& tag) {
  const fs::path capture = temp_file(tag + ".log");
  const std::string cmd =
      std::string(QMLD_CLI_PATH) + " " + args + " > " + capture.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  r.exit_code = WEXITSTATUS(status);
  std::ifstream in(capture);
  std::ostringstream os;
  os << in.rdbuf();
  r.output = os.str();
  fs::remove(capture);
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

TEST_CASE("cli: detect emits a complete report", "[cli]") {
  const RunResult r =
      run_cli("detect --constellation qpsk --snr 15 --p 1 --runs 20 --seed 7", "detect");
  CAPTURE(r.output);
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.output);
  CHECK(j.at("constellation") == "QPSK");
  CHECK(j.at("rho_convention") == "retained");
  const double rho = j.at("rho").get<double>();
  CHECK(rho > 0.0);
  CHECK(rho <= 1.0 + 1e-9);
  CHECK(j.at("f_qml_expectation").get<double>() >= j.at("f_cml").get<double>() - 1e-12);
  CHECK(j.at("cml_bits").get<std::string>().size() == 2);
  CHECK(j.at("qml_bits").get<std::string>().size() == 2);
  int total_shots = 0;
  for (const auto& [bits, count] : j.at("histogram").items()) {
    CHECK(bits.size() == 2);
    total_shots += count.get<int>();
  }
  CHECK(total_shots == j.at("shots").get<int>());
  CHECK(j.at("best_params").size() == 2);  // p = 1 -> (gamma, beta)
}

TEST_CASE("cli: detect --paper-rho swaps the reported convention", "[cli]") {
  const std::string args = "detect --constellation qpsk --snr 15 --p 1 --runs 10 --seed 7";
  const RunResult plain = run_cli(args, "rho_a");
  const RunResult swapped = run_cli(args + " --paper-rho", "rho_b");
  REQUIRE(plain.exit_code == 0);
  REQUIRE(swapped.exit_code == 0);
  const json a = json::parse(plain.output);
  const json b = json::parse(swapped.output);
  CHECK(b.at("rho_convention") == "constant-removed");
  CHECK(b.at("rho") == b.at("paper_rho"));
  CHECK(a.at("paper_rho") == b.at("paper_rho"));
  CHECK(a.at("f_cml") == b.at("f_cml"));
}

TEST_CASE("cli: expand reports the objective and passes its own cross-check", "[cli]") {
  const RunResult r =
      run_cli("expand --constellation 8qam --channel rayleigh --snr 10 --seed 3", "expand");
  CAPTURE(r.output);
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.output);
  CHECK(j.at("degree").get<int>() == 2);
  CHECK(j.at("objective").at("n_vars").get<int>() == 3);
  CHECK(j.at("cross_check").at("pass").get<bool>());
  CHECK(j.at("cross_check").at("worst_predicted_rel").get<double>() < 1e-9);
  CHECK(j.at("prediction").at("degree_bound").get<int>() == 2);
  CHECK(j.at("prediction").at("predicted").size() == 3);
}

TEST_CASE("cli: landscape writes a grid CSV via --out", "[cli]") {
  const fs::path out = temp_file("landscape.csv");
  const RunResult r = run_cli("landscape --grid 4 --seed 100 --out " + out.string(), "land");
  CAPTURE(r.output);
  REQUIRE(r.exit_code == 0);
  std::ifstream in(out);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  const auto lines = lines_of(os.str());
  REQUIRE(lines.size() == 1 + 16);
  CHECK(lines[0] == "gamma,beta,f1_analytic,f1_simulated");
  fs::remove(out);
}

TEST_CASE("cli: experiment ratio-vs-runs consumes a JSON config", "[cli]") {
  const fs::path cfg_path = temp_file("cfg.json");
  {
    const json cfg{{"constellation", "qpsk"}, {"channel", "awgn"},   {"snr_db", {15.0}},
                   {"p_list", {1}},           {"realizations", 2},   {"runs", 5},
                   {"evals_per_run", 40},     {"seed", 9}};
    std::ofstream(cfg_path) << cfg.dump(2);
  }
  const RunResult r =
      run_cli("experiment ratio-vs-runs --config " + cfg_path.string(), "exp_runs");
  CAPTURE(r.output);
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.output);
  REQUIRE(lines.size() == 1 + 3);  // checkpoints default to {1,2,5}
  CHECK(lines[0] == "p,runs,mean_rho,std_rho,median_rho");
  CHECK(lines[1].rfind("1,1,", 0) == 0);
  CHECK(lines[3].rfind("1,5,", 0) == 0);
  fs::remove(cfg_path);
}

TEST_CASE("cli: unknown config keys are rejected", "[cli]") {
  const fs::path cfg_path = temp_file("bad_cfg.json");
  std::ofstream(cfg_path) << R"({"constellation":"qpsk","budget":2000})";
  const RunResult r =
      run_cli("experiment ratio-vs-runs --config " + cfg_path.string(), "bad_cfg");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("budget") != std::string::npos);
  fs::remove(cfg_path);
}

TEST_CASE("cli: missing required --config fails", "[cli]") {
  const RunResult r = run_cli("experiment ratio-vs-runs", "no_cfg");
  CHECK(r.exit_code != 0);
}

TEST_CASE("cli: oversized dense systems exit with the size-cap code", "[cli]") {
  const RunResult r = run_cli(
      "detect --constellation 256qam --ntx 4 --nrx 4 --runs 1 --shots 1", "too_big");
  CAPTURE(r.output);
  CHECK(r.exit_code == 2);
}

TEST_CASE("cli: unknown constellation exits with the generic error code", "[cli]") {
  const RunResult r = run_cli("detect --constellation 3qam --runs 1", "bad_const");
  CHECK(r.exit_code == 1);
}

TEST_CASE("cli: verify-theorems smoke run", "[cli]") {
  const RunResult r = run_cli("verify-theorems --trials 2 --seed 9", "verify");
  CAPTURE(r.output);
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("all structural-zero checks passed") != std::string::npos);
}
