// End-to-end checks of the command-line driver: exit codes and report files.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hrf/experiment.hpp"

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  const std::string command =
      std::string(HRF_CLI_BIN) + " " + args + " > /dev/null 2> /dev/null";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("help exits cleanly") {
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("hrf --help") == 0);
}

TEST_CASE("missing or invalid arguments are config errors") {
  CHECK(run_cli("") == 2);                      // a subcommand is required
  CHECK(run_cli("tomography") == 2);            // unknown subcommand
  CHECK(run_cli("hrf --qubits 0") == 2);        // fails validation
  CHECK(run_cli("hrf --config /tmp/hrf_no_such_config.json") == 2);
  CHECK(run_cli("fqst --qubits 7") == 2);       // capped without the override
  CHECK(run_cli("hrf --noise /tmp/hrf_no_such_noise.json") == 2);
}

TEST_CASE("a small run writes a parsable JSONL report") {
  const fs::path out = temp_file("hrf_cli_report.jsonl");
  const int code = run_cli("hrf --qubits 3 --samples 2000 --trees 3 --states 2 --seed 5 --out " +
                           out.string());
  REQUIRE(code == 0);

  std::ifstream in(out);
  REQUIRE(in.good());
  std::string line;
  int lines = 0;
  nlohmann::json last;
  while (std::getline(in, line)) {
    last = nlohmann::json::parse(line);
    ++lines;
  }
  CHECK(lines == 3);
  CHECK(last.at("config").at("n_qubits") == 3);
  CHECK(last.at("summary").at("mean_fidelity").get<double>() > 0.8);
  fs::remove(out);
}

TEST_CASE("config files drive the run and flags override them") {
  const fs::path config_path = temp_file("hrf_cli_config.json");
  {
    std::ofstream config(config_path);
    config << nlohmann::json{{"mode", "hrf"}, {"n_qubits", 3},   {"n_samp", 1500},
                             {"n_tree", 3},   {"n_states", 1},   {"seed", 7}}
                  .dump();
  }
  const fs::path out = temp_file("hrf_cli_config_report.jsonl");
  REQUIRE(run_cli("hrf --config " + config_path.string() + " --states 2 --out " +
                  out.string()) == 0);

  std::ifstream in(out);
  std::string line, last_line;
  int rows = 0;
  while (std::getline(in, line)) {
    last_line = line;
    ++rows;
  }
  CHECK(rows == 3);  // the --states flag overrode the file's n_states = 1
  const auto summary = nlohmann::json::parse(last_line);
  CHECK(summary.at("config").at("n_samp") == 1500);
  fs::remove(config_path);
  fs::remove(out);
}

TEST_CASE("csv output carries one row per state") {
  const fs::path out = temp_file("hrf_cli_report.csv");
  REQUIRE(run_cli("hrf -q 2 -n 1000 -t 3 -R 3 --seed 2 --format csv --out " +
                  out.string()) == 0);
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  CHECK(header.find("fidelity_vs_target") != std::string::npos);
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
  fs::remove(out);
}

TEST_CASE("numerical failures exit with code 3") {
  // p01 = p10 = 0.5 makes the assignment matrix singular under mitigation
  const fs::path noise_path = temp_file("hrf_cli_noise.json");
  {
    std::ofstream noise(noise_path);
    noise << nlohmann::json{{"readout", {{{"p01", 0.5}, {"p10", 0.5}}}}}.dump();
  }
  CHECK(run_cli("hrf --qubits 2 --samples 500 --trees 3 --states 1 --noise " +
                noise_path.string()) == 3);
  // without mitigation the same model is merely very noisy, not an error
  CHECK(run_cli("hrf --qubits 2 --samples 500 --trees 3 --states 1 --no-mitigation --noise " +
                noise_path.string()) == 0);
  fs::remove(noise_path);
}

TEST_CASE("bounds and bench modes run at desk scale") {
  const fs::path out = temp_file("hrf_cli_bounds.jsonl");
  CHECK(run_cli("bounds --qubits 3 --samples 400 --states 1 --seed 3 --out " +
                out.string()) == 0);
  fs::remove(out);
  CHECK(run_cli("bench --qubits 4 --samples 500 --trees 5 --seed 4 --out " +
                temp_file("hrf_cli_bench.jsonl").string()) == 0);
  fs::remove(temp_file("hrf_cli_bench.jsonl"));
}
