#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hrf/fqst.hpp"
#include "hrf/properties.hpp"
#include "hrf/reconstruct.hpp"

namespace hrf {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string mode = "hrf";  // hrf | fqst | props | bounds | bench
  int n_qubits = 5;
  long long n_samp = 10'000;
  int n_tree = 0;  // 0 selects the size default (11 up to 5 qubits, else 111)
  int n_states = 10;
  int n_layers = 4;
  std::uint64_t seed = 1;
  std::string noise = "none";  // none | table1 | <json file>
  bool mitigation = true;
  bool allow_large_fqst = false;
  std::string out;             // empty writes to stdout
  std::string format = "json"; // json | csv

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;  // throws ConfigError
};

int resolved_n_tree(const ExperimentConfig& config);
NoiseModel resolve_noise(const ExperimentConfig& config);
NoiseModel noise_from_json(const nlohmann::json& j, int n_qubits);

// One Z table plus the n X tables, sampled from exact setting distributions
// with optional depolarizing mix and readout noise.
struct HrfSampleSet {
  CountTable z;
  std::vector<CountTable> x;
};
HrfSampleSet sample_hrf_circuits(const RealState& state, long long n_samp,
                                 const NoiseModel& noise,
                                 int n_prep_two_qubit_gates, std::uint64_t seed);

// Empirical distributions, mitigated when an assignment matrix is given.
EdgeSignOracle oracle_from_samples(const HrfSampleSet& samples,
                                   const AssignmentMatrix* mitigate);

// Experiment drivers. Every report has the shape
// {"config": ..., "rows": [...], "summary": ...} and is reproducible from
// (config, seed) up to timing fields.
nlohmann::json run_hrf(const ExperimentConfig& config);
nlohmann::json run_fqst(const ExperimentConfig& config);
nlohmann::json run_props(const ExperimentConfig& config);
nlohmann::json run_bounds(const ExperimentConfig& config);
nlohmann::json run_bench(const ExperimentConfig& config);
nlohmann::json run_experiment(const ExperimentConfig& config);

// JSON-lines (one row per line, then a config+summary line) or CSV over the
// scalar row fields.
std::string report_to_jsonl(const nlohmann::json& report);
std::string report_to_csv(const nlohmann::json& report);
void write_report(const nlohmann::json& report, const ExperimentConfig& config);

// Removes timing fields ("timing_ms" objects and keys ending in "_ms").
nlohmann::json strip_timing(nlohmann::json value);

// Wall time of one forest-generation + sign-inference + voting pass over a
// fixed oracle, repeated until min_total_ms is accumulated.
double timed_postprocess_ms(int n_qubits, int n_tree, std::uint64_t seed,
                            double min_total_ms);

// Least-squares slope of log2(ms) against n over (n, ms) points.
double fit_log2_slope(const std::vector<std::pair<int, double>>& points);

}  // namespace hrf
