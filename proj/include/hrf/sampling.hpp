#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace hrf {

// Measurement record of one circuit: map from observed basis index to count.
struct CountTable {
  std::string setting;  // "Z", "X<k>" or "P<bases>"
  int n_qubits = 0;
  long long shots = 0;
  std::map<std::uint64_t, long long> counts;

  std::vector<double> frequencies() const;  // dense, length 2^n_qubits
  long long total() const;

  // {"setting": ..., "shots": ..., "counts": {"<bitstring>": n}} with
  // big-endian bitstrings.
  nlohmann::json to_json() const;
  static CountTable from_json(const nlohmann::json& j);
};

struct QubitReadout {
  double p01 = 0.0;  // P(read 1 | prepared 0)
  double p10 = 0.0;  // P(read 0 | prepared 1)
};

struct NoiseModel {
  std::vector<QubitReadout> readout;       // index = qubit
  std::optional<double> two_qubit_depol;   // per two-qubit gate

  bool has_readout_error() const;
  NoiseModel readout_only() const;

  static NoiseModel none(int n_qubits);
  static NoiseModel symmetric(int n_qubits, double eps);
};

// ibm_fez-style calibration snapshot used as the built-in noisy profile.
// T1/T2 are recorded for reference; the simulation uses the readout and
// two-qubit gate error columns only.
struct QubitCalibration {
  double t1_us = 0.0;
  double t2_us = 0.0;
  double eps_readout = 0.0;
  std::optional<double> eps_2q;
};
const std::vector<QubitCalibration>& table1_calibration();
NoiseModel table1_noise(int n_qubits);

// Per-qubit 2x2 column-stochastic confusion matrices; per_qubit[q][obs][truth].
struct AssignmentMatrix {
  std::vector<std::array<std::array<double, 2>, 2>> per_qubit;

  static AssignmentMatrix identity(int n_qubits);
  static AssignmentMatrix from_noise(const NoiseModel& noise);
};

// Multinomial draw of `shots` outcomes from `probs` (deterministic in seed).
// Entries below -1e-12 are rejected; tiny negatives are clipped to 0 and the
// vector renormalized.
CountTable sample_counts(std::span<const double> probs, long long shots,
                         std::uint64_t seed, std::string setting_label = "");

// Independent per-qubit bit flips on every recorded shot; the total is
// preserved.
CountTable apply_readout_noise(const CountTable& counts, const NoiseModel& noise,
                               std::uint64_t seed);

// Tensor-product inverse of the assignment matrix applied to the empirical
// distribution; negative quasi-probabilities are clipped to 0 and the vector
// renormalized. Throws on a singular per-qubit matrix.
std::vector<double> mitigate_readout(const CountTable& counts,
                                     const AssignmentMatrix& assign);

// Global white-noise weight 1 - (1 - eps_2q)^n_gates for a circuit with
// n_gates two-qubit gates.
double depol_mix_weight(double eps_2q, int n_gates);
std::vector<double> mix_with_uniform(std::span<const double> probs, double lambda);

}  // namespace hrf
