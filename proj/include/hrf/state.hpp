#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hrf {

// Basis convention used throughout the library: basis indices follow the
// lexicographic order of their bitstrings, so qubit 0 is the most significant
// bit of an index and qubit q addresses index bit (n_qubits - 1 - q).
// Consequently a Hadamard on qubit (n_qubits - k - 1) pairs indices j and
// j + 2^k.
inline int qubit_to_bit(int n_qubits, int qubit) { return n_qubits - 1 - qubit; }

// Pure state with real amplitudes on n_qubits qubits.
struct RealState {
  int n_qubits = 0;
  std::vector<double> amplitudes;  // length 2^n_qubits

  RealState() = default;
  RealState(int n_qubits_, std::vector<double> amplitudes_);

  std::size_t dim() const { return amplitudes.size(); }
  double norm_sq() const;
  bool is_normalized(double tol = 1e-10) const;

  static RealState basis(int n_qubits, std::uint64_t index);
};

// Hardware-efficient Ry/CNOT ansatz: n_layers blocks, each one Ry column on
// all qubits followed by the CNOT ladder (q, q+1) for q = 0..n_qubits-2, and
// a trailing Ry column that closes the circuit. angles[c][q] is the rotation
// applied to qubit q in column c; there are n_layers + 1 columns.
struct PrepCircuit {
  int n_qubits = 0;
  int n_layers = 0;
  std::vector<std::vector<double>> angles;

  int cnot_count() const { return n_layers * (n_qubits - 1); }

  // Angles drawn uniformly from [-pi/2, pi/2].
  static PrepCircuit random(int n_qubits, int n_layers, std::uint64_t seed);
};

struct MeasurementSetting {
  enum class Kind { ZBasis, XOnBit };

  Kind kind = Kind::ZBasis;
  int bit = -1;  // pairing bit k; the Hadamard goes on qubit (n_qubits - k - 1)

  static MeasurementSetting z_basis();
  static MeasurementSetting x_on_bit(int k);
  std::string label() const;  // "Z" or "X<k>"
};

// The n_qubits + 1 settings sampled by the protocol: Z, then X0..X(n-1).
std::vector<MeasurementSetting> hrf_settings(int n_qubits);

// Runs the ansatz on |0...0>. Rejects non-finite angles and shape mismatches.
RealState prepare_ansatz(const PrepCircuit& circuit);

// Outcome distribution for one setting. ZBasis squares the amplitudes;
// XOnBit(k) applies a Hadamard on index bit k first.
std::vector<double> exact_probabilities(const RealState& state,
                                        const MeasurementSetting& setting);

// In-place statevector kernels (shared with the tomography baseline).
void apply_ry(std::vector<double>& amps, int n_qubits, int qubit, double theta);
void apply_cnot(std::vector<double>& amps, int n_qubits, int control, int target);
void apply_h_on_bit(std::vector<double>& amps, int bit);

// Big-endian bitstring rendering of a basis index (qubit 0 first).
std::string index_to_bitstring(std::uint64_t index, int n_qubits);
std::uint64_t bitstring_to_index(const std::string& bits);

}  // namespace hrf
