#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrf/density.hpp"
#include "hrf/sampling.hpp"
#include "hrf/state.hpp"

namespace hrf {

enum class PauliBasis : std::uint8_t { X = 0, Y = 1, Z = 2 };

struct PauliSetting {
  std::vector<PauliBasis> bases;  // index = qubit

  std::string label() const;  // "P" + one of XYZ per qubit
  static PauliSetting from_label(const std::string& label);
};

// All 3^n settings in lexicographic order (X < Y < Z, qubit 0 most significant).
std::vector<PauliSetting> enumerate_settings(int n_qubits);

// Exact outcome distribution after rotating each qubit into the requested
// eigenbasis (H for X, H S-dagger for Y, identity for Z).
std::vector<double> setting_probabilities(const RealState& state,
                                          const PauliSetting& setting);

// Rotate, optionally mix in the depolarizing weight of a preparation circuit
// with n_prep_two_qubit_gates gates, sample, and apply readout noise.
CountTable measure_setting(const RealState& state, const PauliSetting& setting,
                           long long shots, const NoiseModel& noise,
                           std::uint64_t seed, int n_prep_two_qubit_gates = 0);

// Linear inversion of the Pauli expansion. A string with identity positions
// is averaged over every compatible setting. Requires the complete setting
// list; throws on missing settings.
DensityMatrix linear_inversion(const std::vector<CountTable>& tables);
DensityMatrix linear_inversion_from_probs(
    int n_qubits, const std::vector<PauliSetting>& settings,
    const std::vector<std::vector<double>>& setting_probs);

// Closest density matrix in Frobenius norm: eigenvalues projected onto the
// probability simplex, eigenbasis unchanged.
DensityMatrix project_physical(const DensityMatrix& rho);

// Measurement collection cost grows as 3^n; the CLI refuses larger systems
// unless overridden.
inline constexpr int kDefaultFqstQubitCap = 6;

}  // namespace hrf
