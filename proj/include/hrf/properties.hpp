#pragma once

#include <cstdint>
#include <vector>

#include "hrf/density.hpp"
#include "hrf/sampling.hpp"
#include "hrf/state.hpp"

namespace hrf {

// Uniform superposition over the cells of a closed lattice path; the lattice
// is 2^(n/2) x 2^(n/2) and cells are indexed row-major.
struct PathIndexState {
  int n_qubits = 0;
  int side = 0;
  std::vector<std::uint64_t> path;  // cell indices in loop order
  RealState state;
};

// Subsystem A = the first n_qubits_a qubits (the most significant index bits).
struct BipartiteSplit {
  int n_qubits_a = 0;

  static BipartiteSplit half(int n_qubits) { return {(n_qubits + 1) / 2}; }
};

// |<a|b>|^2 for pure real states.
double state_fidelity(const RealState& a, const RealState& b);

// Uhlmann fidelity tr[sqrt(sqrt(rho) sigma sqrt(rho))]^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// <psi|rho|psi>, the Uhlmann fidelity against a pure reference.
double fidelity_with_pure(const RealState& psi, const DensityMatrix& rho);

Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& m, int n_qubits,
                                   int n_qubits_a);

// log2 of the trace norm of the partial transpose over subsystem A.
double log_negativity(const DensityMatrix& rho, const BipartiteSplit& split);

// Stabilizer Renyi entropy M_alpha from the 2alpha-moments of all 4^n Pauli
// expectations, computed by bitwise string action on the amplitude vector.
// Strings with an odd number of Y factors vanish for real states and are
// skipped. Guarded at 8 qubits unless allow_large.
double stabilizer_entropy(const RealState& state, double alpha = 2.0,
                          bool allow_large = false);

// Closed circle path on the lattice. The 4-qubit path is the fixed 8-cell
// ring; larger sizes rasterize a circle of radius side/2 - 1 around the
// lattice center.
PathIndexState circle_path(int n_qubits);

// Squared inner product with the index state, i.e. the normalized path sum.
double overlap(const RealState& state, const PathIndexState& index);

// Statistics-level simulation of the SWAP test: the ancilla reads 0 with
// probability (1 + |<a|b>|^2)/2. Optional depolarizing weight scales with an
// 8-gates-per-controlled-swap transpilation estimate; ancilla readout noise
// uses the first readout entry of the model.
double swap_test(const RealState& a, const RealState& b, long long shots,
                 const NoiseModel& noise, std::uint64_t seed);

}  // namespace hrf
