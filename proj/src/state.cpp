#include "hrf/state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hrf/rng.hpp"

namespace hrf {

RealState::RealState(int n_qubits_, std::vector<double> amplitudes_)
    : n_qubits(n_qubits_), amplitudes(std::move(amplitudes_)) {
  if (n_qubits < 1) throw std::invalid_argument("RealState: n_qubits must be >= 1");
  if (amplitudes.size() != (1ULL << n_qubits))
    throw std::invalid_argument("RealState: amplitude vector must have length 2^n_qubits");
}

double RealState::norm_sq() const {
  double s = 0.0;
  for (double a : amplitudes) s += a * a;
  return s;
}

bool RealState::is_normalized(double tol) const {
  return std::abs(norm_sq() - 1.0) <= tol;
}

RealState RealState::basis(int n_qubits, std::uint64_t index) {
  std::vector<double> amps(1ULL << n_qubits, 0.0);
  amps.at(index) = 1.0;
  return RealState(n_qubits, std::move(amps));
}

PrepCircuit PrepCircuit::random(int n_qubits, int n_layers, std::uint64_t seed) {
  if (n_qubits < 1) throw std::invalid_argument("PrepCircuit: n_qubits must be >= 1");
  if (n_layers < 0) throw std::invalid_argument("PrepCircuit: n_layers must be >= 0");
  auto rng = make_rng(seed);
  PrepCircuit circuit;
  circuit.n_qubits = n_qubits;
  circuit.n_layers = n_layers;
  circuit.angles.assign(n_layers + 1, std::vector<double>(n_qubits));
  for (auto& column : circuit.angles)
    for (double& theta : column) theta = (uniform01(rng) - 0.5) * std::numbers::pi;
  return circuit;
}

MeasurementSetting MeasurementSetting::z_basis() { return {Kind::ZBasis, -1}; }

MeasurementSetting MeasurementSetting::x_on_bit(int k) {
  if (k < 0) throw std::invalid_argument("MeasurementSetting: pairing bit must be >= 0");
  return {Kind::XOnBit, k};
}

std::string MeasurementSetting::label() const {
  return kind == Kind::ZBasis ? "Z" : "X" + std::to_string(bit);
}

std::vector<MeasurementSetting> hrf_settings(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("hrf_settings: n_qubits must be >= 1");
  std::vector<MeasurementSetting> settings;
  settings.reserve(n_qubits + 1);
  settings.push_back(MeasurementSetting::z_basis());
  for (int k = 0; k < n_qubits; ++k) settings.push_back(MeasurementSetting::x_on_bit(k));
  return settings;
}

void apply_ry(std::vector<double>& amps, int n_qubits, int qubit, double theta) {
  const std::uint64_t stride = 1ULL << qubit_to_bit(n_qubits, qubit);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const std::uint64_t dim = amps.size();
  for (std::uint64_t base = 0; base < dim; base += 2 * stride) {
    for (std::uint64_t j = base; j < base + stride; ++j) {
      const double a0 = amps[j];
      const double a1 = amps[j + stride];
      amps[j] = c * a0 - s * a1;
      amps[j + stride] = s * a0 + c * a1;
    }
  }
}

void apply_cnot(std::vector<double>& amps, int n_qubits, int control, int target) {
  const std::uint64_t cmask = 1ULL << qubit_to_bit(n_qubits, control);
  const std::uint64_t tmask = 1ULL << qubit_to_bit(n_qubits, target);
  const std::uint64_t dim = amps.size();
  for (std::uint64_t j = 0; j < dim; ++j)
    if ((j & cmask) && !(j & tmask)) std::swap(amps[j], amps[j | tmask]);
}

void apply_h_on_bit(std::vector<double>& amps, int bit) {
  const std::uint64_t stride = 1ULL << bit;
  const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
  const std::uint64_t dim = amps.size();
  for (std::uint64_t base = 0; base < dim; base += 2 * stride) {
    for (std::uint64_t j = base; j < base + stride; ++j) {
      const double a0 = amps[j];
      const double a1 = amps[j + stride];
      amps[j] = (a0 + a1) * inv_sqrt2;
      amps[j + stride] = (a0 - a1) * inv_sqrt2;
    }
  }
}

RealState prepare_ansatz(const PrepCircuit& circuit) {
  const int n = circuit.n_qubits;
  if (n < 1) throw std::invalid_argument("prepare_ansatz: n_qubits must be >= 1");
  if (static_cast<int>(circuit.angles.size()) != circuit.n_layers + 1)
    throw std::invalid_argument("prepare_ansatz: expected n_layers + 1 angle columns");
  for (const auto& column : circuit.angles) {
    if (static_cast<int>(column.size()) != n)
      throw std::invalid_argument("prepare_ansatz: angle column size mismatch");
    for (double theta : column)
      if (!std::isfinite(theta)) throw std::invalid_argument("prepare_ansatz: non-finite angle");
  }

  std::vector<double> amps(1ULL << n, 0.0);
  amps[0] = 1.0;
  for (int layer = 0; layer < circuit.n_layers; ++layer) {
    for (int q = 0; q < n; ++q) apply_ry(amps, n, q, circuit.angles[layer][q]);
    for (int q = 0; q + 1 < n; ++q) apply_cnot(amps, n, q, q + 1);
  }
  for (int q = 0; q < n; ++q) apply_ry(amps, n, q, circuit.angles.back()[q]);
  return RealState(n, std::move(amps));
}

std::vector<double> exact_probabilities(const RealState& state,
                                        const MeasurementSetting& setting) {
  if (!state.is_normalized(1e-8))
    throw std::invalid_argument("exact_probabilities: state is not normalized");
  std::vector<double> work = state.amplitudes;
  if (setting.kind == MeasurementSetting::Kind::XOnBit) {
    if (setting.bit < 0 || setting.bit >= state.n_qubits)
      throw std::invalid_argument("exact_probabilities: pairing bit out of range");
    apply_h_on_bit(work, setting.bit);
  }
  for (double& v : work) v *= v;
  return work;
}

std::string index_to_bitstring(std::uint64_t index, int n_qubits) {
  std::string bits(n_qubits, '0');
  for (int b = 0; b < n_qubits; ++b)
    if (index >> (n_qubits - 1 - b) & 1) bits[b] = '1';
  return bits;
}

std::uint64_t bitstring_to_index(const std::string& bits) {
  std::uint64_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bitstring_to_index: invalid character");
    index = (index << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return index;
}

}  // namespace hrf
