#include "hrf/fqst.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <unordered_set>

#include "hrf/rng.hpp"

namespace hrf {

namespace {

using Complex = std::complex<double>;

void apply_1q(std::vector<Complex>& v, int bit, const std::array<Complex, 4>& u) {
  const std::uint64_t stride = 1ULL << bit;
  for (std::uint64_t base = 0; base < v.size(); base += 2 * stride) {
    for (std::uint64_t j = base; j < base + stride; ++j) {
      const Complex a0 = v[j];
      const Complex a1 = v[j + stride];
      v[j] = u[0] * a0 + u[1] * a1;
      v[j + stride] = u[2] * a0 + u[3] * a1;
    }
  }
}

// Unnormalized Walsh-Hadamard transform: out[m] = sum_j in[j] (-1)^popcount(j & m).
void walsh_hadamard(std::vector<double>& v) {
  for (std::size_t len = 1; len < v.size(); len <<= 1)
    for (std::size_t base = 0; base < v.size(); base += len << 1)
      for (std::size_t j = base; j < base + len; ++j) {
        const double a = v[j];
        const double b = v[j + len];
        v[j] = a + b;
        v[j + len] = a - b;
      }
}

std::uint64_t pow3(int n) {
  std::uint64_t p = 1;
  for (int i = 0; i < n; ++i) p *= 3;
  return p;
}

}  // namespace

std::string PauliSetting::label() const {
  std::string s = "P";
  for (PauliBasis b : bases) s += "XYZ"[static_cast<int>(b)];
  return s;
}

PauliSetting PauliSetting::from_label(const std::string& label) {
  if (label.empty() || label[0] != 'P')
    throw std::invalid_argument("PauliSetting: label must start with 'P'");
  PauliSetting setting;
  for (std::size_t i = 1; i < label.size(); ++i) {
    switch (label[i]) {
      case 'X': setting.bases.push_back(PauliBasis::X); break;
      case 'Y': setting.bases.push_back(PauliBasis::Y); break;
      case 'Z': setting.bases.push_back(PauliBasis::Z); break;
      default: throw std::invalid_argument("PauliSetting: invalid basis letter");
    }
  }
  return setting;
}

std::vector<PauliSetting> enumerate_settings(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("enumerate_settings: n_qubits must be >= 1");
  const std::uint64_t total = pow3(n_qubits);
  std::vector<PauliSetting> settings;
  settings.reserve(total);
  for (std::uint64_t t = 0; t < total; ++t) {
    PauliSetting setting;
    setting.bases.resize(n_qubits);
    std::uint64_t rest = t;
    for (int q = n_qubits - 1; q >= 0; --q) {
      setting.bases[q] = static_cast<PauliBasis>(rest % 3);
      rest /= 3;
    }
    settings.push_back(std::move(setting));
  }
  return settings;
}

std::vector<double> setting_probabilities(const RealState& state,
                                          const PauliSetting& setting) {
  if (static_cast<int>(setting.bases.size()) != state.n_qubits)
    throw std::invalid_argument("setting_probabilities: setting length mismatch");
  if (!state.is_normalized(1e-8))
    throw std::invalid_argument("setting_probabilities: state is not normalized");

  const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
  const std::array<Complex, 4> h = {inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2};
  // H S-dagger maps sigma_y eigenstates onto the computational basis.
  const std::array<Complex, 4> h_sdg = {Complex{inv_sqrt2, 0.0}, Complex{0.0, -inv_sqrt2},
                                        Complex{inv_sqrt2, 0.0}, Complex{0.0, inv_sqrt2}};

  std::vector<Complex> v(state.amplitudes.begin(), state.amplitudes.end());
  for (int q = 0; q < state.n_qubits; ++q) {
    const int bit = qubit_to_bit(state.n_qubits, q);
    switch (setting.bases[q]) {
      case PauliBasis::X: apply_1q(v, bit, h); break;
      case PauliBasis::Y: apply_1q(v, bit, h_sdg); break;
      case PauliBasis::Z: break;
    }
  }

  std::vector<double> probs(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) probs[j] = std::norm(v[j]);
  return probs;
}

CountTable measure_setting(const RealState& state, const PauliSetting& setting,
                           long long shots, const NoiseModel& noise,
                           std::uint64_t seed, int n_prep_two_qubit_gates) {
  std::vector<double> probs = setting_probabilities(state, setting);
  if (noise.two_qubit_depol && n_prep_two_qubit_gates > 0)
    probs = mix_with_uniform(
        probs, depol_mix_weight(*noise.two_qubit_depol, n_prep_two_qubit_gates));
  CountTable counts = sample_counts(probs, shots, derive_seed(seed, 0), setting.label());
  return apply_readout_noise(counts, noise, derive_seed(seed, 1));
}

DensityMatrix linear_inversion_from_probs(
    int n_qubits, const std::vector<PauliSetting>& settings,
    const std::vector<std::vector<double>>& setting_probs) {
  if (settings.size() != setting_probs.size())
    throw std::invalid_argument("linear_inversion: settings/probabilities size mismatch");
  const std::uint64_t expected = pow3(n_qubits);
  if (settings.size() != expected)
    throw std::invalid_argument("linear_inversion: missing settings (expected 3^n)");
  const std::uint64_t dim = 1ULL << n_qubits;
  const std::uint64_t n_strings = 1ULL << (2 * n_qubits);

  std::unordered_set<std::string> seen;
  std::vector<double> coeff(n_strings, 0.0);
  std::vector<int> n_estimates(n_strings, 0);
  for (std::size_t t = 0; t < settings.size(); ++t) {
    const auto& setting = settings[t];
    if (static_cast<int>(setting.bases.size()) != n_qubits)
      throw std::invalid_argument("linear_inversion: setting length mismatch");
    if (!seen.insert(setting.label()).second)
      throw std::invalid_argument("linear_inversion: duplicate setting " + setting.label());
    if (setting_probs[t].size() != dim)
      throw std::invalid_argument("linear_inversion: distribution length mismatch");

    std::vector<double> parity = setting_probs[t];
    walsh_hadamard(parity);
    for (std::uint64_t m = 0; m < dim; ++m) {
      std::uint64_t s_index = 0;
      for (int q = 0; q < n_qubits; ++q) {
        const bool in_support = m >> qubit_to_bit(n_qubits, q) & 1;
        const int digit = in_support ? static_cast<int>(setting.bases[q]) + 1 : 0;
        s_index = s_index * 4 + digit;
      }
      coeff[s_index] += parity[m];
      n_estimates[s_index] += 1;
    }
  }
  for (std::uint64_t s = 0; s < n_strings; ++s) coeff[s] /= n_estimates[s];

  // Assemble rho = 2^-n sum_s c_s P_s; each string has one entry per column.
  static constexpr Complex kYPhase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::uint64_t s = 0; s < n_strings; ++s) {
    std::uint64_t flip = 0;
    std::uint64_t phase_mask = 0;
    int y_count = 0;
    std::uint64_t digits = s;
    for (int q = n_qubits - 1; q >= 0; --q) {
      const int digit = digits & 3;
      digits >>= 2;
      const std::uint64_t mask = 1ULL << qubit_to_bit(n_qubits, q);
      if (digit == 1) {  // X
        flip |= mask;
      } else if (digit == 2) {  // Y
        flip |= mask;
        phase_mask |= mask;
        ++y_count;
      } else if (digit == 3) {  // Z
        phase_mask |= mask;
      }
    }
    const Complex base = coeff[s] * kYPhase[y_count & 3];
    for (std::uint64_t col = 0; col < dim; ++col) {
      const double sign = std::popcount(col & phase_mask) & 1 ? -1.0 : 1.0;
      rho(col ^ flip, col) += base * sign;
    }
  }
  rho /= static_cast<double>(dim);
  return {n_qubits, std::move(rho)};
}

DensityMatrix linear_inversion(const std::vector<CountTable>& tables) {
  if (tables.empty()) throw std::invalid_argument("linear_inversion: no tables");
  const int n = tables.front().n_qubits;
  std::vector<PauliSetting> settings;
  std::vector<std::vector<double>> probs;
  settings.reserve(tables.size());
  probs.reserve(tables.size());
  for (const auto& table : tables) {
    if (table.n_qubits != n)
      throw std::invalid_argument("linear_inversion: table dimension mismatch");
    settings.push_back(PauliSetting::from_label(table.setting));
    probs.push_back(table.frequencies());
  }
  return linear_inversion_from_probs(n, settings, probs);
}

DensityMatrix project_physical(const DensityMatrix& rho) {
  Eigen::MatrixXcd a = 0.5 * (rho.mat + rho.mat.adjoint());
  const double trace = a.trace().real();
  if (std::abs(trace) < 1e-12)
    throw std::runtime_error("project_physical: input has zero trace");
  a /= trace;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  const Eigen::VectorXd lam = es.eigenvalues();  // ascending
  const int d = static_cast<int>(lam.size());

  // Euclidean projection of the spectrum onto the probability simplex:
  // keep the largest r eigenvalues shifted by (1 - their sum)/r, zero the rest.
  double cum = 0.0;
  int keep = 0;
  double shift = 0.0;
  for (int rank = 1; rank <= d; ++rank) {
    cum += lam[d - rank];
    const double candidate = (1.0 - cum) / rank;
    if (lam[d - rank] + candidate > 0.0) {
      keep = rank;
      shift = candidate;
    }
  }

  Eigen::VectorXd projected = Eigen::VectorXd::Zero(d);
  for (int i = d - keep; i < d; ++i) projected[i] = std::max(lam[i] + shift, 0.0);

  DensityMatrix out;
  out.n_qubits = rho.n_qubits;
  out.mat = es.eigenvectors() *
            projected.cast<Complex>().asDiagonal() *
            es.eigenvectors().adjoint();
  return out;
}

}  // namespace hrf
