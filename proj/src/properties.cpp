#include "hrf/properties.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hrf/rng.hpp"

namespace hrf {

namespace {

using Complex = std::complex<double>;

// Eigenvalues below this fraction of the largest are numerical noise; sqrt
// would amplify them from ~1e-16 to ~1e-8.
constexpr double kSpectralFloor = 1e-13;

Eigen::MatrixXcd checked_sqrt(const Eigen::MatrixXcd& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()));
  if (es.eigenvalues().minCoeff() < -1e-8)
    throw std::invalid_argument(std::string(what) + ": input is not positive semidefinite");
  const double floor = es.eigenvalues().cwiseAbs().maxCoeff() * kSpectralFloor;
  Eigen::VectorXd lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    lam[i] = lam[i] > floor ? std::sqrt(lam[i]) : 0.0;
  return es.eigenvectors() * lam.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double state_fidelity(const RealState& a, const RealState& b) {
  if (a.n_qubits != b.n_qubits)
    throw std::invalid_argument("state_fidelity: qubit counts differ");
  double inner = 0.0;
  for (std::size_t j = 0; j < a.dim(); ++j) inner += a.amplitudes[j] * b.amplitudes[j];
  return inner * inner;
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.mat.rows() != sigma.mat.rows())
    throw std::invalid_argument("fidelity: dimension mismatch");
  const Eigen::MatrixXcd sqrt_rho = checked_sqrt(rho.mat, "fidelity");
  checked_sqrt(sigma.mat, "fidelity");  // validate the second input as well
  const Eigen::MatrixXcd inner = sqrt_rho * sigma.mat * sqrt_rho;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (inner + inner.adjoint()));
  const double floor = es.eigenvalues().cwiseAbs().maxCoeff() * kSpectralFloor;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] > floor) sum += std::sqrt(es.eigenvalues()[i]);
  return sum * sum;
}

double fidelity_with_pure(const RealState& psi, const DensityMatrix& rho) {
  if (psi.dim() != rho.dim()) throw std::invalid_argument("fidelity_with_pure: dimension mismatch");
  Eigen::VectorXcd v(psi.dim());
  for (std::size_t j = 0; j < psi.dim(); ++j) v[j] = psi.amplitudes[j];
  return (v.adjoint() * rho.mat * v)(0, 0).real();
}

Eigen::MatrixXcd partial_transpose(const Eigen::MatrixXcd& m, int n_qubits,
                                   int n_qubits_a) {
  if (n_qubits_a < 0 || n_qubits_a > n_qubits)
    throw std::invalid_argument("partial_transpose: invalid subsystem size");
  const std::uint64_t db = 1ULL << (n_qubits - n_qubits_a);
  const std::uint64_t da = 1ULL << n_qubits_a;
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (std::uint64_t ra = 0; ra < da; ++ra)
    for (std::uint64_t ca = 0; ca < da; ++ca)
      for (std::uint64_t rb = 0; rb < db; ++rb)
        for (std::uint64_t cb = 0; cb < db; ++cb)
          out(ra * db + rb, ca * db + cb) = m(ca * db + rb, ra * db + cb);
  return out;
}

double log_negativity(const DensityMatrix& rho, const BipartiteSplit& split) {
  const Eigen::MatrixXcd pt = partial_transpose(rho.mat, rho.n_qubits, split.n_qubits_a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (pt + pt.adjoint()));
  const double trace_norm = es.eigenvalues().cwiseAbs().sum();
  return std::max(0.0, std::log2(trace_norm));
}

double stabilizer_entropy(const RealState& state, double alpha, bool allow_large) {
  if (std::abs(alpha - 1.0) < 1e-12)
    throw std::invalid_argument("stabilizer_entropy: alpha = 1 is excluded");
  if (state.n_qubits > 8 && !allow_large)
    throw std::domain_error(
        "stabilizer_entropy: 4^n sum over 8 qubits is expensive; pass allow_large");
  if (!state.is_normalized(1e-8))
    throw std::invalid_argument("stabilizer_entropy: state is not normalized");

  const std::uint64_t dim = state.dim();
  const std::vector<double>& psi = state.amplitudes;
  double moment_sum = 0.0;
  for (std::uint64_t x_mask = 0; x_mask < dim; ++x_mask) {
    for (std::uint64_t z_mask = 0; z_mask < dim; ++z_mask) {
      const int y_count = std::popcount(x_mask & z_mask);
      if (y_count & 1) continue;  // vanishes for real amplitudes
      double expectation = 0.0;
      for (std::uint64_t col = 0; col < dim; ++col) {
        const double term = psi[col ^ x_mask] * psi[col];
        expectation += std::popcount(col & z_mask) & 1 ? -term : term;
      }
      if (y_count & 2) expectation = -expectation;  // i^y = -1 for y = 2 mod 4
      moment_sum += std::pow(expectation * expectation, alpha);
    }
  }
  const double normalized = moment_sum / static_cast<double>(dim);
  return std::log2(normalized) / (1.0 - alpha);
}

PathIndexState circle_path(int n_qubits) {
  if (n_qubits < 2 || n_qubits % 2 != 0)
    throw std::invalid_argument("circle_path: n_qubits must be even and >= 2");
  const int side = 1 << (n_qubits / 2);

  std::vector<std::uint64_t> path;
  if (n_qubits == 4) {
    path = {1, 2, 7, 11, 14, 13, 8, 4};
  } else {
    const double center = (side - 1) / 2.0;
    const double radius = side / 2 - 1;
    const int steps = 64 * side;
    std::vector<char> seen(static_cast<std::size_t>(side) * side, 0);
    for (int t = 0; t < steps; ++t) {
      const double theta = 2.0 * std::numbers::pi * t / steps;
      const auto row = std::lround(center + radius * std::sin(theta));
      const auto col = std::lround(center + radius * std::cos(theta));
      const std::uint64_t cell = static_cast<std::uint64_t>(row) * side + col;
      if (!seen[cell]) {
        seen[cell] = 1;
        path.push_back(cell);
      }
    }
  }

  PathIndexState index;
  index.n_qubits = n_qubits;
  index.side = side;
  index.path = path;
  std::vector<double> amps(1ULL << n_qubits, 0.0);
  const double amp = 1.0 / std::sqrt(static_cast<double>(path.size()));
  for (std::uint64_t cell : path) amps.at(cell) = amp;
  index.state = RealState(n_qubits, std::move(amps));
  return index;
}

double overlap(const RealState& state, const PathIndexState& index) {
  return state_fidelity(state, index.state);
}

double swap_test(const RealState& a, const RealState& b, long long shots,
                 const NoiseModel& noise, std::uint64_t seed) {
  if (a.n_qubits != b.n_qubits) throw std::invalid_argument("swap_test: qubit counts differ");
  if (shots < 1) throw std::invalid_argument("swap_test: shots must be >= 1");

  double p0 = 0.5 * (1.0 + state_fidelity(a, b));
  if (noise.two_qubit_depol) {
    // One controlled-SWAP per qubit pair, about 8 two-qubit gates each after
    // transpilation.
    const double lambda = depol_mix_weight(*noise.two_qubit_depol, 8 * a.n_qubits);
    p0 = (1.0 - lambda) * p0 + lambda * 0.5;
  }
  if (!noise.readout.empty()) {
    const auto& r = noise.readout.front();
    p0 = p0 * (1.0 - r.p01) + (1.0 - p0) * r.p10;
  }

  auto rng = make_rng(seed);
  long long zeros = 0;
  for (long long s = 0; s < shots; ++s)
    if (uniform01(rng) < p0) ++zeros;
  const double estimate = 2.0 * static_cast<double>(zeros) / static_cast<double>(shots) - 1.0;
  return std::clamp(estimate, 0.0, 1.0);
}

}  // namespace hrf
