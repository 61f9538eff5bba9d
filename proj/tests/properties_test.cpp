#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <set>

#include "hrf/properties.hpp"
#include "hrf/rng.hpp"
#include "test_oracles.hpp"

using hrf::BipartiteSplit;
using hrf::DensityMatrix;
using hrf::NoiseModel;
using hrf::RealState;

namespace {

// Full-sum oracle over all 4^n dense Pauli strings, odd-Y terms included.
double dense_stabilizer_entropy(const RealState& state, double alpha) {
  const int n = state.n_qubits;
  Eigen::VectorXcd psi(state.dim());
  for (std::size_t j = 0; j < state.dim(); ++j) psi[j] = state.amplitudes[j];

  double sum = 0.0;
  std::vector<int> digits(n, 0);
  const std::uint64_t total = 1ULL << (2 * n);
  for (std::uint64_t s = 0; s < total; ++s) {
    std::uint64_t rest = s;
    for (int q = 0; q < n; ++q) {
      digits[q] = rest & 3;
      rest >>= 2;
    }
    const Eigen::MatrixXcd sigma = oracle::pauli_string_matrix(digits);
    const std::complex<double> expectation = psi.adjoint() * sigma * psi;
    sum += std::pow(expectation.real() * expectation.real(), alpha);
  }
  const double normalized = sum / static_cast<double>(state.dim());
  return std::log2(normalized) / (1.0 - alpha);
}

}  // namespace

TEST_CASE("fidelity of identical and overlapping pure states") {
  const auto rho = hrf::to_density(oracle::random_real_state(2, 10));
  CHECK(hrf::fidelity(rho, rho) == doctest::Approx(1.0));

  const auto zero = hrf::to_density(RealState(1, {1.0, 0.0}));
  const auto plus =
      hrf::to_density(RealState(1, {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}));
  CHECK(hrf::fidelity(zero, plus) == doctest::Approx(0.5));
}

TEST_CASE("Uhlmann fidelity reduces to the squared overlap for pure pairs") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RealState a = oracle::random_real_state(3, 600 + seed);
    const RealState b = oracle::random_real_state(3, 700 + seed);
    const double expected = hrf::state_fidelity(a, b);
    const double via_density = hrf::fidelity(hrf::to_density(a), hrf::to_density(b));
    CHECK(std::abs(via_density - expected) < 1e-9);
    // symmetry
    CHECK(std::abs(hrf::fidelity(hrf::to_density(b), hrf::to_density(a)) - via_density) <
          1e-9);
    CHECK(std::abs(hrf::fidelity_with_pure(a, hrf::to_density(b)) - expected) < 1e-9);
  }
}

TEST_CASE("fidelity rejects non-positive inputs") {
  DensityMatrix bad;
  bad.n_qubits = 1;
  bad.mat = Eigen::MatrixXcd::Zero(2, 2);
  bad.mat(0, 0) = 1.5;
  bad.mat(1, 1) = -0.5;
  const auto good = hrf::to_density(RealState(1, {1.0, 0.0}));
  CHECK_THROWS_AS(hrf::fidelity(bad, good), std::invalid_argument);
  CHECK_THROWS_AS(hrf::fidelity(good, bad), std::invalid_argument);
}

TEST_CASE("log-negativity of product and Bell states") {
  const auto product = hrf::to_density(RealState(2, {1.0, 0.0, 0.0, 0.0}));
  CHECK(hrf::log_negativity(product, BipartiteSplit::half(2)) == doctest::Approx(0.0));

  const double s = 1.0 / std::sqrt(2.0);
  const auto bell = hrf::to_density(RealState(2, {s, 0.0, 0.0, s}));
  CHECK(hrf::log_negativity(bell, BipartiteSplit::half(2)) == doctest::Approx(1.0));

  // brute-force oracle: the partially transposed Bell projector has
  // eigenvalues {1/2, 1/2, 1/2, -1/2}, so the trace norm is 2
  Eigen::MatrixXcd pt = Eigen::MatrixXcd::Zero(4, 4);
  pt(0, 0) = pt(3, 3) = 0.5;  // diagonal survives transposition
  pt(1, 2) = pt(2, 1) = 0.5;  // coherences move onto the anti-diagonal block
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt);
  double trace_norm = es.eigenvalues().cwiseAbs().sum();
  CHECK(std::log2(trace_norm) == doctest::Approx(1.0));
  CHECK((hrf::partial_transpose(bell.mat, 2, 1) - pt).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("product states across the half split have zero negativity") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RealState a = oracle::random_real_state(2, 30 + seed);
    const RealState b = oracle::random_real_state(2, 60 + seed);
    std::vector<double> amps;
    for (double x : a.amplitudes)
      for (double y : b.amplitudes) amps.push_back(x * y);
    const auto rho = hrf::to_density(RealState(4, std::move(amps)));
    CHECK(hrf::log_negativity(rho, BipartiteSplit::half(4)) < 1e-9);
  }
}

TEST_CASE("stabilizer entropy of stabilizer states vanishes") {
  CHECK(hrf::stabilizer_entropy(RealState(1, {1.0, 0.0}), 2.0) == doctest::Approx(0.0));
  CHECK(hrf::stabilizer_entropy(RealState::basis(3, 5), 2.0) ==
        doctest::Approx(0.0).epsilon(1e-9));
  // the 4-qubit ring index state is a stabilizer state
  const auto index = hrf::circle_path(4);
  CHECK(std::abs(hrf::stabilizer_entropy(index.state, 2.0)) < 1e-9);
}

TEST_CASE("single-qubit magic matches the dense Pauli oracle") {
  hrf::PrepCircuit circuit{1, 1, {{std::numbers::pi / 4}, {0.0}}};
  const RealState state = hrf::prepare_ansatz(circuit);
  const double ours = hrf::stabilizer_entropy(state, 2.0);
  const double expected = dense_stabilizer_entropy(state, 2.0);
  CHECK(std::abs(ours - expected) < 1e-9);
  CHECK(ours > 0.0);
}

TEST_CASE("skipping odd-Y strings does not change the sum") {
  for (int n = 1; n <= 3; ++n) {
    const RealState state = oracle::random_real_state(n, 900 + n);
    for (double alpha : {2.0, 3.0}) {
      const double ours = hrf::stabilizer_entropy(state, alpha);
      const double full = dense_stabilizer_entropy(state, alpha);
      CHECK(std::abs(ours - full) < 1e-9);
      CHECK(ours >= -1e-12);
    }
  }
}

TEST_CASE("stabilizer entropy guards") {
  const RealState state = oracle::random_real_state(2, 1);
  CHECK_THROWS_AS(hrf::stabilizer_entropy(state, 1.0), std::invalid_argument);
  const RealState big = oracle::random_real_state(9, 2);
  CHECK_THROWS_AS(hrf::stabilizer_entropy(big, 2.0), std::domain_error);
}

TEST_CASE("the 4-qubit ring matches the fixed cell list") {
  const auto index = hrf::circle_path(4);
  CHECK(index.side == 4);
  const std::set<std::uint64_t> cells(index.path.begin(), index.path.end());
  CHECK(cells == std::set<std::uint64_t>{1, 2, 4, 7, 8, 11, 13, 14});
  const double amp = 1.0 / (2.0 * std::sqrt(2.0));
  for (std::uint64_t cell : cells)
    CHECK(index.state.amplitudes[cell] == doctest::Approx(amp));
  CHECK(index.state.is_normalized(1e-12));
}

TEST_CASE("larger rings are closed 8-connected loops") {
  for (int n : {6, 8}) {
    const auto index = hrf::circle_path(n);
    const int side = index.side;
    CHECK(index.state.is_normalized(1e-12));
    const std::set<std::uint64_t> cells(index.path.begin(), index.path.end());
    CHECK(cells.size() == index.path.size());
    for (std::uint64_t cell : cells) {
      const long row = static_cast<long>(cell) / side;
      const long col = static_cast<long>(cell) % side;
      int neighbors = 0;
      for (long dr = -1; dr <= 1; ++dr)
        for (long dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const long r = row + dr, c = col + dc;
          if (r < 0 || c < 0 || r >= side || c >= side) continue;
          if (cells.count(static_cast<std::uint64_t>(r) * side + c)) ++neighbors;
        }
      CHECK(neighbors >= 2);
    }
  }
  CHECK_THROWS_AS(hrf::circle_path(5), std::invalid_argument);
}

TEST_CASE("path overlap is the normalized path sum") {
  const auto index = hrf::circle_path(4);
  CHECK(hrf::overlap(index.state, index) == doctest::Approx(1.0));

  // a state supported off the path is orthogonal
  CHECK(hrf::overlap(RealState::basis(4, 0), index) == doctest::Approx(0.0));

  const RealState state = oracle::random_real_state(4, 512);
  double path_sum = 0.0;
  for (std::uint64_t cell : index.path) path_sum += state.amplitudes[cell];
  const double direct = std::pow(path_sum / (2.0 * std::sqrt(2.0)), 2.0);
  CHECK(std::abs(hrf::overlap(state, index) - direct) < 1e-12);
  CHECK(hrf::overlap(state, index) ==
        doctest::Approx(hrf::state_fidelity(state, index.state)));
}

TEST_CASE("swap test estimates converge to the true overlap") {
  const RealState a = oracle::random_real_state(3, 41);
  const RealState b = oracle::random_real_state(3, 42);
  const double truth = hrf::state_fidelity(a, b);

  CHECK(hrf::swap_test(a, a, 2'000'000, NoiseModel::none(3), 3) ==
        doctest::Approx(1.0).epsilon(2e-3));

  const RealState e0 = RealState::basis(2, 0);
  const RealState e1 = RealState::basis(2, 3);
  const long long ortho_shots = 100'000;
  CHECK(hrf::swap_test(e0, e1, ortho_shots, NoiseModel::none(2), 5) <=
        2.0 / std::sqrt(static_cast<double>(ortho_shots)));

  // error shrinks as 1/sqrt(shots) across three shot levels
  for (long long shots : {1'000LL, 10'000LL, 100'000LL}) {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const double estimate = hrf::swap_test(a, b, shots, NoiseModel::none(3), seed);
      worst = std::max(worst, std::abs(estimate - truth));
    }
    CHECK(worst <= 5.0 / std::sqrt(static_cast<double>(shots)));
  }

  CHECK_THROWS_AS(hrf::swap_test(a, e0, 100, NoiseModel::none(3), 1),
                  std::invalid_argument);
}

TEST_CASE("noise degrades the swap test toward a coin flip") {
  const RealState a = oracle::random_real_state(4, 90);
  NoiseModel noise = NoiseModel::none(4);
  noise.two_qubit_depol = 0.02;  // 32 effective gates push lambda near 0.5
  const double noisy = hrf::swap_test(a, a, 500'000, noise, 17);
  CHECK(noisy < 0.9);
  CHECK(noisy > 0.2);
}
