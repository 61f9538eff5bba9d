#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <set>

#include "hrf/fqst.hpp"
#include "hrf/rng.hpp"
#include "test_oracles.hpp"

using hrf::DensityMatrix;
using hrf::NoiseModel;
using hrf::PauliBasis;
using hrf::PauliSetting;
using hrf::RealState;

namespace {

// Independent rotation route: dense H / H S-dagger matrices applied to the
// complex statevector.
std::vector<double> dense_setting_probs(const RealState& state,
                                        const PauliSetting& setting) {
  using namespace std::complex_literals;
  const int n = state.n_qubits;
  Eigen::MatrixXcd h(2, 2), hsdg(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  hsdg << s, -1i * s, s, 1i * s;

  Eigen::VectorXcd psi(state.dim());
  for (std::size_t j = 0; j < state.dim(); ++j) psi[j] = state.amplitudes[j];
  for (int q = 0; q < n; ++q) {
    if (setting.bases[q] == PauliBasis::Z) continue;
    const Eigen::MatrixXcd gate = setting.bases[q] == PauliBasis::X ? h : hsdg;
    psi = (oracle::embed<Eigen::MatrixXcd>(gate, n, q) * psi).eval();
  }
  std::vector<double> probs(state.dim());
  for (std::size_t j = 0; j < state.dim(); ++j) probs[j] = std::norm(psi[j]);
  return probs;
}

std::vector<std::vector<double>> exact_setting_probs(
    const RealState& state, const std::vector<PauliSetting>& settings) {
  std::vector<std::vector<double>> probs;
  probs.reserve(settings.size());
  for (const auto& setting : settings) probs.push_back(dense_setting_probs(state, setting));
  return probs;
}

}  // namespace

TEST_CASE("setting enumeration is lexicographic and complete") {
  const auto one = hrf::enumerate_settings(1);
  REQUIRE(one.size() == 3);
  CHECK(one[0].label() == "PX");
  CHECK(one[1].label() == "PY");
  CHECK(one[2].label() == "PZ");

  const auto two = hrf::enumerate_settings(2);
  CHECK(two.size() == 9);
  std::set<std::string> labels;
  for (const auto& s : two) labels.insert(s.label());
  CHECK(labels.size() == 9);
  CHECK(two.front().label() == "PXX");
  CHECK(two.back().label() == "PZZ");

  CHECK(hrf::enumerate_settings(5).size() == 243);

  CHECK(PauliSetting::from_label("PXYZ").label() == "PXYZ");
  CHECK_THROWS_AS(PauliSetting::from_label("XYZ"), std::invalid_argument);
  CHECK_THROWS_AS(PauliSetting::from_label("PQ"), std::invalid_argument);
}

TEST_CASE("all-Z settings reduce to computational-basis statistics") {
  const RealState state = oracle::random_real_state(3, 404);
  const auto probs =
      hrf::setting_probabilities(state, PauliSetting::from_label("PZZZ"));
  const auto z = hrf::exact_probabilities(state, hrf::MeasurementSetting::z_basis());
  for (std::size_t j = 0; j < probs.size(); ++j)
    CHECK(probs[j] == doctest::Approx(z[j]));
}

TEST_CASE("an X measurement on the plus state is deterministic") {
  const RealState plus(1, {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)});
  const auto counts =
      hrf::measure_setting(plus, PauliSetting::from_label("PX"), 1000,
                           NoiseModel::none(1), 99);
  CHECK(counts.counts.at(0) == 1000);
  CHECK(counts.setting == "PX");
}

TEST_CASE("Y statistics of real states are unbiased coin flips") {
  const RealState state = oracle::random_real_state(1, 1234);
  const auto probs = hrf::setting_probabilities(state, PauliSetting::from_label("PY"));
  CHECK(probs[0] == doctest::Approx(0.5));
  CHECK(probs[1] == doctest::Approx(0.5));

  // sampled sigma_y expectation vanishes within the shot tolerance
  const long long shots = 40'000;
  const auto counts = hrf::measure_setting(state, PauliSetting::from_label("PY"), shots,
                                           NoiseModel::none(1), 7);
  const auto freq = counts.frequencies();
  CHECK(std::abs(freq[0] - freq[1]) <= 4.0 / std::sqrt(static_cast<double>(shots)));

  // dense-matrix oracle agrees on a 3-qubit marginal
  const RealState big = oracle::random_real_state(3, 88);
  Eigen::VectorXcd psi(8);
  for (int j = 0; j < 8; ++j) psi[j] = big.amplitudes[j];
  const Eigen::MatrixXcd sigma_y =
      oracle::embed<Eigen::MatrixXcd>(oracle::pauli_gate(2), 3, 1);
  const std::complex<double> expectation = psi.adjoint() * sigma_y * psi;
  CHECK(std::abs(expectation) < 1e-12);
}

TEST_CASE("rotation route agrees with the dense oracle") {
  const RealState state = oracle::random_real_state(3, 9001);
  for (const auto& setting : hrf::enumerate_settings(3)) {
    const auto ours = hrf::setting_probabilities(state, setting);
    const auto expected = dense_setting_probs(state, setting);
    for (std::size_t j = 0; j < ours.size(); ++j)
      CHECK(std::abs(ours[j] - expected[j]) < 1e-12);
  }
}

TEST_CASE("linear inversion of exact ground-state statistics") {
  const RealState zero(1, {1.0, 0.0});
  const auto settings = hrf::enumerate_settings(1);
  const auto rho =
      hrf::linear_inversion_from_probs(1, settings, exact_setting_probs(zero, settings));
  CHECK(std::abs(rho.mat(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(rho.mat(0, 1)) < 1e-12);
  CHECK(std::abs(rho.mat(1, 1)) < 1e-12);
}

TEST_CASE("linear inversion recovers exact two-qubit states") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RealState state = oracle::random_real_state(2, 7000 + seed);
    const auto settings = hrf::enumerate_settings(2);
    const auto rho = hrf::linear_inversion_from_probs(
        2, settings, exact_setting_probs(state, settings));
    const auto expected = hrf::to_density(state);
    CHECK((rho.mat - expected.mat).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("exact round trip holds through three qubits") {
  for (int n = 1; n <= 3; ++n) {
    const RealState state = oracle::random_real_state(n, 41 + n);
    const auto settings = hrf::enumerate_settings(n);
    const auto rho = hrf::linear_inversion_from_probs(
        n, settings, exact_setting_probs(state, settings));
    const auto expected = hrf::to_density(state);
    CHECK((rho.mat - expected.mat).norm() < 1e-9);  // Frobenius
  }
}

TEST_CASE("finite-shot estimates are Hermitian with unit trace") {
  const RealState state = oracle::random_real_state(2, 3333);
  const auto settings = hrf::enumerate_settings(2);
  std::vector<hrf::CountTable> tables;
  for (std::size_t t = 0; t < settings.size(); ++t)
    tables.push_back(hrf::measure_setting(state, settings[t], 500, NoiseModel::none(2),
                                          hrf::derive_seed(5, t)));
  const auto rho = hrf::linear_inversion(tables);
  CHECK(hrf::is_hermitian(rho.mat, 1e-12));
  CHECK(std::abs(rho.mat.trace().real() - 1.0) < 1e-12);

  // the estimate may be indefinite; projection must repair it
  const auto projected = hrf::project_physical(rho);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(projected.mat);
  CHECK(es.eigenvalues().minCoeff() >= -1e-9);
  CHECK(std::abs(projected.mat.trace().real() - 1.0) < 1e-9);
}

TEST_CASE("missing or duplicate settings are reported") {
  const RealState state = oracle::random_real_state(2, 14);
  auto settings = hrf::enumerate_settings(2);
  auto probs = exact_setting_probs(state, settings);

  auto missing_settings = settings;
  auto missing_probs = probs;
  missing_settings.pop_back();
  missing_probs.pop_back();
  CHECK_THROWS_AS(hrf::linear_inversion_from_probs(2, missing_settings, missing_probs),
                  std::invalid_argument);

  auto duplicate_settings = settings;
  duplicate_settings[1] = duplicate_settings[0];
  CHECK_THROWS_AS(hrf::linear_inversion_from_probs(2, duplicate_settings, probs),
                  std::invalid_argument);
}

TEST_CASE("projection fixes a hand-checkable indefinite matrix") {
  DensityMatrix rho;
  rho.n_qubits = 1;
  rho.mat = Eigen::MatrixXcd::Zero(2, 2);
  rho.mat(0, 0) = 1.2;
  rho.mat(1, 1) = -0.2;
  const auto projected = hrf::project_physical(rho);
  CHECK(std::abs(projected.mat(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(projected.mat(1, 1)) < 1e-12);
  CHECK(std::abs(projected.mat(0, 1)) < 1e-12);
}

TEST_CASE("projection is the identity on physical states and idempotent") {
  const auto rho = hrf::to_density(oracle::random_real_state(3, 77));
  const auto projected = hrf::project_physical(rho);
  CHECK((projected.mat - rho.mat).cwiseAbs().maxCoeff() < 1e-10);

  DensityMatrix indefinite;
  indefinite.n_qubits = 2;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Random(4, 4);
  m = 0.5 * (m + m.adjoint()).eval();
  m /= m.trace().real();
  indefinite.mat = m;
  const auto once = hrf::project_physical(indefinite);
  const auto twice = hrf::project_physical(once);
  CHECK((once.mat - twice.mat).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("projection picks the closest diagonal clipping") {
  // brute force over the keep-top-r-and-shift family in the same eigenbasis
  auto rng = hrf::make_rng(404);
  for (int rep = 0; rep < 10; ++rep) {
    const int d = 4;
    Eigen::VectorXd lam(d);
    double trace = 0.0;
    for (int i = 0; i < d; ++i) {
      lam[i] = hrf::uniform01(rng) - 0.4;
      trace += lam[i];
    }
    lam.array() += (1.0 - trace) / d;  // unit trace, possibly indefinite

    DensityMatrix rho;
    rho.n_qubits = 2;
    rho.mat = lam.cast<std::complex<double>>().asDiagonal();
    const auto projected = hrf::project_physical(rho);

    Eigen::VectorXd ours(d);
    for (int i = 0; i < d; ++i) ours[i] = projected.mat(i, i).real();
    const double our_distance = (ours - lam).squaredNorm();

    std::vector<int> order(d);
    for (int i = 0; i < d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return lam[a] > lam[b]; });
    double best = 1e18;
    for (int keep = 1; keep <= d; ++keep) {
      double kept_sum = 0.0;
      for (int i = 0; i < keep; ++i) kept_sum += lam[order[i]];
      const double shift = (1.0 - kept_sum) / keep;
      Eigen::VectorXd candidate = Eigen::VectorXd::Zero(d);
      bool valid = true;
      for (int i = 0; i < keep; ++i) {
        candidate[order[i]] = lam[order[i]] + shift;
        if (candidate[order[i]] < 0.0) valid = false;
      }
      if (valid) best = std::min(best, (candidate - lam).squaredNorm());
    }
    CHECK(our_distance <= best + 1e-12);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(projected.mat);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    CHECK(std::abs(projected.mat.trace().real() - 1.0) < 1e-12);
  }
}

TEST_CASE("noisy measurement wiring applies depolarizing and readout noise") {
  const RealState plus(1, {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)});
  NoiseModel noise = NoiseModel::none(1);
  noise.two_qubit_depol = 0.5;
  // depolarizing mix with 1 gate moves the X outcome off certainty
  const auto counts = hrf::measure_setting(plus, PauliSetting::from_label("PX"),
                                           100'000, noise, 5, 1);
  const double f1 = counts.frequencies()[1];
  CHECK(f1 > 0.2);
  CHECK(f1 < 0.3);
}
