#include "hrf/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hrf/rng.hpp"
#include "hrf/state.hpp"

namespace hrf {

namespace {

int qubits_from_dim(std::size_t dim) {
  if (dim == 0 || !std::has_single_bit(dim))
    throw std::invalid_argument("probability vector length must be a power of two");
  return std::countr_zero(dim);
}

void check_noise(const NoiseModel& noise, int n_qubits) {
  if (static_cast<int>(noise.readout.size()) != n_qubits)
    throw std::invalid_argument("NoiseModel: readout entries must match qubit count");
  for (const auto& r : noise.readout)
    if (r.p01 < 0.0 || r.p01 > 1.0 || r.p10 < 0.0 || r.p10 > 1.0)
      throw std::invalid_argument("NoiseModel: probabilities must lie in [0, 1]");
  if (noise.two_qubit_depol && (*noise.two_qubit_depol < 0.0 || *noise.two_qubit_depol > 1.0))
    throw std::invalid_argument("NoiseModel: two_qubit_depol must lie in [0, 1]");
}

}  // namespace

std::vector<double> CountTable::frequencies() const {
  std::vector<double> freq(1ULL << n_qubits, 0.0);
  for (const auto& [index, c] : counts) freq.at(index) += static_cast<double>(c);
  for (double& f : freq) f /= static_cast<double>(shots);
  return freq;
}

long long CountTable::total() const {
  long long t = 0;
  for (const auto& [index, c] : counts) t += c;
  return t;
}

nlohmann::json CountTable::to_json() const {
  nlohmann::json j;
  j["setting"] = setting;
  j["shots"] = shots;
  nlohmann::json obj = nlohmann::json::object();
  for (const auto& [index, c] : counts) obj[index_to_bitstring(index, n_qubits)] = c;
  j["counts"] = std::move(obj);
  return j;
}

CountTable CountTable::from_json(const nlohmann::json& j) {
  CountTable table;
  table.setting = j.at("setting").get<std::string>();
  table.shots = j.at("shots").get<long long>();
  const auto& obj = j.at("counts");
  if (obj.empty()) throw std::invalid_argument("CountTable: empty counts object");
  table.n_qubits = static_cast<int>(obj.begin().key().size());
  long long total = 0;
  for (const auto& [bits, c] : obj.items()) {
    if (static_cast<int>(bits.size()) != table.n_qubits)
      throw std::invalid_argument("CountTable: inconsistent bitstring length");
    const long long count = c.get<long long>();
    if (count < 0) throw std::invalid_argument("CountTable: negative count");
    table.counts[bitstring_to_index(bits)] = count;
    total += count;
  }
  if (total != table.shots) throw std::invalid_argument("CountTable: counts do not sum to shots");
  return table;
}

bool NoiseModel::has_readout_error() const {
  for (const auto& r : readout)
    if (r.p01 > 0.0 || r.p10 > 0.0) return true;
  return false;
}

NoiseModel NoiseModel::readout_only() const {
  NoiseModel m = *this;
  m.two_qubit_depol.reset();
  return m;
}

NoiseModel NoiseModel::none(int n_qubits) {
  NoiseModel m;
  m.readout.assign(n_qubits, QubitReadout{});
  return m;
}

NoiseModel NoiseModel::symmetric(int n_qubits, double eps) {
  NoiseModel m;
  m.readout.assign(n_qubits, QubitReadout{eps, eps});
  return m;
}

const std::vector<QubitCalibration>& table1_calibration() {
  static const std::vector<QubitCalibration> data = {
      {184.0, 101.0, 4.64e-3, 2.74e-3},
      {188.0, 237.0, 4.88e-3, 2.69e-3},
      {216.0, 173.0, 4.39e-3, 3.02e-3},
      {171.0, 248.0, 6.34e-3, 3.35e-3},
      {142.0, 111.0, 1.56e-2, 3.35e-3},
      {197.0, 31.0, 5.62e-3, 3.48e-3},
      {170.0, 152.0, 9.28e-3, 5.54e-3},
      {140.0, 138.0, 4.15e-3, 3.42e-3},
      {154.0, 111.0, 1.29e-2, 3.65e-3},
      {98.0, 57.0, 4.64e-3, std::nullopt},
  };
  return data;
}

NoiseModel table1_noise(int n_qubits) {
  const auto& cal = table1_calibration();
  double eps_sum = 0.0;
  double eps_2q_sum = 0.0;
  int eps_2q_count = 0;
  for (const auto& q : cal) {
    eps_sum += q.eps_readout;
    if (q.eps_2q) {
      eps_2q_sum += *q.eps_2q;
      ++eps_2q_count;
    }
  }
  const double eps_avg = eps_sum / static_cast<double>(cal.size());

  NoiseModel m;
  m.readout.resize(n_qubits);
  for (int q = 0; q < n_qubits; ++q) {
    const double eps = q < static_cast<int>(cal.size()) ? cal[q].eps_readout : eps_avg;
    m.readout[q] = {eps, eps};
  }
  m.two_qubit_depol = eps_2q_sum / static_cast<double>(eps_2q_count);
  return m;
}

AssignmentMatrix AssignmentMatrix::identity(int n_qubits) {
  AssignmentMatrix a;
  a.per_qubit.assign(n_qubits, {{{1.0, 0.0}, {0.0, 1.0}}});
  return a;
}

AssignmentMatrix AssignmentMatrix::from_noise(const NoiseModel& noise) {
  AssignmentMatrix a;
  a.per_qubit.reserve(noise.readout.size());
  for (const auto& r : noise.readout)
    a.per_qubit.push_back({{{1.0 - r.p01, r.p10}, {r.p01, 1.0 - r.p10}}});
  return a;
}

CountTable sample_counts(std::span<const double> probs, long long shots,
                         std::uint64_t seed, std::string setting_label) {
  if (shots < 1) throw std::invalid_argument("sample_counts: shots must be >= 1");
  const int n_qubits = qubits_from_dim(probs.size());

  std::vector<double> p(probs.begin(), probs.end());
  double sum = 0.0;
  for (double& v : p) {
    if (v < -1e-12) throw std::invalid_argument("sample_counts: negative probability");
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-8)
    throw std::invalid_argument("sample_counts: probabilities must sum to 1");

  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i] / sum;
    cdf[i] = acc;
  }
  cdf.back() = 1.0;

  CountTable table;
  table.setting = std::move(setting_label);
  table.n_qubits = n_qubits;
  table.shots = shots;
  auto rng = make_rng(seed);
  for (long long s = 0; s < shots; ++s) {
    const double u = uniform01(rng);
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto index = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
    ++table.counts[index];
  }
  return table;
}

CountTable apply_readout_noise(const CountTable& counts, const NoiseModel& noise,
                               std::uint64_t seed) {
  check_noise(noise, counts.n_qubits);
  if (!noise.has_readout_error()) return counts;

  CountTable out;
  out.setting = counts.setting;
  out.n_qubits = counts.n_qubits;
  out.shots = counts.shots;
  auto rng = make_rng(seed);
  for (const auto& [index, c] : counts.counts) {
    for (long long s = 0; s < c; ++s) {
      std::uint64_t observed = index;
      for (int q = 0; q < counts.n_qubits; ++q) {
        const std::uint64_t mask = 1ULL << qubit_to_bit(counts.n_qubits, q);
        const auto& r = noise.readout[q];
        const double p = (index & mask) ? r.p10 : r.p01;
        if (p > 0.0 && uniform01(rng) < p) observed ^= mask;
      }
      ++out.counts[observed];
    }
  }
  return out;
}

std::vector<double> mitigate_readout(const CountTable& counts,
                                     const AssignmentMatrix& assign) {
  if (static_cast<int>(assign.per_qubit.size()) != counts.n_qubits)
    throw std::invalid_argument("mitigate_readout: assignment matrix qubit count mismatch");

  std::vector<double> freq = counts.frequencies();
  for (int q = 0; q < counts.n_qubits; ++q) {
    const auto& a = assign.per_qubit[q];
    const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if (std::abs(det) < 1e-9)
      throw std::runtime_error("mitigate_readout: singular assignment matrix");
    const double inv00 = a[1][1] / det;
    const double inv01 = -a[0][1] / det;
    const double inv10 = -a[1][0] / det;
    const double inv11 = a[0][0] / det;

    const std::uint64_t stride = 1ULL << qubit_to_bit(counts.n_qubits, q);
    for (std::uint64_t base = 0; base < freq.size(); base += 2 * stride) {
      for (std::uint64_t j = base; j < base + stride; ++j) {
        const double v0 = freq[j];
        const double v1 = freq[j + stride];
        freq[j] = inv00 * v0 + inv01 * v1;
        freq[j + stride] = inv10 * v0 + inv11 * v1;
      }
    }
  }

  double sum = 0.0;
  for (double& f : freq) {
    if (f < 0.0) f = 0.0;
    sum += f;
  }
  if (sum <= 0.0) throw std::runtime_error("mitigate_readout: clipped distribution is empty");
  for (double& f : freq) f /= sum;
  return freq;
}

double depol_mix_weight(double eps_2q, int n_gates) {
  if (eps_2q < 0.0 || eps_2q > 1.0)
    throw std::invalid_argument("depol_mix_weight: eps_2q must lie in [0, 1]");
  if (n_gates < 0) throw std::invalid_argument("depol_mix_weight: n_gates must be >= 0");
  return 1.0 - std::pow(1.0 - eps_2q, n_gates);
}

std::vector<double> mix_with_uniform(std::span<const double> probs, double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("mix_with_uniform: lambda must lie in [0, 1]");
  const double uniform = 1.0 / static_cast<double>(probs.size());
  std::vector<double> out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i)
    out[i] = (1.0 - lambda) * probs[i] + lambda * uniform;
  return out;
}

}  // namespace hrf
