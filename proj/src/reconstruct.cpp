#include "hrf/reconstruct.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hrf {

namespace {

double vector_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

void check_prob_vector(const std::vector<double>& v, std::uint64_t dim,
                       const char* what) {
  if (v.size() != dim) throw std::invalid_argument(std::string(what) + ": length mismatch");
  if (std::abs(vector_sum(v) - 1.0) > 1e-8)
    throw std::invalid_argument(std::string(what) + ": probabilities must sum to 1");
}

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

}  // namespace

EdgeSignOracle EdgeSignOracle::from_probs(int n_qubits, std::vector<double> z,
                                          std::vector<std::vector<double>> xs) {
  if (n_qubits < 1) throw std::invalid_argument("EdgeSignOracle: n_qubits must be >= 1");
  const std::uint64_t dim = 1ULL << n_qubits;
  check_prob_vector(z, dim, "EdgeSignOracle z_probs");
  if (static_cast<int>(xs.size()) != n_qubits)
    throw std::invalid_argument("EdgeSignOracle: expected one X vector per qubit");
  for (const auto& x : xs) check_prob_vector(x, dim, "EdgeSignOracle x_probs");
  return {n_qubits, std::move(z), std::move(xs)};
}

EdgeSignOracle EdgeSignOracle::from_counts(const CountTable& z_counts,
                                           const std::vector<CountTable>& x_counts) {
  if (z_counts.setting != "Z")
    throw std::invalid_argument("EdgeSignOracle: missing Z-basis table");
  const int n = z_counts.n_qubits;
  if (static_cast<int>(x_counts.size()) != n)
    throw std::invalid_argument("EdgeSignOracle: expected exactly n_qubits X tables");

  std::vector<std::vector<double>> xs(n);
  std::vector<bool> present(n, false);
  for (const auto& table : x_counts) {
    if (table.n_qubits != n)
      throw std::invalid_argument("EdgeSignOracle: table dimension mismatch");
    if (table.shots != z_counts.shots)
      throw std::invalid_argument("EdgeSignOracle: inconsistent shot counts");
    if (table.setting.size() < 2 || table.setting[0] != 'X')
      throw std::invalid_argument("EdgeSignOracle: unexpected setting label '" +
                                  table.setting + "'");
    const int k = std::stoi(table.setting.substr(1));
    if (k < 0 || k >= n || present[k])
      throw std::invalid_argument("EdgeSignOracle: missing or duplicate X setting");
    present[k] = true;
    xs[k] = table.frequencies();
  }
  return from_probs(n, z_counts.frequencies(), std::move(xs));
}

int edge_sign(const EdgeSignOracle& oracle, std::uint64_t j, int k) {
  if (k < 0 || k >= oracle.n_qubits)
    throw std::invalid_argument("edge_sign: pairing bit out of range");
  if (j >> k & 1) throw std::invalid_argument("edge_sign: bit k of j must be 0");
  const std::uint64_t hi = j | (1ULL << k);
  const double stat = 2.0 * oracle.x_probs[k][j] - oracle.z_probs[j] - oracle.z_probs[hi];
  return stat < 0.0 ? -1 : +1;
}

SignVector tree_signs_rooted(const EdgeSignOracle& oracle, const SpanningTree& tree,
                             std::uint64_t root) {
  if (tree.n_qubits != oracle.n_qubits)
    throw std::invalid_argument("tree_signs: tree and oracle qubit counts differ");
  const std::uint64_t dim = tree.parent.size();
  if (root >= dim) throw std::invalid_argument("tree_signs: root out of range");

  SignVector sv;
  sv.signs.assign(dim, +1);
  // parent[j] < j, so ascending order visits parents first.
  for (std::uint64_t node = 1; node < dim; ++node) {
    const int k = tree.edge_label[node];
    const std::uint64_t lo = (node ^ root) & ~(1ULL << k);
    sv.signs[node] = sv.signs[tree.parent[node]] * edge_sign(oracle, lo, k);
  }
  return sv;
}

SignVector tree_signs(const EdgeSignOracle& oracle, const SpanningTree& tree) {
  return tree_signs_rooted(oracle, tree, 0);
}

SignVector majority_vote(const std::vector<SignVector>& per_tree) {
  if (per_tree.empty()) throw std::invalid_argument("majority_vote: empty vote list");
  const std::size_t dim = per_tree.front().signs.size();
  for (const auto& sv : per_tree)
    if (sv.signs.size() != dim)
      throw std::invalid_argument("majority_vote: sign vector length mismatch");

  SignVector out;
  out.signs.assign(dim, +1);
  for (std::size_t j = 0; j < dim; ++j) {
    int sum = 0;
    for (const auto& sv : per_tree) sum += sv.signs[j];
    out.signs[j] = sum < 0 ? -1 : +1;
  }
  return out;
}

RealState reconstruct_from_probs(const EdgeSignOracle& oracle,
                                 const ReconstructOptions& options,
                                 ReconstructTimings* timings) {
  if (options.n_tree < 1)
    throw std::invalid_argument("reconstruct: n_tree must be >= 1");
  const std::uint64_t dim = oracle.z_probs.size();

  std::uint64_t root = 0;
  if (options.root_switch_threshold > 0.0 &&
      oracle.z_probs[0] < options.root_switch_threshold) {
    root = std::max_element(oracle.z_probs.begin(), oracle.z_probs.end()) -
           oracle.z_probs.begin();
  }

  const double t0 = now_ms();
  const auto forest =
      generate_forest(HypercubeGraph{oracle.n_qubits}, options.n_tree, options.seed);
  const double t1 = now_ms();

  std::vector<SignVector> votes;
  votes.reserve(forest.size());
  for (const auto& tree : forest) votes.push_back(tree_signs_rooted(oracle, tree, root));
  const SignVector merged = majority_vote(votes);
  const double t2 = now_ms();
  if (timings) {
    timings->forest_ms = t1 - t0;
    timings->voting_ms = t2 - t1;
  }

  std::vector<double> amps(dim);
  for (std::uint64_t j = 0; j < dim; ++j)
    amps[j] = merged.signs[j ^ root] * std::sqrt(std::max(oracle.z_probs[j], 0.0));
  double norm = 0.0;
  for (double a : amps) norm += a * a;
  norm = std::sqrt(norm);
  if (norm <= 0.0) throw std::runtime_error("reconstruct: empty amplitude vector");
  for (double& a : amps) a /= norm;
  return RealState(oracle.n_qubits, std::move(amps));
}

RealState reconstruct(const CountTable& z_counts,
                      const std::vector<CountTable>& x_counts, int n_tree,
                      std::uint64_t seed) {
  const auto oracle = EdgeSignOracle::from_counts(z_counts, x_counts);
  ReconstructOptions options;
  options.n_tree = n_tree;
  options.seed = seed;
  options.root_switch_threshold = 10.0 / static_cast<double>(z_counts.shots);
  return reconstruct_from_probs(oracle, options);
}

int default_n_tree(int n_qubits) { return n_qubits <= 5 ? 11 : 111; }

double edge_error_bound(long long n_samp, double amp_product) {
  if (n_samp < 0) throw std::invalid_argument("edge_error_bound: n_samp must be >= 0");
  return std::exp(-2.0 * static_cast<double>(n_samp) * amp_product * amp_product);
}

double tree_error_bound(double p_e, int depth) {
  if (p_e < 0.0 || p_e > 1.0)
    throw std::invalid_argument("tree_error_bound: p_e must lie in [0, 1]");
  if (depth < 0) throw std::invalid_argument("tree_error_bound: depth must be >= 0");
  return (1.0 - std::pow(1.0 - 2.0 * p_e, depth)) / 2.0;
}

double voting_error_bound(double p_j, int n_tree) {
  if (p_j < 0.0 || p_j >= 0.5)
    throw std::domain_error("voting_error_bound: requires 0 <= p_j < 1/2");
  if (n_tree < 1) throw std::invalid_argument("voting_error_bound: n_tree must be >= 1");
  const double margin = 0.5 - p_j;
  return std::exp(-2.0 * n_tree * margin * margin);
}

ErrorBudget plan_budget(double delta, double m, int depth, double p_j) {
  if (delta <= 0.0 || delta > 1.0)
    throw std::domain_error("plan_budget: delta must lie in (0, 1]");
  if (m <= 0.0) throw std::domain_error("plan_budget: minimal overlap m must be positive");
  if (p_j < 0.0 || p_j >= 0.5) throw std::domain_error("plan_budget: requires p_j < 1/2");
  if (depth < 1) throw std::invalid_argument("plan_budget: depth must be >= 1");

  ErrorBudget budget;
  budget.delta = delta;
  budget.m = m;
  budget.depth = depth;
  budget.p_j = p_j;
  const double n_samp = std::ceil(std::log(depth / delta) / (2.0 * m * m));
  budget.n_samp_required = std::max<long long>(1, static_cast<long long>(n_samp));
  const double margin = 0.5 - p_j;
  const double n_tree = std::ceil(std::log(1.0 / delta) / (2.0 * margin * margin));
  budget.n_tree_required = std::max(1, static_cast<int>(n_tree));
  budget.p_e = edge_error_bound(budget.n_samp_required, m);
  return budget;
}

double min_edge_amp_product(const RealState& state) {
  const std::uint64_t dim = state.dim();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t j = 0; j < dim; ++j)
    for (int k = 0; k < state.n_qubits; ++k) {
      if (j >> k & 1) continue;
      const double p = std::abs(state.amplitudes[j] * state.amplitudes[j | (1ULL << k)]);
      best = std::min(best, p);
    }
  return best;
}

}  // namespace hrf
