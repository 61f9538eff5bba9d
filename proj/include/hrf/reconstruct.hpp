#pragma once

#include <cstdint>
#include <vector>

#include "hrf/forest.hpp"
#include "hrf/sampling.hpp"
#include "hrf/state.hpp"

namespace hrf {

// Per-node signs, +1 at the root by convention.
struct SignVector {
  std::vector<int> signs;  // entries are +1 or -1
};

// Empirical |psi_j|^2 and |psi^k_j|^2 vectors the sign queries read from.
struct EdgeSignOracle {
  int n_qubits = 0;
  std::vector<double> z_probs;
  std::vector<std::vector<double>> x_probs;  // x_probs[k], k = 0..n_qubits-1

  static EdgeSignOracle from_probs(int n_qubits, std::vector<double> z,
                                   std::vector<std::vector<double>> xs);
  // Requires one table labeled "Z" and tables "X0".."X<n-1>" (any order).
  static EdgeSignOracle from_counts(const CountTable& z_counts,
                                    const std::vector<CountTable>& x_counts);
};

// Relative sign of psi_j and psi_{j+2^k} via the superposition statistics:
// sgn(2 x[k][j] - z[j] - z[j+2^k]), with sgn(0) := +1. Bit k of j must be 0.
int edge_sign(const EdgeSignOracle& oracle, std::uint64_t j, int k);

// Sign at each node = product of edge signs along its root path.
SignVector tree_signs(const EdgeSignOracle& oracle, const SpanningTree& tree);

// Same walk with the hypercube relabeled by XOR with `root`, so tree node j
// stands for original index (j ^ root).
SignVector tree_signs_rooted(const EdgeSignOracle& oracle, const SpanningTree& tree,
                             std::uint64_t root);

// Per-node sign of the vote sum; ties resolve to +1.
SignVector majority_vote(const std::vector<SignVector>& per_tree);

struct ReconstructOptions {
  int n_tree = 1;
  std::uint64_t seed = 0;
  // Re-root at argmax_j z_probs[j] when z_probs[0] falls below this value
  // (sign propagation from a zero-amplitude root carries no information).
  double root_switch_threshold = 0.0;
};

struct ReconstructTimings {
  double forest_ms = 0.0;
  double voting_ms = 0.0;
};

RealState reconstruct_from_probs(const EdgeSignOracle& oracle,
                                 const ReconstructOptions& options,
                                 ReconstructTimings* timings = nullptr);

// Count-table entry point; the re-root threshold defaults to 10 / shots.
RealState reconstruct(const CountTable& z_counts,
                      const std::vector<CountTable>& x_counts, int n_tree,
                      std::uint64_t seed);

// Default forest size: 11 trees up to 5 qubits, 111 beyond (odd avoids ties).
int default_n_tree(int n_qubits);

// Hoeffding bound exp(-2 n_samp (|psi_j||psi_{j+2^k}|)^2) on a single edge
// sign error.
double edge_error_bound(long long n_samp, double amp_product);

// Parity error along a root path of `depth` edges with homogeneous edge
// error p_e: (1 - (1 - 2 p_e)^depth) / 2.
double tree_error_bound(double p_e, int depth);

// Majority-vote failure bound exp(-2 n_tree (1/2 - p_j)^2); requires p_j < 1/2.
double voting_error_bound(double p_j, int n_tree);

// Sample and forest sizes meeting a tolerated node-error fraction delta.
struct ErrorBudget {
  double delta = 0.0;
  double m = 0.0;  // minimal overlap min_{j,k} |psi_j psi_{j+2^k}|
  int depth = 0;
  double p_e = 0.0;
  double p_j = 0.0;
  long long n_samp_required = 0;
  int n_tree_required = 0;
};
ErrorBudget plan_budget(double delta, double m, int depth, double p_j);

// min_{j,k} |psi_j psi_{j+2^k}| over all hypercube edges.
double min_edge_amp_product(const RealState& state);

}  // namespace hrf
