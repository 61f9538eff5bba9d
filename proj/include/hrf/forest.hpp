#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace hrf {

// Hypercube graph Q_n on 2^n nodes; edges are implicit in index arithmetic:
// (j, j + 2^k) is an edge whenever bit k of j is 0.
struct HypercubeGraph {
  int n_qubits = 1;

  std::uint64_t node_count() const { return 1ULL << n_qubits; }
  std::uint64_t edge_count() const {
    return static_cast<std::uint64_t>(n_qubits) << (n_qubits - 1);
  }
  static bool has_edge(std::uint64_t a, std::uint64_t b) {
    return std::has_single_bit(a ^ b);
  }
};

// Spanning tree rooted at node 0. parent[j] equals j with one set bit
// cleared, so node depth equals its Hamming weight and layer sizes follow
// Pascal's triangle. edge_label[j] is the cleared bit.
struct SpanningTree {
  int n_qubits = 0;
  std::vector<std::int64_t> parent;  // parent[0] = -1
  std::vector<int> edge_label;       // edge_label[0] = -1
};

struct PathEdge {
  std::uint64_t child = 0;
  std::uint64_t parent = 0;
  int bit = 0;
};

// Each node with Hamming weight w picks its parent uniformly among its w set
// bits; deterministic in the seed.
SpanningTree random_spanning_tree(const HypercubeGraph& graph, std::uint64_t seed);

// n_tree independent trees from per-tree derived seeds.
std::vector<SpanningTree> generate_forest(const HypercubeGraph& graph, int n_tree,
                                          std::uint64_t seed);

// Edges from `node` up to the root, in walk order; length equals the Hamming
// weight of `node`.
std::vector<PathEdge> path_to_root(const SpanningTree& tree, std::uint64_t node);

// Forest cache keyed by (n_qubits, seed, n_tree). Loading returns nullopt
// when the key does not match.
nlohmann::json forest_to_json(const std::vector<SpanningTree>& forest, int n_qubits,
                              std::uint64_t seed);
std::optional<std::vector<SpanningTree>> forest_from_json(const nlohmann::json& j,
                                                          int n_qubits,
                                                          std::uint64_t seed,
                                                          int n_tree);
void save_forest(const std::string& path, const std::vector<SpanningTree>& forest,
                 int n_qubits, std::uint64_t seed);
std::optional<std::vector<SpanningTree>> load_forest(const std::string& path,
                                                     int n_qubits, std::uint64_t seed,
                                                     int n_tree);

}  // namespace hrf
