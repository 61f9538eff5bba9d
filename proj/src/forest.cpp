#include "hrf/forest.hpp"

#include <fstream>
#include <stdexcept>

#include "hrf/rng.hpp"

namespace hrf {

SpanningTree random_spanning_tree(const HypercubeGraph& graph, std::uint64_t seed) {
  if (graph.n_qubits < 1)
    throw std::invalid_argument("random_spanning_tree: n_qubits must be >= 1");
  const std::uint64_t dim = graph.node_count();

  SpanningTree tree;
  tree.n_qubits = graph.n_qubits;
  tree.parent.assign(dim, -1);
  tree.edge_label.assign(dim, -1);

  auto rng = make_rng(seed);
  int set_bits[64];
  for (std::uint64_t node = 1; node < dim; ++node) {
    int weight = 0;
    for (int b = 0; b < graph.n_qubits; ++b)
      if (node >> b & 1) set_bits[weight++] = b;
    const int k = weight == 1 ? set_bits[0]
                              : set_bits[uniform_below(rng, static_cast<std::uint64_t>(weight))];
    tree.parent[node] = static_cast<std::int64_t>(node & ~(1ULL << k));
    tree.edge_label[node] = k;
  }
  return tree;
}

std::vector<SpanningTree> generate_forest(const HypercubeGraph& graph, int n_tree,
                                          std::uint64_t seed) {
  if (n_tree < 1) throw std::invalid_argument("generate_forest: n_tree must be >= 1");
  std::vector<SpanningTree> forest;
  forest.reserve(n_tree);
  for (int i = 0; i < n_tree; ++i)
    forest.push_back(random_spanning_tree(graph, derive_seed(seed, i)));
  return forest;
}

std::vector<PathEdge> path_to_root(const SpanningTree& tree, std::uint64_t node) {
  if (node >= tree.parent.size())
    throw std::invalid_argument("path_to_root: node out of range");
  std::vector<PathEdge> path;
  path.reserve(std::popcount(node));
  while (node != 0) {
    const auto parent = static_cast<std::uint64_t>(tree.parent[node]);
    path.push_back({node, parent, tree.edge_label[node]});
    node = parent;
  }
  return path;
}

nlohmann::json forest_to_json(const std::vector<SpanningTree>& forest, int n_qubits,
                              std::uint64_t seed) {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : forest) trees.push_back(tree.parent);
  return {{"n_qubits", n_qubits},
          {"seed", seed},
          {"n_tree", forest.size()},
          {"trees", std::move(trees)}};
}

std::optional<std::vector<SpanningTree>> forest_from_json(const nlohmann::json& j,
                                                          int n_qubits,
                                                          std::uint64_t seed,
                                                          int n_tree) {
  if (j.value("n_qubits", -1) != n_qubits || j.value("seed", std::uint64_t{0}) != seed ||
      j.value("n_tree", -1) != n_tree)
    return std::nullopt;

  std::vector<SpanningTree> forest;
  for (const auto& parents : j.at("trees")) {
    SpanningTree tree;
    tree.n_qubits = n_qubits;
    tree.parent = parents.get<std::vector<std::int64_t>>();
    if (tree.parent.size() != (1ULL << n_qubits))
      throw std::invalid_argument("forest_from_json: parent vector length mismatch");
    tree.edge_label.assign(tree.parent.size(), -1);
    for (std::uint64_t node = 1; node < tree.parent.size(); ++node) {
      const std::uint64_t diff = node ^ static_cast<std::uint64_t>(tree.parent[node]);
      if (!std::has_single_bit(diff) || (node & diff) == 0)
        throw std::invalid_argument("forest_from_json: invalid parent edge");
      tree.edge_label[node] = std::countr_zero(diff);
    }
    forest.push_back(std::move(tree));
  }
  if (static_cast<int>(forest.size()) != n_tree)
    throw std::invalid_argument("forest_from_json: tree count mismatch");
  return forest;
}

void save_forest(const std::string& path, const std::vector<SpanningTree>& forest,
                 int n_qubits, std::uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_forest: cannot open " + path);
  out << forest_to_json(forest, n_qubits, seed).dump();
}

std::optional<std::vector<SpanningTree>> load_forest(const std::string& path,
                                                     int n_qubits, std::uint64_t seed,
                                                     int n_tree) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  nlohmann::json j;
  in >> j;
  return forest_from_json(j, n_qubits, seed, n_tree);
}

}  // namespace hrf
