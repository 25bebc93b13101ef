#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "logsparse/symmat.hpp"

namespace logsparse {

using Edge = std::pair<std::size_t, std::size_t>;  // 0-based, first < second

/// Simple undirected graph on nodes 0..n-1; edges sorted and unique.
class Graph {
 public:
  Graph() = default;
  /// Throws InvalidInput on loops, duplicates or out-of-range endpoints.
  Graph(std::size_t n, std::vector<Edge> edges);

  static Graph complete(std::size_t n);
  static Graph path(std::size_t n);
  static Graph star(std::size_t n);  // node 0 is the centre

  std::size_t nodes() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool has_edge(std::size_t i, std::size_t j) const;
  /// Index into edges(), or edge_count() if absent.
  std::size_t edge_index(std::size_t i, std::size_t j) const;

  bool is_connected() const;
  bool is_tree() const { return is_connected() && edges_.size() + 1 == n_; }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
};

/// Graph with one colour per vertex and per edge, relabelled 0..p-1 and
/// 0..q-1 in order of first appearance.
class ColouredGraph {
 public:
  ColouredGraph() = default;
  ColouredGraph(Graph graph, std::vector<int> vertex_colours, std::vector<int> edge_colours);

  const Graph& graph() const noexcept { return graph_; }
  const std::vector<int>& vertex_colours() const noexcept { return vertex_colour_; }
  const std::vector<int>& edge_colours() const noexcept { return edge_colour_; }
  std::size_t vertex_colour_count() const noexcept { return p_; }
  std::size_t edge_colour_count() const noexcept { return q_; }

 private:
  Graph graph_;
  std::vector<int> vertex_colour_;
  std::vector<int> edge_colour_;  // parallel to graph_.edges()
  std::size_t p_ = 0;
  std::size_t q_ = 0;
};

/// Entry positions (i, j), i <= j, forced to vanish.
struct SparsitySet {
  std::size_t n = 0;
  std::vector<Edge> pairs;
};

struct PatternBasis {
  std::size_t n = 0;
  std::vector<SymMatrix> basis;
  std::vector<std::string> labels;
};

/// Non-adjacent off-diagonal pairs of G.
SparsitySet sparsity_set(const Graph& g);

/// E_ii for each node, (E_ij + E_ji)/2 for each edge.
PatternBasis lssm_basis(const Graph& g);

/// One element per vertex colour class (sum of E_ii) and per edge colour
/// class (sum of (E_ij + E_ji)/2).
PatternBasis coloured_lssm_basis(const ColouredGraph& cg);

/// Throws Disconnected unless g is connected.
void validate_connected(const Graph& g);

/// Frobenius distance from M to span(basis) <= tol * max(1, ||M||_F).
bool pattern_membership(const SymMatrix& m, const PatternBasis& basis, double tol);

/// Orthogonal (Frobenius) distance from M to the span of `basis`.
double distance_to_span(const SymMatrix& m, const std::vector<SymMatrix>& basis);

using Permutation = std::vector<std::size_t>;

/// All vertex permutations preserving edges (and colours when given).
/// Brute force; intended for n <= 8.
std::vector<Permutation> automorphisms(const Graph& g);
std::vector<Permutation> automorphisms(const ColouredGraph& cg);

/// P M P^T where (P M P^T)(sigma(i), sigma(j)) = M(i, j).
SymMatrix permute(const SymMatrix& m, const Permutation& sigma);

}  // namespace logsparse
