#include "logsparse/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "logsparse/error.hpp"

namespace logsparse {

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n) {
  for (auto& [i, j] : edges) {
    if (i == j) throw Error(ErrorKind::InvalidInput, "graph: loop at node " + std::to_string(i + 1));
    if (i >= n || j >= n)
      throw Error(ErrorKind::InvalidInput, "graph: edge endpoint out of range");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw Error(ErrorKind::InvalidInput, "graph: duplicate edge");
  edges_ = std::move(edges);
}

Graph Graph::complete(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, std::move(e));
}

Graph Graph::path(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, std::move(e));
}

Graph Graph::star(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 1; i < n; ++i) e.emplace_back(0, i);
  return Graph(n, std::move(e));
}

bool Graph::has_edge(std::size_t i, std::size_t j) const { return edge_index(i, j) != edges_.size(); }

std::size_t Graph::edge_index(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{i, j});
  if (it != edges_.end() && *it == Edge{i, j}) return static_cast<std::size_t>(it - edges_.begin());
  return edges_.size();
}

bool Graph::is_connected() const {
  if (n_ <= 1) return true;
  std::vector<std::size_t> parent(n_);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n_;
  for (auto [i, j] : edges_) {
    const auto a = find(i), b = find(j);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

namespace {

std::pair<std::vector<int>, std::size_t> canonical_colours(const std::vector<int>& raw) {
  std::map<int, int> relabel;
  std::vector<int> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, inserted] = relabel.try_emplace(raw[i], static_cast<int>(relabel.size()));
    out[i] = it->second;
  }
  return {out, relabel.size()};
}

}  // namespace

ColouredGraph::ColouredGraph(Graph graph, std::vector<int> vertex_colours, std::vector<int> edge_colours)
    : graph_(std::move(graph)) {
  if (vertex_colours.size() != graph_.nodes())
    throw Error(ErrorKind::InvalidInput, "coloured graph: need one colour per vertex");
  if (edge_colours.size() != graph_.edge_count())
    throw Error(ErrorKind::InvalidInput, "coloured graph: need one colour per edge");
  std::tie(vertex_colour_, p_) = canonical_colours(vertex_colours);
  std::tie(edge_colour_, q_) = canonical_colours(edge_colours);
}

SparsitySet sparsity_set(const Graph& g) {
  SparsitySet s{g.nodes(), {}};
  for (std::size_t i = 0; i < g.nodes(); ++i)
    for (std::size_t j = i + 1; j < g.nodes(); ++j)
      if (!g.has_edge(i, j)) s.pairs.emplace_back(i, j);
  return s;
}

PatternBasis lssm_basis(const Graph& g) {
  const std::size_t n = g.nodes();
  PatternBasis b{n, {}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    SymMatrix e(n);
    e.at(i, i) = 1.0;
    b.basis.push_back(std::move(e));
    b.labels.push_back("y" + std::to_string(i + 1) + std::to_string(i + 1));
  }
  for (auto [i, j] : g.edges()) {
    SymMatrix e(n);
    e.at(i, j) = 0.5;
    b.basis.push_back(std::move(e));
    b.labels.push_back("y" + std::to_string(i + 1) + std::to_string(j + 1));
  }
  return b;
}

PatternBasis coloured_lssm_basis(const ColouredGraph& cg) {
  const Graph& g = cg.graph();
  const std::size_t n = g.nodes();
  PatternBasis b{n, {}, {}};
  for (std::size_t c = 0; c < cg.vertex_colour_count(); ++c) {
    SymMatrix e(n);
    for (std::size_t i = 0; i < n; ++i)
      if (cg.vertex_colours()[i] == static_cast<int>(c)) e.at(i, i) = 1.0;
    b.basis.push_back(std::move(e));
    b.labels.push_back("v" + std::to_string(c + 1));
  }
  for (std::size_t c = 0; c < cg.edge_colour_count(); ++c) {
    SymMatrix e(n);
    for (std::size_t k = 0; k < g.edge_count(); ++k)
      if (cg.edge_colours()[k] == static_cast<int>(c)) e.at(g.edges()[k].first, g.edges()[k].second) = 0.5;
    b.basis.push_back(std::move(e));
    b.labels.push_back("e" + std::to_string(c + 1));
  }
  return b;
}

void validate_connected(const Graph& g) {
  if (!g.is_connected())
    throw Error(ErrorKind::Disconnected,
                "graph is disconnected; disconnected graphs correspond to LSSMs with block-diagonal "
                "structure, so process each connected component separately");
}

double distance_to_span(const SymMatrix& m, const std::vector<SymMatrix>& basis) {
  // Modified Gram-Schmidt in the Frobenius inner product.
  SymMatrix r = m;
  std::vector<SymMatrix> q;
  for (const auto& b : basis) {
    SymMatrix v = b;
    for (const auto& u : q) v -= inner(u, v) * u;
    for (const auto& u : q) v -= inner(u, v) * u;
    const double nv = v.frobenius_norm();
    if (nv <= 1e-12 * std::max(1.0, b.frobenius_norm())) continue;
    q.push_back((1.0 / nv) * v);
  }
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& u : q) r -= inner(u, r) * u;
  return r.frobenius_norm();
}

bool pattern_membership(const SymMatrix& m, const PatternBasis& basis, double tol) {
  if (m.size() != basis.n) throw Error(ErrorKind::InvalidInput, "pattern_membership: size mismatch");
  return distance_to_span(m, basis.basis) <= tol * std::max(1.0, m.frobenius_norm());
}

namespace {

template <class Accept>
std::vector<Permutation> permutations_where(std::size_t n, Accept accept) {
  std::vector<Permutation> out;
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    if (accept(p)) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

std::vector<Permutation> automorphisms(const Graph& g) {
  return permutations_where(g.nodes(), [&](const Permutation& p) {
    return std::all_of(g.edges().begin(), g.edges().end(),
                       [&](const Edge& e) { return g.has_edge(p[e.first], p[e.second]); });
  });
}

std::vector<Permutation> automorphisms(const ColouredGraph& cg) {
  const Graph& g = cg.graph();
  return permutations_where(g.nodes(), [&](const Permutation& p) {
    for (std::size_t i = 0; i < g.nodes(); ++i)
      if (cg.vertex_colours()[i] != cg.vertex_colours()[p[i]]) return false;
    for (std::size_t k = 0; k < g.edge_count(); ++k) {
      const auto [i, j] = g.edges()[k];
      const std::size_t img = g.edge_index(p[i], p[j]);
      if (img == g.edge_count() || cg.edge_colours()[img] != cg.edge_colours()[k]) return false;
    }
    return true;
  });
}

SymMatrix permute(const SymMatrix& m, const Permutation& sigma) {
  SymMatrix out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i; j < m.size(); ++j) out.at(sigma[i], sigma[j]) = m(i, j);
  return out;
}

}  // namespace logsparse
