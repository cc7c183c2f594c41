#ifndef ISOALG_GRAPHS_HPP
#define ISOALG_GRAPHS_HPP

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "isoalg/algebra.hpp"
#include "isoalg/error.hpp"
#include "isoalg/linalg.hpp"
#include "isoalg/scalars.hpp"

namespace isoalg {

struct Edge {
  std::string name;
  std::string src;
  std::string tgt;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Finite directed graph E = (E0, E1, r, s) with a distinguished set X of
/// regular vertices used by the relative Cohn construction.
struct Graph {
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
  std::vector<std::string> x;

  friend bool operator==(const Graph&, const Graph&) = default;
};

/// A path: a base vertex plus a (possibly empty) composable edge sequence.
/// Indices refer to the canonical (name-sorted) vertex and edge orders.
struct Path {
  std::size_t start = 0;
  std::vector<std::size_t> edges;

  friend bool operator==(const Path&, const Path&) = default;
};

/// Pair (alpha, beta) with r(alpha) = r(beta), standing for alpha beta*.
struct PathPair {
  Path alpha;
  Path beta;

  friend bool operator==(const PathPair&, const PathPair&) = default;
};

/// Validated graph in canonical form: vertices and edges sorted by name,
/// endpoints resolved to indices.
class IndexedGraph {
 public:
  explicit IndexedGraph(const Graph& g) {
    auto check_name = [](const std::string& name, const char* what) {
      if (name.empty() || name.find_first_of(" \t\n.*()") != std::string::npos) {
        throw Error(ErrorKind::ParseError, std::string("bad ") + what + " name '" + name + "'");
      }
    };
    vertex_names_ = g.vertices;
    std::sort(vertex_names_.begin(), vertex_names_.end());
    for (std::size_t i = 0; i < vertex_names_.size(); ++i) {
      check_name(vertex_names_[i], "vertex");
      if (i > 0 && vertex_names_[i] == vertex_names_[i - 1]) {
        throw Error(ErrorKind::DuplicateLabel, "vertex '" + vertex_names_[i] + "' declared twice");
      }
    }
    std::vector<Edge> sorted = g.edges;
    std::sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) { return a.name < b.name; });
    out_edges_.assign(vertex_names_.size(), {});
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const Edge& e = sorted[i];
      check_name(e.name, "edge");
      if (i > 0 && e.name == sorted[i - 1].name) {
        throw Error(ErrorKind::DuplicateEdgeName, "edge '" + e.name + "' declared twice");
      }
      if (std::binary_search(vertex_names_.begin(), vertex_names_.end(), e.name)) {
        throw Error(ErrorKind::DuplicateEdgeName, "edge '" + e.name + "' reuses a vertex name");
      }
      const auto s = find_vertex(e.src);
      const auto t = find_vertex(e.tgt);
      if (!s || !t) {
        throw Error(ErrorKind::DanglingEdge, "edge '" + e.name + "' joins undeclared vertex '" +
                                                 (s ? e.tgt : e.src) + "'");
      }
      edge_names_.push_back(e.name);
      src_.push_back(*s);
      tgt_.push_back(*t);
      out_edges_[*s].push_back(i);
    }
    std::set<std::size_t> x;
    for (const auto& name : g.x) {
      const auto v = find_vertex(name);
      if (!v) throw Error(ErrorKind::XNotRegular, "X names undeclared vertex '" + name + "'");
      if (out_edges_[*v].empty()) throw Error(ErrorKind::XNotRegular, "vertex '" + name + "' emits no edges");
      x.insert(*v);
    }
    x_.assign(x.begin(), x.end());
  }

  std::size_t vertex_count() const { return vertex_names_.size(); }
  std::size_t edge_count() const { return edge_names_.size(); }
  const std::string& vertex_name(std::size_t v) const { return vertex_names_[v]; }
  const std::string& edge_name(std::size_t e) const { return edge_names_[e]; }
  std::size_t source(std::size_t e) const { return src_[e]; }
  std::size_t target(std::size_t e) const { return tgt_[e]; }
  const std::vector<std::size_t>& out_edges(std::size_t v) const { return out_edges_[v]; }
  /// X as sorted vertex indices (sorted by name).
  const std::vector<std::size_t>& x() const { return x_; }

  std::optional<std::size_t> find_vertex(const std::string& name) const {
    auto it = std::lower_bound(vertex_names_.begin(), vertex_names_.end(), name);
    if (it == vertex_names_.end() || *it != name) return std::nullopt;
    return static_cast<std::size_t>(it - vertex_names_.begin());
  }

  std::size_t range(const Path& p) const { return p.edges.empty() ? p.start : tgt_[p.edges.back()]; }

  std::string label(const Path& p) const {
    if (p.edges.empty()) return vertex_names_[p.start];
    std::string out;
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
      if (i > 0) out += ".";
      out += edge_names_[p.edges[i]];
    }
    return out;
  }

  std::string label(const PathPair& pp) const {
    const bool alpha_trivial = pp.alpha.edges.empty();
    const bool beta_trivial = pp.beta.edges.empty();
    if (alpha_trivial && beta_trivial) return label(pp.alpha);
    std::string ghost;
    if (!beta_trivial) {
      ghost = pp.beta.edges.size() == 1 ? label(pp.beta) + "*" : "(" + label(pp.beta) + ")*";
    }
    if (alpha_trivial) return ghost;
    if (beta_trivial) return label(pp.alpha);
    return label(pp.alpha) + " " + ghost;
  }

 private:
  std::vector<std::string> vertex_names_;
  std::vector<std::string> edge_names_;
  std::vector<std::size_t> src_;
  std::vector<std::size_t> tgt_;
  std::vector<std::vector<std::size_t>> out_edges_;
  std::vector<std::size_t> x_;
};

/// Checks the graph invariants and returns the graph unchanged.
inline Graph validate_graph(const Graph& g) {
  IndexedGraph checked(g);
  (void)checked;
  return g;
}

/// Reg(E): vertices emitting at least one edge, sorted by name.
inline std::vector<std::string> regular_vertices(const Graph& g) {
  IndexedGraph ig(Graph{g.vertices, g.edges, {}});
  std::vector<std::string> out;
  for (std::size_t v = 0; v < ig.vertex_count(); ++v) {
    if (!ig.out_edges(v).empty()) out.push_back(ig.vertex_name(v));
  }
  return out;
}

inline bool is_acyclic(const IndexedGraph& g) {
  // Iterative DFS; a grey vertex reached again closes a cycle.
  enum class Mark { White, Grey, Black };
  std::vector<Mark> mark(g.vertex_count(), Mark::White);
  for (std::size_t root = 0; root < g.vertex_count(); ++root) {
    if (mark[root] != Mark::White) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    mark[root] = Mark::Grey;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next == g.out_edges(v).size()) {
        mark[v] = Mark::Black;
        stack.pop_back();
        continue;
      }
      const std::size_t w = g.target(g.out_edges(v)[next++]);
      if (mark[w] == Mark::Grey) return false;
      if (mark[w] == Mark::White) {
        mark[w] = Mark::Grey;
        stack.emplace_back(w, 0);
      }
    }
  }
  return true;
}

inline bool is_acyclic(const Graph& g) { return is_acyclic(IndexedGraph(g)); }

inline void require_acyclic(const IndexedGraph& g) {
  if (!is_acyclic(g)) throw Error(ErrorKind::NotAcyclic, "graph has a cycle; its path set is infinite");
}

/// Path(E) in canonical order: by length, then lexicographically by edge
/// names (vertex names for length zero).
inline std::vector<Path> enumerate_paths(const IndexedGraph& g) {
  require_acyclic(g);
  std::vector<Path> all;
  std::vector<Path> level;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) level.push_back({v, {}});
  while (!level.empty()) {
    all.insert(all.end(), level.begin(), level.end());
    std::vector<Path> next;
    for (const auto& p : level) {
      for (std::size_t e : g.out_edges(g.range(p))) {
        Path q = p;
        q.edges.push_back(e);
        next.push_back(std::move(q));
      }
    }
    std::sort(next.begin(), next.end(), [](const Path& a, const Path& b) { return a.edges < b.edges; });
    level = std::move(next);
  }
  return all;
}

inline std::vector<Path> enumerate_paths(const Graph& g) { return enumerate_paths(IndexedGraph(g)); }

namespace detail {

inline std::size_t path_source(const IndexedGraph& g, const Path& p) {
  return p.edges.empty() ? p.start : g.source(p.edges.front());
}

/// If `prefix` is an initial segment of `path`, the remaining tail.
inline std::optional<Path> strip_prefix(const IndexedGraph& g, const Path& prefix, const Path& path) {
  if (path_source(g, prefix) != path_source(g, path)) return std::nullopt;
  if (prefix.edges.size() > path.edges.size()) return std::nullopt;
  if (!std::equal(prefix.edges.begin(), prefix.edges.end(), path.edges.begin())) return std::nullopt;
  Path tail{g.range(prefix), {path.edges.begin() + static_cast<std::ptrdiff_t>(prefix.edges.size()), path.edges.end()}};
  return tail;
}

/// Concatenation a.b, assuming r(a) = s(b).
inline Path concat(const Path& a, const Path& b) {
  Path out = a;
  out.edges.insert(out.edges.end(), b.edges.begin(), b.edges.end());
  return out;
}

inline std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> path_index(
    const std::vector<Path>& paths) {
  std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> idx;
  for (std::size_t i = 0; i < paths.size(); ++i) idx[{paths[i].edges.empty() ? paths[i].start : 0, paths[i].edges}] = i;
  return idx;
}

inline std::pair<std::size_t, std::vector<std::size_t>> path_key(const Path& p) {
  return {p.edges.empty() ? p.start : 0, p.edges};
}

}  // namespace detail

/// Basis of the Cohn path algebra: all (alpha, beta) with r(alpha) = r(beta),
/// ordered by the canonical indices of alpha and then beta.
inline std::vector<PathPair> cohn_basis(const IndexedGraph& g) {
  const std::vector<Path> paths = enumerate_paths(g);
  std::vector<PathPair> basis;
  for (const auto& a : paths) {
    for (const auto& b : paths) {
      if (g.range(a) == g.range(b)) basis.push_back({a, b});
    }
  }
  return basis;
}

/// KE: basis Path(E), product = concatenation when composable, else 0.
inline Algebra path_algebra(const Graph& graph, const Field& field) {
  const IndexedGraph g(graph);
  const std::vector<Path> paths = enumerate_paths(g);
  const auto index = detail::path_index(paths);
  std::vector<std::string> labels;
  for (const auto& p : paths) labels.push_back(g.label(p));
  std::vector<TableEntry> entries;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (std::size_t j = 0; j < paths.size(); ++j) {
      if (g.range(paths[i]) != detail::path_source(g, paths[j])) continue;
      const Path c = detail::concat(paths[i], paths[j]);
      entries.push_back({i, j, index.at(detail::path_key(c)), field.one()});
    }
  }
  return Algebra(field, paths.size(), std::move(labels), std::move(entries));
}

/// C_K(E) on the basis of alpha beta* monomials.
inline Algebra cohn_algebra(const Graph& graph, const Field& field) {
  const IndexedGraph g(graph);
  const std::vector<PathPair> basis = cohn_basis(g);
  std::map<std::pair<std::pair<std::size_t, std::vector<std::size_t>>, std::pair<std::size_t, std::vector<std::size_t>>>,
           std::size_t>
      index;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    index[{detail::path_key(basis[i].alpha), detail::path_key(basis[i].beta)}] = i;
  }
  std::vector<std::string> labels;
  for (const auto& pp : basis) labels.push_back(g.label(pp));
  std::vector<TableEntry> entries;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& [alpha, beta] = basis[i];
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const auto& [gamma, delta] = basis[j];
      std::optional<PathPair> result;
      if (auto tail = detail::strip_prefix(g, beta, gamma)) {
        result = PathPair{detail::concat(alpha, *tail), delta};
      } else if (auto rest = detail::strip_prefix(g, gamma, beta)) {
        result = PathPair{alpha, detail::concat(delta, *rest)};
      }
      if (!result) continue;
      entries.push_back({i, j, index.at({detail::path_key(result->alpha), detail::path_key(result->beta)}), field.one()});
    }
  }
  return Algebra(field, basis.size(), std::move(labels), std::move(entries));
}

/// Smallest two-sided ideal containing the generators, as the rows of its
/// reduced row-echelon basis. Each new vector is multiplied on the left by
/// every basis element, then on the right.
inline std::vector<SparseVector> ideal_closure_sparse(const Algebra& a, const std::vector<SparseVector>& generators) {
  RowSpace space(a.field(), a.dim());
  std::deque<SparseVector> queue;
  for (const auto& g : generators) {
    if (auto row = space.insert(g)) queue.push_back(*row);
  }
  while (!queue.empty()) {
    const SparseVector v = std::move(queue.front());
    queue.pop_front();
    for (int side = 0; side < 2; ++side) {
      for (std::size_t i = 0; i < a.dim(); ++i) {
        const SparseVector p = side == 0 ? multiply_sparse(a, basis_sparse(a, i), v)
                                         : multiply_sparse(a, v, basis_sparse(a, i));
        if (p.empty()) continue;
        if (auto row = space.insert(p)) queue.push_back(*row);
      }
    }
  }
  return space.rows();
}

inline std::vector<Vector> ideal_closure(const Algebra& a, const std::vector<Vector>& generators) {
  std::vector<SparseVector> gens;
  for (const auto& g : generators) {
    if (g.size() != a.dim()) throw Error(ErrorKind::DimensionMismatch, "generator length");
    gens.push_back(to_sparse(g));
  }
  std::vector<Vector> out;
  for (const auto& row : ideal_closure_sparse(a, gens)) out.push_back(to_dense(row, a.field(), a.dim()));
  return out;
}

/// A / I on the non-pivot coordinates of I's reduced row-echelon basis.
inline Algebra quotient_algebra_sparse(const Algebra& a, const std::vector<SparseVector>& ideal_basis) {
  RowSpace ideal(a.field(), a.dim());
  for (const auto& v : ideal_basis) ideal.insert(v);
  for (const auto& row : ideal.rows()) {
    for (std::size_t i = 0; i < a.dim(); ++i) {
      if (!ideal.contains(multiply_sparse(a, basis_sparse(a, i), row)) ||
          !ideal.contains(multiply_sparse(a, row, basis_sparse(a, i)))) {
        throw Error(ErrorKind::NotAnIdeal, "subspace is not closed under multiplication by '" + a.labels()[i] + "'");
      }
    }
  }
  const auto pivots = ideal.pivots();
  std::vector<std::size_t> complement;
  std::vector<std::size_t> new_index(a.dim(), a.dim());
  for (std::size_t c = 0; c < a.dim(); ++c) {
    if (!std::binary_search(pivots.begin(), pivots.end(), c)) {
      new_index[c] = complement.size();
      complement.push_back(c);
    }
  }
  if (complement.empty()) throw Error(ErrorKind::NotAnIdeal, "ideal is the whole algebra; quotient is zero");
  std::vector<std::string> labels;
  for (std::size_t c : complement) labels.push_back(a.labels()[c]);
  std::vector<TableEntry> entries;
  for (std::size_t x = 0; x < complement.size(); ++x) {
    for (std::size_t y = 0; y < complement.size(); ++y) {
      for (const auto& [k, c] : ideal.reduce(a.product(complement[x], complement[y]))) {
        entries.push_back({x, y, new_index[k], c});
      }
    }
  }
  return Algebra(a.field(), complement.size(), std::move(labels), std::move(entries));
}

inline Algebra quotient_algebra(const Algebra& a, const std::vector<Vector>& ideal_basis) {
  std::vector<SparseVector> rows;
  for (const auto& v : ideal_basis) rows.push_back(to_sparse(v));
  return quotient_algebra_sparse(a, rows);
}

/// Generators q_v = v - sum_{s(e)=v} e e* of the (XCK2) relations, in the
/// Cohn basis, ordered by vertex name.
inline std::vector<SparseVector> xck2_generators(const Graph& graph, const Field& field) {
  const IndexedGraph g(graph);
  const std::vector<PathPair> basis = cohn_basis(g);
  auto find = [&](const PathPair& pp) {
    return static_cast<std::size_t>(std::find(basis.begin(), basis.end(), pp) - basis.begin());
  };
  std::vector<SparseVector> gens;
  for (std::size_t v : g.x()) {
    std::map<std::size_t, FieldElement> q;
    q.emplace(find({{v, {}}, {v, {}}}), field.one());
    for (std::size_t e : g.out_edges(v)) {
      const Path p{v, {e}};
      q.emplace(find({p, p}), -field.one());
    }
    gens.emplace_back(q.begin(), q.end());
  }
  return gens;
}

/// C_K^X(E) = C_K(E) / <q_v : v in X>.
inline Algebra relative_cohn(const Graph& graph, const Field& field) {
  Algebra cohn = cohn_algebra(graph, field);
  const auto gens = xck2_generators(graph, field);
  if (gens.empty()) return cohn;
  return quotient_algebra_sparse(cohn, ideal_closure_sparse(cohn, gens));
}

/// L_K(E) = C_K^{Reg(E)}(E).
inline Algebra leavitt(const Graph& graph, const Field& field) {
  Graph g = graph;
  g.x = regular_vertices(graph);
  return relative_cohn(g, field);
}

/// Sum over sinks w of (number of paths ending at w)^2, counted on the DAG
/// without constructing any path or algebra.
inline std::size_t leavitt_dimension_oracle(const Graph& graph) {
  const IndexedGraph g(graph);
  require_acyclic(g);
  std::vector<std::optional<std::size_t>> into(g.vertex_count());
  std::vector<std::vector<std::size_t>> in_edges(g.vertex_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) in_edges[g.target(e)].push_back(e);
  // Memoized recursion over predecessors; depth bounded by the vertex count.
  auto count = [&](auto&& self, std::size_t w) -> std::size_t {
    if (into[w]) return *into[w];
    std::size_t total = 1;
    for (std::size_t e : in_edges[w]) total += self(self, g.source(e));
    into[w] = total;
    return total;
  };
  std::size_t dim = 0;
  for (std::size_t w = 0; w < g.vertex_count(); ++w) {
    if (g.out_edges(w).empty()) {
      const std::size_t n = count(count, w);
      dim += n * n;
    }
  }
  return dim;
}

}  // namespace isoalg

#endif  // ISOALG_GRAPHS_HPP
