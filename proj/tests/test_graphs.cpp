#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "isoalg/graphs.hpp"

using namespace isoalg;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;
}

Graph chain() { return Graph{{"v", "w", "u"}, {{"e", "v", "w"}, {"f", "w", "u"}}, {}}; }

Graph isolated(std::size_t n) {
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.vertices.push_back("v" + std::to_string(i));
  return g;
}

std::size_t index_of(const Algebra& a, const std::string& label) {
  const auto& l = a.labels();
  const auto it = std::find(l.begin(), l.end(), label);
  EXPECT_NE(it, l.end()) << label;
  return static_cast<std::size_t>(it - l.begin());
}

}  // namespace

TEST(Graphs, Validation) {
  EXPECT_TRUE(is_acyclic(isolated(1)));
  EXPECT_FALSE(is_acyclic(Graph{{"v"}, {{"e", "v", "v"}}, {}}));
  EXPECT_FALSE(is_acyclic(Graph{{"v", "w"}, {{"e", "v", "w"}, {"f", "w", "v"}}, {}}));
  EXPECT_TRUE(is_acyclic(corpus::a2_graph()));
  EXPECT_EQ(regular_vertices(corpus::a2_graph()), std::vector<std::string>{"v"});
  EXPECT_EQ(kind_of([] { validate_graph(Graph{{"v"}, {{"e", "v", "x"}}, {}}); }), ErrorKind::DanglingEdge);
  EXPECT_EQ(kind_of([] { validate_graph(Graph{{"v", "w"}, {{"e", "v", "w"}, {"e", "v", "w"}}, {}}); }),
            ErrorKind::DuplicateEdgeName);
  EXPECT_EQ(kind_of([] { validate_graph(Graph{{"v", "w"}, {{"e", "v", "w"}}, {"w"}}); }), ErrorKind::XNotRegular);
  EXPECT_EQ(kind_of([] { validate_graph(Graph{{"v", "v"}, {}, {}}); }), ErrorKind::DuplicateLabel);
  EXPECT_EQ(kind_of([] { validate_graph(Graph{{"a.b"}, {}, {}}); }), ErrorKind::ParseError);
}

TEST(Graphs, EnumeratePaths) {
  EXPECT_EQ(enumerate_paths(corpus::a2_graph()).size(), 3u);
  const IndexedGraph c(chain());
  std::vector<std::string> labels;
  for (const auto& p : enumerate_paths(c)) labels.push_back(c.label(p));
  EXPECT_EQ(labels, (std::vector<std::string>{"u", "v", "w", "e", "f", "e.f"}));
  EXPECT_EQ(enumerate_paths(isolated(4)).size(), 4u);
  EXPECT_EQ(kind_of([] { enumerate_paths(Graph{{"v"}, {{"e", "v", "v"}}, {}}); }), ErrorKind::NotAcyclic);
}

TEST(Graphs, PathAlgebra) {
  const Field q = Field::rationals();
  EXPECT_EQ(path_algebra(isolated(1), q).table(), field_algebra(q).table());
  const Algebra a2 = path_algebra(corpus::a2_graph(), q);
  EXPECT_EQ(a2.dim(), 3u);
  const std::size_t v = index_of(a2, "v"), w = index_of(a2, "w"), e = index_of(a2, "e");
  EXPECT_TRUE(multiply(a2, a2.basis_vector(e), a2.basis_vector(e)) == a2.zero_vector());
  EXPECT_EQ(multiply(a2, a2.basis_vector(v), a2.basis_vector(e)), a2.basis_vector(e));
  EXPECT_EQ(multiply(a2, a2.basis_vector(e), a2.basis_vector(w)), a2.basis_vector(e));
  const Algebra ch = path_algebra(chain(), q);
  EXPECT_EQ(ch.dim(), 6u);
  EXPECT_EQ(multiply(ch, ch.basis_vector(index_of(ch, "e")), ch.basis_vector(index_of(ch, "f"))),
            ch.basis_vector(index_of(ch, "e.f")));
  EXPECT_EQ(kind_of([&] { path_algebra(Graph{{"v"}, {{"e", "v", "v"}}, {}}, q); }), ErrorKind::NotAcyclic);
}

TEST(Graphs, CohnAlgebra) {
  const Field q = Field::rationals();
  EXPECT_EQ(cohn_algebra(isolated(1), q).table(), field_algebra(q).table());
  const Algebra c = cohn_algebra(corpus::a2_graph(), q);
  EXPECT_EQ(c.dim(), 5u);
  EXPECT_EQ(c.labels(), (std::vector<std::string>{"v", "w", "e*", "e", "e e*"}));
  const std::size_t w = index_of(c, "w"), es = index_of(c, "e*"), e = index_of(c, "e"), ee = index_of(c, "e e*");
  // (w,e) = e*, (e,w) = e.
  EXPECT_EQ(multiply(c, c.basis_vector(es), c.basis_vector(e)), c.basis_vector(w));
  EXPECT_EQ(multiply(c, c.basis_vector(e), c.basis_vector(es)), c.basis_vector(ee));
  EXPECT_TRUE(check_associative(c));
  EXPECT_EQ(kind_of([&] { cohn_algebra(Graph{{"v"}, {{"e", "v", "v"}}, {}}, q); }), ErrorKind::NotAcyclic);
}

TEST(Graphs, RelativeCohn) {
  const Field q = Field::rationals();
  const Algebra l = relative_cohn(corpus::a2_graph(), q);
  EXPECT_EQ(l.dim(), 4u);
  EXPECT_TRUE(check_associative(l));
  EXPECT_TRUE(find_unit(l).has_value());
  Graph empty_x = chain();
  EXPECT_EQ(relative_cohn(empty_x, q), cohn_algebra(empty_x, q));
  EXPECT_EQ(relative_cohn(isolated(2), q).table(), direct_sum(field_algebra(q), field_algebra(q)).table());
  EXPECT_EQ(kind_of([&] { relative_cohn(Graph{{"v", "w"}, {{"e", "v", "w"}}, {"w"}}, q); }), ErrorKind::XNotRegular);
}

TEST(Graphs, Leavitt) {
  const Field q = Field::rationals();
  EXPECT_EQ(leavitt(corpus::a2_graph(), q).dim(), 4u);
  EXPECT_EQ(leavitt(isolated(3), q).table(), evolution_algebra(q, {{q.one(), q.zero(), q.zero()},
                                                                   {q.zero(), q.one(), q.zero()},
                                                                   {q.zero(), q.zero(), q.one()}})
                                                 .table());
  EXPECT_EQ(leavitt(chain(), q).dim(), 9u);
}

TEST(Graphs, IdealClosure) {
  const Field q = Field::rationals();
  const Algebra kk = direct_sum(field_algebra(q), field_algebra(q));
  EXPECT_TRUE(ideal_closure(kk, {}).empty());
  const auto i0 = ideal_closure(kk, {kk.basis_vector(0)});
  ASSERT_EQ(i0.size(), 1u);
  EXPECT_EQ(i0[0], kk.basis_vector(0));
  const Algebra c = cohn_algebra(corpus::a2_graph(), q);
  EXPECT_EQ(ideal_closure_sparse(c, xck2_generators(Graph{{"v", "w"}, {{"e", "v", "w"}}, {"v"}}, q)).size(), 1u);
}

TEST(Graphs, Quotient) {
  const Field q = Field::rationals();
  const Algebra kk = direct_sum(field_algebra(q), field_algebra(q));
  EXPECT_EQ(quotient_algebra(kk, {}), kk);
  const Algebra k = quotient_algebra(kk, {kk.basis_vector(0)});
  EXPECT_EQ(k.dim(), 1u);
  EXPECT_EQ(k.table(), field_algebra(q).table());
  EXPECT_EQ(kind_of([&] { quotient_algebra(kk, {Vector{q.one(), q.one()}}); }), ErrorKind::NotAnIdeal);
  const Algebra c = cohn_algebra(corpus::a2_graph(), q);
  const Algebra l = quotient_algebra_sparse(c, xck2_generators(corpus::a2_graph(), q));
  EXPECT_EQ(l.dim(), 4u);
  EXPECT_TRUE(check_associative(l));
  EXPECT_TRUE(find_unit(l).has_value());
}

TEST(Graphs, DimensionOracle) {
  EXPECT_EQ(leavitt_dimension_oracle(corpus::a2_graph()), 4u);
  EXPECT_EQ(leavitt_dimension_oracle(chain()), 9u);
  EXPECT_EQ(leavitt_dimension_oracle(isolated(5)), 5u);
  EXPECT_EQ(kind_of([] { leavitt_dimension_oracle(Graph{{"v"}, {{"e", "v", "v"}}, {}}); }), ErrorKind::NotAcyclic);
}

TEST(Graphs, RandomGraphProperties) {
  std::mt19937 rng(77);
  const Field f = Field::prime(3);
  for (int s = 0; s < 25; ++s) {
    const Graph g = corpus::random_acyclic_graph(rng);
    const Algebra cohn = cohn_algebra(g, f);
    const Algebra l = leavitt(g, f);
    EXPECT_EQ(cohn.dim(), corpus::cohn_dim_brute(g));
    EXPECT_EQ(l.dim(), corpus::leavitt_dim_brute(g));
    EXPECT_EQ(l.dim(), leavitt_dimension_oracle(g));
    EXPECT_TRUE(check_associative(cohn));
    EXPECT_TRUE(check_associative(l));
    const auto unit = find_unit(cohn);
    ASSERT_TRUE(unit.has_value());
    for (std::size_t i = 0; i < cohn.dim(); ++i) {
      // The unit is the sum of the vertices.
      const bool is_vertex = std::find(g.vertices.begin(), g.vertices.end(), cohn.labels()[i]) != g.vertices.end();
      EXPECT_EQ((*unit)[i], is_vertex ? f.one() : f.zero());
    }
    EXPECT_TRUE(find_unit(l).has_value());
    const Algebra rel = relative_cohn(g, f);
    const auto ideal = ideal_closure_sparse(cohn, xck2_generators(g, f));
    EXPECT_EQ(rel.dim(), cohn.dim() - ideal.size());
  }
}

TEST(Graphs, BaseChangeInvariance) {
  std::mt19937 rng(3);
  for (const auto& [k, l] : std::vector<std::pair<Field, Field>>{{Field::prime(2), corpus::f4()},
                                                                 {Field::rationals(), corpus::q_i()}}) {
    for (int s = 0; s < 10; ++s) {
      const Graph g = corpus::random_acyclic_graph(rng);
      EXPECT_EQ(scalar_extension(relative_cohn(g, k), l), relative_cohn(g, l));
    }
  }
}
