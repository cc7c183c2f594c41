#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "isoalg/polysys.hpp"

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

Vector row_vector(const Matrix& t, std::size_t i) {
  Vector v(t.cols(), t.field().zero());
  for (std::size_t j = 0; j < t.cols(); ++j) v[j] = t(i, j);
  return v;
}

// f(e_i e_j) == f(e_i) f(e_j) checked directly in B.
bool is_homomorphism(const Algebra& a, const Algebra& b, const Matrix& t) {
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Vector prod = multiply(a, a.basis_vector(i), a.basis_vector(j));
      Vector image(n, a.field().zero());
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t m = 0; m < n; ++m) image[m] = image[m] + prod[k] * t(k, m);
      }
      if (image != multiply(b, row_vector(t, i), row_vector(t, j))) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Polysys, ShapeAndNames) {
  const Field q = Field::rationals();
  const IsoSystem one = build_iso_system(field_algebra(q), field_algebra(q));
  EXPECT_EQ(one.ring->names(), (std::vector<std::string>{"T_0_0", "S_0_0"}));
  ASSERT_EQ(one.generators.size(), 2u);
  EXPECT_EQ(one.generators[0].to_string(), "-1*T_0_0^2 + 1*T_0_0");
  EXPECT_EQ(one.generators[1].to_string(), "1*T_0_0*S_0_0 + -1");
  EXPECT_EQ(one.provenance[0].to_string(), "P(0,0,0)");
  EXPECT_EQ(one.provenance[1].to_string(), "Q(0,0)");
  for (std::size_t n : {2u, 3u, 4u}) {
    const Algebra m = n == 4 ? matrix_algebra(q, 2) : evolution_algebra(q, std::vector<std::vector<FieldElement>>(
                                                                               n, std::vector<FieldElement>(n, q.one())));
    const IsoSystem s1 = build_iso_system(m, m);
    const IsoSystem s2 = build_iso_system(m, m, true);
    EXPECT_EQ(s1.generators.size(), n * n * n + n * n);
    EXPECT_EQ(s2.generators.size(), n * n * n + 2 * n * n);
    EXPECT_EQ(s1.ring->nvars(), 2 * n * n);
    EXPECT_EQ(s2.provenance.back().to_string(), "R(" + std::to_string(n - 1) + "," + std::to_string(n - 1) + ")");
    EXPECT_EQ(s1.ring->names()[s1.t_var(1, 0)], "T_1_0");
    EXPECT_EQ(s1.ring->names()[s1.s_var(0, 1)], "S_0_1");
    for (const auto& g : s1.generators) EXPECT_LE(g.total_degree(), 2u);
  }
  EXPECT_EQ(build_iso_system(field_algebra(q), field_algebra(q), false, OrderKind::Lex).ring->order().kind(),
            OrderKind::Lex);
}

TEST(Polysys, Errors) {
  const Field q = Field::rationals();
  EXPECT_EQ(kind_of([&] { build_iso_system(field_algebra(q), dual_numbers(q)); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([&] { build_iso_system(field_algebra(q), field_algebra(Field::prime(2))); }),
            ErrorKind::FieldMismatch);
  EXPECT_EQ(kind_of([&] { verify_candidate(dual_numbers(q), dual_numbers(q), {Matrix(q, 2, 2), std::nullopt}); }),
            ErrorKind::SingularCandidate);
  EXPECT_EQ(kind_of([&] { verify_candidate(dual_numbers(q), dual_numbers(q), {Matrix::identity(q, 3), std::nullopt}); }),
            ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([&] {
              verify_candidate(dual_numbers(q), dual_numbers(q), {Matrix::identity(Field::prime(2), 2), std::nullopt});
            }),
            ErrorKind::FieldMismatch);
}

TEST(Polysys, ExplicitInverseIsChecked) {
  const Field q = Field::rationals();
  const Algebra d = dual_numbers(q);
  const Verification v = verify_candidate(d, d, {Matrix(q, 2, 2), Matrix(q, 2, 2)});
  EXPECT_FALSE(v.ok());
  EXPECT_TRUE(v.violates(GeneratorTag::Q));
  EXPECT_TRUE(v.violates(GeneratorTag::R));
  const Verification wrong_s = verify_candidate(d, d, {Matrix::identity(q, 2), Matrix::identity(q, 2) * Matrix::identity(q, 2)});
  EXPECT_TRUE(wrong_s.ok());
}

TEST(Polysys, TransportedAlgebrasVerify) {
  std::mt19937 rng(17);
  for (const auto& [name, a] : corpus::standard_algebras()) {
    const Field& f = a.field();
    const Verification id = verify_candidate(a, a, {Matrix::identity(f, a.dim()), std::nullopt});
    EXPECT_TRUE(id.ok()) << name;
    for (int s = 0; s < 3; ++s) {
      const Matrix t = corpus::random_invertible(f, a.dim(), rng);
      const Algebra b = corpus::transport(a, t);
      const Verification v = verify_candidate(a, b, {t, std::nullopt});
      ASSERT_TRUE(v.ok()) << name;
      EXPECT_EQ(v.certificate->t * v.certificate->s, Matrix::identity(f, a.dim()));
      const Certificate back = v.certificate->inverted();
      EXPECT_TRUE(verify_candidate(b, a, {back.t, back.s}).ok()) << name;
    }
  }
}

TEST(Polysys, ZerosAreExactlyIsomorphisms) {
  std::mt19937 rng(21);
  const Field f = Field::prime(3);
  for (const auto& [name, a] : corpus::standard_algebras()) {
    if (a.field() != f || a.dim() > 4) continue;
    const Algebra b = corpus::transport(a, corpus::random_invertible(f, a.dim(), rng));
    for (int s = 0; s < 200; ++s) {
      const Matrix t = corpus::random_invertible(f, a.dim(), rng);
      const Verification v = verify_candidate(a, b, {t, std::nullopt});
      EXPECT_EQ(v.ok(), is_homomorphism(a, b, t)) << name;
      if (!v.ok()) {
        EXPECT_TRUE(v.violates(GeneratorTag::P));
        EXPECT_FALSE(v.violates(GeneratorTag::Q));
      }
    }
  }
}

TEST(Polysys, RowConventionMatters) {
  const Field q = Field::rationals();
  const Algebra a = path_algebra(corpus::a2_graph(), q);
  // A non-symmetric basis change: its transpose is not an isomorphism onto the
  // transported algebra.
  Matrix t = Matrix::identity(q, 3);
  t(0, 2) = q.from_int(2);
  t(1, 0) = q.from_int(1);
  const Algebra b = corpus::transport(a, t);
  EXPECT_TRUE(verify_candidate(a, b, {t, std::nullopt}).ok());
  Matrix tt(q, 3, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) tt(i, j) = t(j, i);
  }
  EXPECT_FALSE(verify_candidate(a, b, {tt, std::nullopt}).ok());
}

TEST(Polysys, Specialization) {
  const Field q = Field::rationals();
  const Algebra d = dual_numbers(q);
  // eps -> x eps is an automorphism for every nonzero x.
  PolyMatrix t{{UnivariatePolynomial::parse(q, "1"), UnivariatePolynomial(q)},
               {UnivariatePolynomial(q), UnivariatePolynomial::parse(q, "x")}};
  for (int c : {1, 2, -3}) EXPECT_TRUE(verify_candidate(d, d, specialize_iso(t, q.from_int(c), d, d)).ok());
  EXPECT_EQ(kind_of([&] { verify_candidate(d, d, specialize_iso(t, q.zero(), d, d)); }), ErrorKind::SingularCandidate);
  EXPECT_EQ(kind_of([&] { specialize_iso(t, Field::prime(3).one(), d, d); }), ErrorKind::FieldMismatch);

  const UnivariatePolynomial p = UnivariatePolynomial::parse(q, "1/2 + 3*x^2");
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(p.evaluate(q.from_int(2)), q.parse_element("25/2"));
  EXPECT_EQ(UnivariatePolynomial::parse(q, p.to_string()), p);
}

TEST(Polysys, EvaluationIsARingHomomorphism) {
  std::mt19937 rng(9);
  const Field f = Field::prime(7);
  auto random_upoly = [&] {
    std::vector<FieldElement> c;
    for (int i = 0; i < 3; ++i) c.push_back(corpus::random_element(f, rng));
    return UnivariatePolynomial(f, c);
  };
  for (int s = 0; s < 100; ++s) {
    PolyMatrix a(2), b(2);
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        a[i].push_back(random_upoly());
        b[i].push_back(random_upoly());
      }
    }
    const FieldElement c = corpus::random_element(f, rng);
    EXPECT_EQ(evaluate_matrix(poly_matrix_multiply(a, b), c), evaluate_matrix(a, c) * evaluate_matrix(b, c));
  }
  const Matrix m = corpus::random_matrix(f, 3, rng);
  EXPECT_EQ(evaluate_matrix(constant_poly_matrix(m), f.from_int(5)), m);
}

TEST(Polysys, PrefilterReasons) {
  const Field q = Field::rationals(), f2 = Field::prime(2);
  const Algebra kk = direct_sum(field_algebra(q), field_algebra(q));
  EXPECT_EQ(invariant_prefilter(field_algebra(q), matrix_algebra(q, 2)).reason, "dim: 1 vs 4");
  EXPECT_EQ(invariant_prefilter(dual_numbers(q), kk).reason, "derivation_dim: 1 vs 0");
  EXPECT_EQ(invariant_prefilter(path_algebra(corpus::a2_graph(), q), Algebra(q, 3, {}, {})).reason,
            "unit: true vs false");
  EXPECT_TRUE(invariant_prefilter(dual_numbers(f2), group_algebra(f2, cyclic_group_table(2))).pass);
  EXPECT_TRUE(invariant_prefilter(leavitt(corpus::a2_graph(), f2), matrix_algebra(f2, 2)).pass);
  const PrefilterResult comm = invariant_prefilter(matrix_algebra(q, 2), direct_sum(kk, kk));
  EXPECT_FALSE(comm.pass);
  EXPECT_EQ(comm.reason, "commutativity: false vs true");
  EXPECT_THROW(invariant_prefilter(field_algebra(q), field_algebra(f2)), Error);
}

TEST(Polysys, InvariantsAgreeOnIsomorphicPairs) {
  std::mt19937 rng(4);
  for (const auto& [name, a] : corpus::standard_algebras()) {
    if (a.field().kind() == FieldKind::Rationals && a.dim() > 5) continue;
    const Algebra b = corpus::transport(a, corpus::random_invertible(a.field(), a.dim(), rng));
    const AlgebraInvariants x = compute_invariants(a), y = compute_invariants(b);
    EXPECT_EQ(x.dim, y.dim) << name;
    EXPECT_EQ(x.has_unit, y.has_unit) << name;
    EXPECT_EQ(x.associative, y.associative) << name;
    EXPECT_EQ(x.commutative, y.commutative) << name;
    EXPECT_EQ(x.centroid, y.centroid) << name;
    EXPECT_EQ(x.derivations, y.derivations) << name;
    EXPECT_TRUE(invariant_prefilter(a, b).pass) << name;
  }
}
