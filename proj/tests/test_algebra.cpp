#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "corpus.hpp"
#include "isoalg/algebra.hpp"

using namespace isoalg;

namespace {

Vector image(const Algebra& a, const std::vector<FieldElement>& t, const Vector& x) {
  const std::size_t n = a.dim();
  Vector out(n, a.field().zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[j] += x[i] * t[i * n + j];
  }
  return out;
}

Vector add(const Vector& x, const Vector& y) {
  Vector out = x;
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += y[i];
  return out;
}

// Counts all linear maps satisfying the derivation (or centroid) identities
// by enumeration over a finite field, and returns log_q of the count.
std::size_t brute_kernel_dim(const Algebra& a, bool derivation) {
  const Field& f = a.field();
  const std::uint64_t q = *f.size();
  const std::size_t n = a.dim();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n * n; ++i) total *= q;
  std::uint64_t count = 0;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<FieldElement> t;
    std::uint64_t rest = idx;
    for (std::size_t i = 0; i < n * n; ++i) {
      t.push_back(f.element_at(rest % q));
      rest /= q;
    }
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      for (std::size_t j = 0; j < n && ok; ++j) {
        const Vector ei = a.basis_vector(i), ej = a.basis_vector(j);
        const Vector lhs = image(a, t, multiply(a, ei, ej));
        const Vector left = multiply(a, ei, image(a, t, ej));
        const Vector right = multiply(a, image(a, t, ei), ej);
        if (derivation) ok = lhs == add(left, right);
        else ok = lhs == left && lhs == right;
      }
    }
    if (ok) ++count;
  }
  std::size_t d = 0;
  while (count > 1) {
    EXPECT_EQ(count % q, 0u);
    count /= q;
    ++d;
  }
  return d;
}

}  // namespace

TEST(Algebra, MakeAlgebraExamples) {
  const Field q = Field::rationals();
  const Algebra k = make_algebra(q, 1, {}, std::vector<RawTableEntry>{{0, 0, 0, "1"}});
  EXPECT_EQ(k.table(), field_algebra(q).table());
  const Algebra dual = make_algebra(q, 2, {"1", "eps"}, std::vector<RawTableEntry>{{0, 0, 0, "1"}, {0, 1, 1, "1"}, {1, 0, 1, "1"}});
  EXPECT_EQ(dual, dual_numbers(q));
  const Algebra m2 = matrix_algebra(q, 2);
  EXPECT_EQ(make_algebra(q, 4, m2.labels(), m2.table()), m2);
}

TEST(Algebra, MakeAlgebraMergesAndDrops) {
  const Field f = Field::prime(3);
  const Algebra a = make_algebra(f, 2, {}, std::vector<RawTableEntry>{{1, 1, 0, "1"}, {0, 0, 0, "2"}, {0, 0, 0, "1"}, {1, 1, 0, "1"}});
  ASSERT_EQ(a.table().size(), 1u);
  EXPECT_EQ(a.table()[0].i, 1u);
  EXPECT_EQ(a.table()[0].coeff, f.from_int(2));
  EXPECT_EQ(a.labels(), (std::vector<std::string>{"e0", "e1"}));
}

TEST(Algebra, MakeAlgebraErrors) {
  const Field f = Field::rationals();
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  EXPECT_EQ(kind_of([&] { make_algebra(f, 2, {}, std::vector<RawTableEntry>{{0, 2, 0, "1"}}); }), ErrorKind::IndexOutOfRange);
  EXPECT_EQ(kind_of([&] { make_algebra(f, 2, {"a", "a"}, std::vector<RawTableEntry>{}); }), ErrorKind::DuplicateLabel);
  EXPECT_EQ(kind_of([&] { make_algebra(f, 1, {}, std::vector<RawTableEntry>{{0, 0, 0, "x"}}); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([&] { make_algebra(f, 0, {}, std::vector<RawTableEntry>{}); }), ErrorKind::IndexOutOfRange);
}

TEST(Algebra, MultiplyExamples) {
  const Field q = Field::rationals();
  const Algebra dual = dual_numbers(q);
  EXPECT_EQ(multiply(dual, dual.basis_vector(0), dual.basis_vector(1)), dual.basis_vector(1));
  EXPECT_EQ(multiply(dual, dual.basis_vector(1), dual.basis_vector(1)), dual.zero_vector());
  const Algebra m2 = matrix_algebra(q, 2);
  // E_12 = index 1, E_21 = index 2, E_11 = index 0.
  EXPECT_EQ(multiply(m2, m2.basis_vector(1), m2.basis_vector(2)), m2.basis_vector(0));
  EXPECT_THROW(multiply(m2, dual.basis_vector(0), m2.basis_vector(0)), Error);
}

TEST(Algebra, MultiplyIsBilinear) {
  std::mt19937 rng(5);
  for (const auto& [name, a] : corpus::standard_algebras()) {
    const Field& f = a.field();
    for (int s = 0; s < 20; ++s) {
      Vector x(a.dim(), f.zero()), x2 = x, y = x;
      for (std::size_t i = 0; i < a.dim(); ++i) {
        x[i] = corpus::random_element(f, rng);
        x2[i] = corpus::random_element(f, rng);
        y[i] = corpus::random_element(f, rng);
      }
      const FieldElement alpha = corpus::random_element(f, rng);
      Vector combo(a.dim(), f.zero());
      for (std::size_t i = 0; i < a.dim(); ++i) combo[i] = alpha * x[i] + x2[i];
      Vector expect = multiply(a, x2, y);
      const Vector xy = multiply(a, x, y);
      for (std::size_t i = 0; i < a.dim(); ++i) expect[i] += alpha * xy[i];
      EXPECT_EQ(multiply(a, combo, y), expect) << name;
      Vector ycombo(a.dim(), f.zero());
      for (std::size_t i = 0; i < a.dim(); ++i) ycombo[i] = alpha * x[i] + x2[i];
      Vector expect_r = multiply(a, y, x2);
      const Vector yx = multiply(a, y, x);
      for (std::size_t i = 0; i < a.dim(); ++i) expect_r[i] += alpha * yx[i];
      EXPECT_EQ(multiply(a, y, ycombo), expect_r) << name;
    }
  }
}

TEST(Algebra, MatrixAlgebra) {
  const Field q = Field::rationals();
  EXPECT_EQ(matrix_algebra(q, 1).table(), field_algebra(q).table());
  const Algebra m2 = matrix_algebra(q, 2);
  EXPECT_EQ(m2.dim(), 4u);
  EXPECT_EQ(m2.table().size(), 8u);
  EXPECT_EQ(m2.labels(), (std::vector<std::string>{"E_1_1", "E_1_2", "E_2_1", "E_2_2"}));
  EXPECT_TRUE(check_associative(matrix_algebra(q, 3)));
  EXPECT_EQ(matrix_algebra(q, 3).table().size(), 27u);
}

TEST(Algebra, GroupAlgebra) {
  const Field f2 = Field::prime(2);
  EXPECT_EQ(group_algebra(f2, {{0}}).table(), field_algebra(f2).table());
  const Algebra z2 = group_algebra(Field::rationals(), cyclic_group_table(2));
  EXPECT_EQ(multiply(z2, z2.basis_vector(1), z2.basis_vector(1)), z2.basis_vector(0));
  const Algebra z3 = group_algebra(f2, cyclic_group_table(3));
  EXPECT_EQ(z3.dim(), 3u);
  EXPECT_EQ(z3.table().size(), 9u);
  EXPECT_TRUE(check_commutative(z3));
  // Klein four-group.
  const Algebra v4 = group_algebra(f2, {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}});
  EXPECT_TRUE(check_associative(v4));
}

TEST(Algebra, GroupAlgebraErrors) {
  const Field f = Field::prime(2);
  for (const auto& bad : std::vector<std::vector<std::vector<std::size_t>>>{
           {{0, 1}, {1, 2}},        // closure
           {{1, 0}, {0, 1}},        // Z/2 with identity 1
           {{0, 1}, {1, 1}},        // no inverse for 1
           {{0, 1, 2}, {1, 0, 0}, {2, 0, 0}},  // not a Latin square
           {}}) {
    bool group = true;
    try {
      group_algebra(f, bad);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NotAGroup);
      group = false;
    }
    EXPECT_EQ(group, bad.size() == 2 && bad[0][0] == 1);
  }
}

TEST(Algebra, EvolutionAlgebra) {
  const Field q = Field::rationals();
  const Algebra id = evolution_algebra(q, {{q.one(), q.zero()}, {q.zero(), q.one()}});
  EXPECT_EQ(id.table(), direct_sum(field_algebra(q), field_algebra(q)).table());
  const Algebra zero = evolution_algebra(q, {{q.zero(), q.zero()}, {q.zero(), q.zero()}});
  EXPECT_TRUE(zero.table().empty());
  const Algebra nil = evolution_algebra(q, {{q.zero(), q.one()}, {q.zero(), q.zero()}});
  EXPECT_EQ(multiply(nil, nil.basis_vector(0), nil.basis_vector(0)), nil.basis_vector(1));
  EXPECT_EQ(multiply(nil, nil.basis_vector(1), nil.basis_vector(1)), nil.zero_vector());
  EXPECT_TRUE(check_commutative(nil));
  EXPECT_TRUE(check_associative(nil));
  EXPECT_FALSE(find_unit(nil).has_value());
  EXPECT_THROW(evolution_algebra(q, {{q.one()}, {q.one()}}), Error);
  // v0^2 = v1, v1^2 = v0 is not associative: (v0 v0) v1 = v0 but v0 (v0 v1) = 0.
  EXPECT_FALSE(check_associative(evolution_algebra(q, {{q.zero(), q.one()}, {q.one(), q.zero()}})));
}

TEST(Algebra, DirectSum) {
  const Field q = Field::rationals();
  const Algebra k = field_algebra(q);
  const Algebra kk = direct_sum(k, k);
  EXPECT_EQ(multiply(kk, kk.basis_vector(0), kk.basis_vector(1)), kk.zero_vector());
  EXPECT_EQ(multiply(kk, kk.basis_vector(1), kk.basis_vector(1)), kk.basis_vector(1));
  const Algebra kkk = direct_sum(kk, k);
  EXPECT_EQ(kkk.table(), evolution_algebra(q, {{q.one(), q.zero(), q.zero()},
                                               {q.zero(), q.one(), q.zero()},
                                               {q.zero(), q.zero(), q.one()}})
                             .table());
  EXPECT_EQ(kkk.labels(), (std::vector<std::string>{"1", "1'", "1''"}));
  std::mt19937 rng(1);
  const auto algebras = corpus::standard_algebras();
  for (int s = 0; s < 20; ++s) {
    const Algebra& a = algebras[rng() % algebras.size()].algebra;
    const Algebra& b = algebras[rng() % algebras.size()].algebra;
    if (a.field() != b.field()) {
      EXPECT_THROW(direct_sum(a, b), Error);
      continue;
    }
    EXPECT_EQ(direct_sum(a, b).dim(), a.dim() + b.dim());
  }
}

TEST(Algebra, ScalarExtension) {
  const Field f2 = Field::prime(2);
  const Field f4 = corpus::f4();
  const Algebra d = scalar_extension(dual_numbers(f2), f4);
  EXPECT_EQ(d.field(), f4);
  ASSERT_EQ(d.table().size(), dual_numbers(f2).table().size());
  for (std::size_t i = 0; i < d.table().size(); ++i) {
    EXPECT_EQ(d.table()[i].i, dual_numbers(f2).table()[i].i);
    EXPECT_EQ(d.table()[i].k, dual_numbers(f2).table()[i].k);
  }
  EXPECT_EQ(scalar_extension(matrix_algebra(Field::rationals(), 2), corpus::q_i()),
            matrix_algebra(corpus::q_i(), 2));
  try {
    scalar_extension(dual_numbers(f2), Field::prime(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAnExtension);
  }
}

TEST(Algebra, ScalarExtensionThroughTower) {
  const Field f2 = Field::prime(2);
  const Field f4 = corpus::f4();
  const Field f16 = Field::parse("ext:ext:Fp:2:1+1*y+1*y^2:y+1*z+1*z^2");
  for (const auto& [name, a] : corpus::standard_algebras()) {
    if (a.field() != f2) continue;
    const Algebra two_step = scalar_extension(scalar_extension(a, f4), f16);
    const Algebra one_step = scalar_extension(a, f16);
    EXPECT_EQ(two_step, one_step) << name;
    EXPECT_EQ(check_associative(a), check_associative(one_step)) << name;
    EXPECT_EQ(check_commutative(a), check_commutative(one_step)) << name;
  }
}

TEST(Algebra, StructuralChecks) {
  const Field q = Field::rationals();
  const Algebra m2 = matrix_algebra(q, 2);
  EXPECT_TRUE(check_associative(m2));
  EXPECT_FALSE(check_commutative(m2));
  const auto u = find_unit(m2);
  ASSERT_TRUE(u.has_value());
  EXPECT_EQ(*u, (Vector{q.one(), q.zero(), q.zero(), q.one()}));
  const auto kk = find_unit(direct_sum(field_algebra(q), field_algebra(q)));
  ASSERT_TRUE(kk.has_value());
  EXPECT_EQ(*kk, (Vector{q.one(), q.one()}));
  EXPECT_FALSE(check_commutative(quaternion_algebra(q, -q.one(), -q.one())));
}

TEST(Algebra, UnitIsAUnit) {
  for (const auto& [name, a] : corpus::standard_algebras()) {
    const auto u = find_unit(a);
    if (!u) continue;
    for (std::size_t i = 0; i < a.dim(); ++i) {
      EXPECT_EQ(multiply(a, *u, a.basis_vector(i)), a.basis_vector(i)) << name;
      EXPECT_EQ(multiply(a, a.basis_vector(i), *u), a.basis_vector(i)) << name;
    }
  }
}

TEST(Algebra, InvariantExamples) {
  EXPECT_EQ(centroid_dim(matrix_algebra(Field::rationals(), 2)), 1u);
  EXPECT_EQ(derivation_dim(field_algebra(Field::rationals())), 0u);
  EXPECT_EQ(derivation_dim(matrix_algebra(Field::prime(5), 2)), 3u);
}

TEST(Algebra, InvariantsMatchBruteForce) {
  for (const Field& f : {Field::prime(2), Field::prime(3)}) {
    std::vector<Algebra> small = {field_algebra(f), dual_numbers(f), group_algebra(f, cyclic_group_table(2)),
                                  direct_sum(field_algebra(f), field_algebra(f)),
                                  evolution_algebra(f, {{f.zero(), f.one()}, {f.zero(), f.zero()}}),
                                  evolution_algebra(f, {{f.zero(), f.zero()}, {f.zero(), f.zero()}}),
                                  evolution_algebra(f, {{f.one(), f.one()}, {f.one(), f.zero()}}),
                                  path_algebra(corpus::a2_graph(), f)};
    if (f.characteristic() == 2) small.push_back(group_algebra(f, cyclic_group_table(3)));
    for (const Algebra& a : small) {
      EXPECT_EQ(derivation_dim(a), brute_kernel_dim(a, true)) << f.to_string();
      EXPECT_EQ(centroid_dim(a), brute_kernel_dim(a, false)) << f.to_string();
    }
  }
}
