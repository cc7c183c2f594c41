#ifndef ISOALG_ALGEBRA_HPP
#define ISOALG_ALGEBRA_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "isoalg/error.hpp"
#include "isoalg/linalg.hpp"
#include "isoalg/scalars.hpp"

namespace isoalg {

/// One structure constant: e_i * e_j contains coeff * e_k.
struct TableEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  FieldElement coeff;

  friend bool operator==(const TableEntry& a, const TableEntry& b) {
    return a.i == b.i && a.j == b.j && a.k == b.k && a.coeff == b.coeff;
  }
};

/// Dense coordinate vector of an algebra element.
using Vector = std::vector<FieldElement>;

/// Finite-dimensional, not necessarily associative algebra given by a sparse
/// structure-constant table over a field. Immutable once constructed.
class Algebra {
 public:
  /// Validates indices and labels, sums repeated (i,j,k) entries, drops
  /// zero coefficients and sorts the table by (i,j,k).
  Algebra(Field field, std::size_t dim, std::vector<std::string> labels, std::vector<TableEntry> entries)
      : field_(std::move(field)), dim_(dim), labels_(std::move(labels)) {
    if (dim_ == 0) throw Error(ErrorKind::IndexOutOfRange, "algebra dimension must be positive");
    if (labels_.empty()) {
      for (std::size_t i = 0; i < dim_; ++i) labels_.push_back("e" + std::to_string(i));
    }
    if (labels_.size() != dim_) {
      throw Error(ErrorKind::IndexOutOfRange, "expected " + std::to_string(dim_) + " labels, got " +
                                                  std::to_string(labels_.size()));
    }
    std::set<std::string> seen;
    for (const auto& l : labels_) {
      if (!seen.insert(l).second) throw Error(ErrorKind::DuplicateLabel, "label '" + l + "' repeated");
    }
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, FieldElement> merged;
    for (auto& e : entries) {
      if (e.i >= dim_ || e.j >= dim_ || e.k >= dim_) {
        throw Error(ErrorKind::IndexOutOfRange, "table entry (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                                                    "," + std::to_string(e.k) + ") outside dimension " +
                                                    std::to_string(dim_));
      }
      if (e.coeff.field() != field_) {
        throw Error(ErrorKind::DescriptorMismatch, "table coefficient over " + e.coeff.field().to_string());
      }
      auto key = std::make_tuple(e.i, e.j, e.k);
      auto it = merged.find(key);
      if (it == merged.end()) {
        merged.emplace(key, e.coeff);
      } else {
        it->second += e.coeff;
      }
    }
    products_.assign(dim_ * dim_, {});
    for (auto& [key, c] : merged) {
      if (c.is_zero()) continue;
      const auto [i, j, k] = key;
      table_.push_back({i, j, k, c});
      products_[i * dim_ + j].emplace_back(k, c);
    }
  }

  const Field& field() const { return field_; }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<TableEntry>& table() const { return table_; }

  /// e_i * e_j as a sparse vector.
  const SparseVector& product(std::size_t i, std::size_t j) const { return products_[i * dim_ + j]; }

  Vector basis_vector(std::size_t i) const {
    Vector v(dim_, field_.zero());
    v.at(i) = field_.one();
    return v;
  }

  Vector zero_vector() const { return Vector(dim_, field_.zero()); }

  friend bool operator==(const Algebra& a, const Algebra& b) {
    return a.field_ == b.field_ && a.dim_ == b.dim_ && a.labels_ == b.labels_ && a.table_ == b.table_;
  }

 private:
  Field field_;
  std::size_t dim_;
  std::vector<std::string> labels_;
  std::vector<TableEntry> table_;
  std::vector<SparseVector> products_;
};

/// Table entry with its coefficient still in text form.
struct RawTableEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  std::string coeff;
};

inline Algebra make_algebra(const Field& field, std::size_t dim, std::vector<std::string> labels,
                            std::vector<TableEntry> entries) {
  return Algebra(field, dim, std::move(labels), std::move(entries));
}

inline Algebra make_algebra(const Field& field, std::size_t dim, std::vector<std::string> labels,
                            const std::vector<RawTableEntry>& entries) {
  std::vector<TableEntry> parsed;
  parsed.reserve(entries.size());
  for (const auto& e : entries) parsed.push_back({e.i, e.j, e.k, field.parse_element(e.coeff)});
  return Algebra(field, dim, std::move(labels), std::move(parsed));
}

/// Product of two sparse elements.
inline SparseVector multiply_sparse(const Algebra& a, const SparseVector& x, const SparseVector& y) {
  std::map<std::size_t, FieldElement> acc;
  for (const auto& [i, xi] : x) {
    for (const auto& [j, yj] : y) {
      const FieldElement xy = xi * yj;
      for (const auto& [k, c] : a.product(i, j)) {
        auto it = acc.find(k);
        if (it == acc.end()) {
          acc.emplace(k, xy * c);
        } else {
          it->second += xy * c;
        }
      }
    }
  }
  SparseVector out;
  for (auto& [k, c] : acc) {
    if (!c.is_zero()) out.emplace_back(k, std::move(c));
  }
  return out;
}

inline SparseVector basis_sparse(const Algebra& a, std::size_t i) { return {{i, a.field().one()}}; }

/// z_k = sum_{i,j} x_i y_j gamma_ij^k.
inline Vector multiply(const Algebra& a, const Vector& x, const Vector& y) {
  if (x.size() != a.dim() || y.size() != a.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "vector length differs from algebra dimension");
  }
  for (const auto* v : {&x, &y}) {
    for (const auto& c : *v) {
      if (c.field() != a.field()) throw Error(ErrorKind::DescriptorMismatch, "vector over wrong field");
    }
  }
  return to_dense(multiply_sparse(a, to_sparse(x), to_sparse(y)), a.field(), a.dim());
}

// ---------------------------------------------------------------------------
// Constructors

/// The ground field as a one-dimensional algebra.
inline Algebra field_algebra(const Field& field) {
  return Algebra(field, 1, {"1"}, {{0, 0, 0, field.one()}});
}

/// K[eps]/(eps^2) on the basis {1, eps}.
inline Algebra dual_numbers(const Field& field) {
  const auto one = field.one();
  return Algebra(field, 2, {"1", "eps"}, {{0, 0, 0, one}, {0, 1, 1, one}, {1, 0, 1, one}});
}

/// M_n(K) on the matrix units E_a_b (1-based), with E_ab E_cd = delta_bc E_ad.
inline Algebra matrix_algebra(const Field& field, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::IndexOutOfRange, "matrix algebra size must be positive");
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) labels.push_back("E_" + std::to_string(a + 1) + "_" + std::to_string(b + 1));
  }
  std::vector<TableEntry> entries;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t d = 0; d < n; ++d) entries.push_back({a * n + b, b * n + d, a * n + d, field.one()});
    }
  }
  return Algebra(field, n * n, std::move(labels), std::move(entries));
}

/// Multiplication table of Z/n with elements 0..n-1.
inline std::vector<std::vector<std::size_t>> cyclic_group_table(std::size_t n) {
  std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  }
  return t;
}

/// Group algebra K[G] from a Cayley table. The group axioms are verified.
inline Algebra group_algebra(const Field& field, const std::vector<std::vector<std::size_t>>& cayley) {
  const std::size_t n = cayley.size();
  if (n == 0) throw Error(ErrorKind::NotAGroup, "empty Cayley table");
  for (const auto& row : cayley) {
    if (row.size() != n) throw Error(ErrorKind::NotAGroup, "Cayley table is not square");
    for (std::size_t x : row) {
      if (x >= n) throw Error(ErrorKind::NotAGroup, "closure fails: entry " + std::to_string(x));
    }
  }
  std::optional<std::size_t> identity;
  for (std::size_t e = 0; e < n && !identity; ++e) {
    bool ok = true;
    for (std::size_t g = 0; g < n && ok; ++g) ok = cayley[e][g] == g && cayley[g][e] == g;
    if (ok) identity = e;
  }
  if (!identity) throw Error(ErrorKind::NotAGroup, "no identity element");
  for (std::size_t g = 0; g < n; ++g) {
    bool has_inverse = false;
    for (std::size_t h = 0; h < n && !has_inverse; ++h) {
      has_inverse = cayley[g][h] == *identity && cayley[h][g] == *identity;
    }
    if (!has_inverse) throw Error(ErrorKind::NotAGroup, "element " + std::to_string(g) + " has no inverse");
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]]) {
          throw Error(ErrorKind::NotAGroup, "associativity fails at (" + std::to_string(a) + "," +
                                                std::to_string(b) + "," + std::to_string(c) + ")");
        }
      }
    }
  }
  std::vector<std::string> labels;
  for (std::size_t g = 0; g < n; ++g) labels.push_back("g" + std::to_string(g));
  std::vector<TableEntry> entries;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) entries.push_back({a, b, cayley[a][b], field.one()});
  }
  return Algebra(field, n, std::move(labels), std::move(entries));
}

/// Evolution algebra: v_i v_j = 0 for i != j and v_i^2 = sum_k a_ik v_k.
inline Algebra evolution_algebra(const Field& field, const std::vector<std::vector<FieldElement>>& structure) {
  const std::size_t n = structure.size();
  std::vector<std::string> labels;
  std::vector<TableEntry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    if (structure[i].size() != n) throw Error(ErrorKind::ParseError, "structure matrix is not square");
    labels.push_back("v" + std::to_string(i));
    for (std::size_t k = 0; k < n; ++k) entries.push_back({i, i, k, structure[i][k]});
  }
  return Algebra(field, n, std::move(labels), std::move(entries));
}

/// Quaternion algebra (a,b)_K on {1,i,j,k}: i^2 = a, j^2 = b, ij = -ji = k.
inline Algebra quaternion_algebra(const Field& field, const FieldElement& a, const FieldElement& b) {
  const auto one = field.one();
  const auto ab = a * b;
  std::vector<TableEntry> t;
  for (std::size_t x = 0; x < 4; ++x) {
    t.push_back({0, x, x, one});
    if (x != 0) t.push_back({x, 0, x, one});
  }
  t.push_back({1, 1, 0, a});
  t.push_back({2, 2, 0, b});
  t.push_back({3, 3, 0, -ab});
  t.push_back({1, 2, 3, one});
  t.push_back({2, 1, 3, -one});
  t.push_back({1, 3, 2, a});
  t.push_back({3, 1, 2, -a});
  t.push_back({2, 3, 1, -b});
  t.push_back({3, 2, 1, b});
  return Algebra(field, 4, {"1", "i", "j", "k"}, std::move(t));
}

/// A x B with block-diagonal table. Clashing labels of B get primes appended.
inline Algebra direct_sum(const Algebra& a, const Algebra& b) {
  if (a.field() != b.field()) {
    throw Error(ErrorKind::FieldMismatch, a.field().to_string() + " vs " + b.field().to_string());
  }
  std::vector<std::string> labels = a.labels();
  std::set<std::string> used(labels.begin(), labels.end());
  for (std::string l : b.labels()) {
    while (used.count(l)) l += "'";
    used.insert(l);
    labels.push_back(l);
  }
  std::vector<TableEntry> entries = a.table();
  const std::size_t off = a.dim();
  for (const auto& e : b.table()) entries.push_back({e.i + off, e.j + off, e.k + off, e.coeff});
  return Algebra(a.field(), a.dim() + b.dim(), std::move(labels), std::move(entries));
}

/// A tensored with `target` over A's field, on the basis {e_i (x) 1}.
inline Algebra scalar_extension(const Algebra& a, const Field& target) {
  if (!target.extends(a.field())) {
    throw Error(ErrorKind::NotAnExtension, target.to_string() + " does not extend " + a.field().to_string());
  }
  std::vector<TableEntry> entries;
  entries.reserve(a.table().size());
  for (const auto& e : a.table()) entries.push_back({e.i, e.j, e.k, embed_scalar(e.coeff, target)});
  return Algebra(target, a.dim(), a.labels(), std::move(entries));
}

// ---------------------------------------------------------------------------
// Structural checks and invariants

inline bool check_associative(const Algebra& a) {
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const SparseVector& ij = a.product(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        const SparseVector left = multiply_sparse(a, ij, basis_sparse(a, k));
        const SparseVector right = multiply_sparse(a, basis_sparse(a, i), a.product(j, k));
        if (left != right) return false;
      }
    }
  }
  return true;
}

inline bool check_commutative(const Algebra& a) {
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = i + 1; j < a.dim(); ++j) {
      if (a.product(i, j) != a.product(j, i)) return false;
    }
  }
  return true;
}

/// The two-sided unit, found by solving u e_i = e_i u = e_i for all i.
inline std::optional<Vector> find_unit(const Algebra& a) {
  const std::size_t n = a.dim();
  // Unknown u_m; coordinate k of u e_i is sum_m u_m gamma_{m i}^k.
  Matrix sys(a.field(), 2 * n * n, n);
  std::vector<FieldElement> rhs(2 * n * n, a.field().zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t m = 0; m < n; ++m) {
      for (const auto& [k, c] : a.product(m, i)) sys(i * n + k, m) += c;
      for (const auto& [k, c] : a.product(i, m)) sys(n * n + i * n + k, m) += c;
    }
    rhs[i * n + i] = a.field().one();
    rhs[n * n + i * n + i] = a.field().one();
  }
  auto sol = solve(sys, rhs);
  if (!sol) return std::nullopt;
  return sol->particular;
}

namespace detail {

using EquationRows = std::map<std::size_t, std::map<std::size_t, FieldElement>>;

inline void add_term(EquationRows& rows, std::size_t eq, std::size_t var, const FieldElement& c) {
  auto& row = rows[eq];
  auto it = row.find(var);
  if (it == row.end()) {
    row.emplace(var, c);
  } else {
    it->second += c;
  }
}

/// Kernel dimension of the linear conditions on T (T(e_a) = sum_b t_ab e_b,
/// unknown index a*n+b) selected by the flags:
///   centroid:    T(e_i e_j) = e_i T(e_j)  and  T(e_i e_j) = T(e_i) e_j
///   derivation:  T(e_i e_j) = e_i T(e_j) + T(e_i) e_j
inline std::size_t operator_kernel_dim(const Algebra& a, bool derivation) {
  const std::size_t n = a.dim();
  const std::size_t unknowns = n * n;
  RowSpace space(a.field(), unknowns);
  for (std::size_t i = 0; i < n && space.rank() < unknowns; ++i) {
    for (std::size_t j = 0; j < n && space.rank() < unknowns; ++j) {
      // Equation index m (output coordinate); two families for the centroid.
      EquationRows lhs, left_action, right_action;
      for (const auto& [k, c] : a.product(i, j)) {
        for (std::size_t m = 0; m < n; ++m) add_term(lhs, m, k * n + m, c);
      }
      for (std::size_t l = 0; l < n; ++l) {
        for (const auto& [m, c] : a.product(i, l)) add_term(left_action, m, j * n + l, c);
        for (const auto& [m, c] : a.product(l, j)) add_term(right_action, m, i * n + l, c);
      }
      auto emit = [&](const std::vector<const EquationRows*>& negated) {
        for (std::size_t m = 0; m < n; ++m) {
          std::map<std::size_t, FieldElement> eq;
          if (auto it = lhs.find(m); it != lhs.end()) eq = it->second;
          for (const auto* part : negated) {
            auto it = part->find(m);
            if (it == part->end()) continue;
            for (const auto& [var, c] : it->second) {
              auto jt = eq.find(var);
              if (jt == eq.end()) {
                eq.emplace(var, -c);
              } else {
                jt->second -= c;
              }
            }
          }
          SparseVector row;
          for (auto& [var, c] : eq) {
            if (!c.is_zero()) row.emplace_back(var, c);
          }
          if (!row.empty()) space.insert(std::move(row));
        }
      };
      if (derivation) {
        emit({&left_action, &right_action});
      } else {
        emit({&left_action});
        emit({&right_action});
      }
    }
  }
  return unknowns - space.rank();
}

}  // namespace detail

/// Dimension of {T linear : T(ab) = a T(b) = T(a) b}.
inline std::size_t centroid_dim(const Algebra& a) { return detail::operator_kernel_dim(a, false); }

/// Dimension of {d linear : d(ab) = a d(b) + d(a) b}.
inline std::size_t derivation_dim(const Algebra& a) { return detail::operator_kernel_dim(a, true); }

}  // namespace isoalg

#endif  // ISOALG_ALGEBRA_HPP
