#ifndef ISOALG_POLYSYS_HPP
#define ISOALG_POLYSYS_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isoalg/algebra.hpp"
#include "isoalg/error.hpp"
#include "isoalg/linalg.hpp"
#include "isoalg/polynomial.hpp"
#include "isoalg/scalars.hpp"

namespace isoalg {

enum class GeneratorTag { P, Q, R };

/// Origin of one generator: P(i,j,n), Q(i,k) or R(i,k).
struct Provenance {
  GeneratorTag tag = GeneratorTag::P;
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t c = 0;

  std::string to_string() const {
    switch (tag) {
      case GeneratorTag::P:
        return "P(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
      case GeneratorTag::Q: return "Q(" + std::to_string(a) + "," + std::to_string(b) + ")";
      case GeneratorTag::R: return "R(" + std::to_string(a) + "," + std::to_string(b) + ")";
    }
    return "?";
  }
};

/// Polynomial system whose common zeros are exactly the isomorphisms A -> B
/// (f(e_i) = sum_j T_i^j u_j, inverse data S_i^j). Variables are all T_i_j
/// row-major (ids 0..n^2-1) followed by all S_i_j row-major.
struct IsoSystem {
  std::size_t dim = 0;
  bool two_sided = false;
  RingPtr ring;
  std::vector<Polynomial> generators;
  std::vector<Provenance> provenance;

  VarId t_var(std::size_t i, std::size_t j) const { return static_cast<VarId>(i * dim + j); }
  VarId s_var(std::size_t i, std::size_t j) const { return static_cast<VarId>(dim * dim + i * dim + j); }
};

inline std::vector<std::string> iso_variable_names(std::size_t n) {
  std::vector<std::string> names;
  for (const char* prefix : {"T_", "S_"}) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) names.push_back(prefix + std::to_string(i) + "_" + std::to_string(j));
    }
  }
  return names;
}

/// Generators, in order:
///   p_ijn = sum_k gamma_ij^k T_k^n - sum_{l,m} tau_lm^n T_i^l T_j^m   (i,j,n)
///   q_ik  = sum_j T_i^j S_j^k - delta_ik                              (i,k)
///   r_ik  = sum_j S_i^j T_j^k - delta_ik                              (i,k), if two_sided
inline IsoSystem build_iso_system(const Algebra& a, const Algebra& b, bool two_sided = false,
                                  OrderKind order = OrderKind::DegRevLex) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch, std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  if (a.field() != b.field()) {
    throw Error(ErrorKind::FieldMismatch, a.field().to_string() + " vs " + b.field().to_string());
  }
  const std::size_t n = a.dim();
  const Field& field = a.field();
  IsoSystem sys;
  sys.dim = n;
  sys.two_sided = two_sided;
  const std::size_t nvars = 2 * n * n;
  sys.ring = PolyRing::make(field, iso_variable_names(n),
                            order == OrderKind::Lex ? MonomialOrder::lex(nvars) : MonomialOrder::degrevlex(nvars));

  std::vector<std::vector<const TableEntry*>> b_by_target(n);
  for (const auto& e : b.table()) b_by_target[e.k].push_back(&e);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t out = 0; out < n; ++out) {
        std::vector<Term> terms;
        for (const auto& [k, c] : a.product(i, j)) terms.push_back({Monomial::variable(sys.t_var(k, out)), c});
        for (const TableEntry* e : b_by_target[out]) {
          terms.push_back({Monomial({{sys.t_var(i, e->i), 1}, {sys.t_var(j, e->j), 1}}), -e->coeff});
        }
        sys.generators.emplace_back(sys.ring, std::move(terms));
        sys.provenance.push_back({GeneratorTag::P, i, j, out});
      }
    }
  }
  auto inverse_equations = [&](GeneratorTag tag, bool t_first) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        std::vector<Term> terms;
        for (std::size_t j = 0; j < n; ++j) {
          const VarId x = t_first ? sys.t_var(i, j) : sys.s_var(i, j);
          const VarId y = t_first ? sys.s_var(j, k) : sys.t_var(j, k);
          terms.push_back({Monomial({{x, 1}, {y, 1}}), field.one()});
        }
        if (i == k) terms.push_back({Monomial(), -field.one()});
        sys.generators.emplace_back(sys.ring, std::move(terms));
        sys.provenance.push_back({tag, i, k, 0});
      }
    }
  };
  inverse_equations(GeneratorTag::Q, true);
  if (two_sided) inverse_equations(GeneratorTag::R, false);
  return sys;
}

/// Evaluation point of an IsoSystem: T entries then S entries, row-major.
inline std::vector<FieldElement> iso_point(const Matrix& t, const Matrix& s) {
  std::vector<FieldElement> point;
  point.reserve(2 * t.rows() * t.cols());
  for (const Matrix* m : {&t, &s}) {
    for (std::size_t i = 0; i < m->rows(); ++i) {
      for (std::size_t j = 0; j < m->cols(); ++j) point.push_back((*m)(i, j));
    }
  }
  return point;
}

/// An explicit candidate: f(e_i) = sum_j T[i][j] u_j, optional inverse data.
struct CandidateIso {
  Matrix t;
  std::optional<Matrix> s;
};

/// A verified isomorphism A -> B together with its inverse matrix.
struct Certificate {
  Field field;
  Matrix t;
  Matrix s;

  /// The certificate of the inverse map B -> A.
  Certificate inverted() const { return {field, s, t}; }
};

struct Violation {
  Provenance where;
  FieldElement value;
};

/// Outcome of verify_candidate: a certificate, or every violated generator
/// with its nonzero value.
struct Verification {
  std::optional<Certificate> certificate;
  std::vector<Violation> violations;

  bool ok() const { return certificate.has_value(); }

  bool violates(GeneratorTag tag) const {
    for (const auto& v : violations) {
      if (v.where.tag == tag) return true;
    }
    return false;
  }
};

/// Evaluates every generator of the (two-sided) system at (T, S). S is
/// computed by exact inversion when absent; SingularCandidate is raised if
/// that inversion fails.
inline Verification verify_candidate(const Algebra& a, const Algebra& b, const CandidateIso& c) {
  const std::size_t n = a.dim();
  if (b.dim() != n || c.t.rows() != n || c.t.cols() != n || (c.s && (c.s->rows() != n || c.s->cols() != n))) {
    throw Error(ErrorKind::DimensionMismatch, "candidate shape does not match the algebras");
  }
  if (c.t.field() != a.field() || (c.s && c.s->field() != a.field())) {
    throw Error(ErrorKind::FieldMismatch, "candidate entries over a different field");
  }
  Matrix s = c.s ? *c.s : [&] {
    auto inv = inverse(c.t);
    if (!inv) throw Error(ErrorKind::SingularCandidate, "T is not invertible");
    return *inv;
  }();
  const IsoSystem sys = build_iso_system(a, b, true);
  const auto point = iso_point(c.t, s);
  Verification out;
  for (std::size_t g = 0; g < sys.generators.size(); ++g) {
    FieldElement v = sys.generators[g].evaluate(point);
    if (!v.is_zero()) out.violations.push_back({sys.provenance[g], std::move(v)});
  }
  if (out.violations.empty()) out.certificate = Certificate{a.field(), c.t, std::move(s)};
  return out;
}

// ---------------------------------------------------------------------------
// Specialization along K[x] -> K, x -> c

/// Univariate polynomial over a field, coefficients lowest degree first.
class UnivariatePolynomial {
 public:
  UnivariatePolynomial(Field field, std::vector<FieldElement> coeffs = {})
      : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    for (const auto& c : coeffs_) {
      if (c.field() != field_) throw Error(ErrorKind::FieldMismatch, "coefficient over wrong field");
    }
    detail::upoly_trim(coeffs_);
  }

  static UnivariatePolynomial constant(const FieldElement& c) { return {c.field(), {c}}; }

  /// Parses e.g. "1/2 + 3*x^2" in the named variable.
  static UnivariatePolynomial parse(const Field& field, std::string_view text, const std::string& variable = "x") {
    return {field, detail::UPolyParser(field, variable, text).parse()};
  }

  const Field& field() const { return field_; }
  const std::vector<FieldElement>& coefficients() const { return coeffs_; }
  int degree() const { return detail::upoly_degree(coeffs_); }

  /// Horner evaluation, the homomorphism K[x] -> K fixing K and sending x to c.
  FieldElement evaluate(const FieldElement& c) const {
    FieldElement acc = field_.zero();
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * c + coeffs_[i];
    return acc;
  }

  friend UnivariatePolynomial operator+(const UnivariatePolynomial& a, const UnivariatePolynomial& b) {
    return {a.field_, detail::upoly_add(a.coeffs_, b.coeffs_)};
  }
  friend UnivariatePolynomial operator*(const UnivariatePolynomial& a, const UnivariatePolynomial& b) {
    return {a.field_, detail::upoly_mul(a.coeffs_, b.coeffs_)};
  }
  friend bool operator==(const UnivariatePolynomial& a, const UnivariatePolynomial& b) {
    return a.field_ == b.field_ && a.coeffs_ == b.coeffs_;
  }

  std::string to_string(const std::string& variable = "x") const { return detail::render_upoly(coeffs_, variable); }

 private:
  Field field_;
  std::vector<FieldElement> coeffs_;
};

using PolyMatrix = std::vector<std::vector<UnivariatePolynomial>>;

inline PolyMatrix poly_matrix_multiply(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.empty() || b.empty() || a.front().size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch, "polynomial matrix shapes");
  }
  const Field& f = a.front().front().field();
  PolyMatrix out(a.size(), std::vector<UnivariatePolynomial>(b.front().size(), UnivariatePolynomial(f)));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      for (std::size_t j = 0; j < b.front().size(); ++j) out[i][j] = out[i][j] + a[i][k] * b[k][j];
    }
  }
  return out;
}

/// Entrywise evaluation of a polynomial matrix at c.
inline Matrix evaluate_matrix(const PolyMatrix& t, const FieldElement& c) {
  Matrix out(c.field(), t.size(), t.empty() ? 0 : t.front().size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i].size() != out.cols()) throw Error(ErrorKind::DimensionMismatch, "ragged polynomial matrix");
    for (std::size_t j = 0; j < t[i].size(); ++j) {
      if (t[i][j].field() != c.field()) throw Error(ErrorKind::FieldMismatch, "polynomial entry over wrong field");
      out(i, j) = t[i][j].evaluate(c);
    }
  }
  return out;
}

/// Candidate obtained by pushing a K[x]-valued map through x -> c. The
/// caller runs verify_candidate on the result.
inline CandidateIso specialize_iso(const PolyMatrix& t, const FieldElement& c, const Algebra& a, const Algebra& b) {
  if (c.field() != a.field() || a.field() != b.field()) {
    throw Error(ErrorKind::FieldMismatch, "evaluation point and algebras must share a field");
  }
  if (t.size() != a.dim() || a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "matrix size");
  return {evaluate_matrix(t, c), std::nullopt};
}

/// Lifts a matrix over K to constant polynomials in K[x].
inline PolyMatrix constant_poly_matrix(const Matrix& m) {
  PolyMatrix out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out[i].push_back(UnivariatePolynomial::constant(m(i, j)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Invariant prefilter

struct PrefilterResult {
  bool pass = true;
  /// Names the first disagreeing invariant, e.g. "derivation_dim: 0 vs 1".
  std::string reason;
};

struct AlgebraInvariants {
  std::size_t dim = 0;
  bool has_unit = false;
  bool associative = false;
  bool commutative = false;
  std::size_t centroid = 0;
  std::size_t derivations = 0;
};

inline AlgebraInvariants compute_invariants(const Algebra& a) {
  return {a.dim(), find_unit(a).has_value(), check_associative(a), check_commutative(a), centroid_dim(a),
          derivation_dim(a)};
}

/// Cheap necessary conditions for A = B, compared in the fixed order dim,
/// unit, associativity, commutativity, centroid, derivations.
inline PrefilterResult invariant_prefilter(const Algebra& a, const Algebra& b) {
  if (a.field() != b.field()) {
    throw Error(ErrorKind::FieldMismatch, a.field().to_string() + " vs " + b.field().to_string());
  }
  auto fail = [](const std::string& name, auto x, auto y) {
    return PrefilterResult{false, name + ": " + std::to_string(x) + " vs " + std::to_string(y)};
  };
  auto bool_name = [](bool v) { return std::string(v ? "true" : "false"); };
  auto fail_bool = [&](const std::string& name, bool x, bool y) {
    return PrefilterResult{false, name + ": " + bool_name(x) + " vs " + bool_name(y)};
  };
  if (a.dim() != b.dim()) return fail("dim", a.dim(), b.dim());
  const bool ua = find_unit(a).has_value(), ub = find_unit(b).has_value();
  if (ua != ub) return fail_bool("unit", ua, ub);
  const bool aa = check_associative(a), ab = check_associative(b);
  if (aa != ab) return fail_bool("associativity", aa, ab);
  const bool ca = check_commutative(a), cb = check_commutative(b);
  if (ca != cb) return fail_bool("commutativity", ca, cb);
  const std::size_t za = centroid_dim(a), zb = centroid_dim(b);
  if (za != zb) return fail("centroid_dim", za, zb);
  const std::size_t da = derivation_dim(a), db = derivation_dim(b);
  if (da != db) return fail("derivation_dim", da, db);
  return {};
}

}  // namespace isoalg

#endif  // ISOALG_POLYSYS_HPP
