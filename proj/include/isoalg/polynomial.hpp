#ifndef ISOALG_POLYNOMIAL_HPP
#define ISOALG_POLYNOMIAL_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "isoalg/error.hpp"
#include "isoalg/scalars.hpp"

namespace isoalg {

using VarId = std::uint32_t;

/// Monomial as a sparse exponent map: (variable, exponent) pairs sorted by
/// variable id with no zero exponents, plus the cached total degree.
class Monomial {
 public:
  Monomial() = default;

  explicit Monomial(std::vector<std::pair<VarId, std::uint32_t>> exponents) {
    std::sort(exponents.begin(), exponents.end());
    for (const auto& [v, e] : exponents) {
      if (e == 0) continue;
      if (!exps_.empty() && exps_.back().first == v) {
        exps_.back().second += e;
      } else {
        exps_.emplace_back(v, e);
      }
      degree_ += e;
    }
  }

  static Monomial variable(VarId v, std::uint32_t exponent = 1) { return Monomial({{v, exponent}}); }

  const std::vector<std::pair<VarId, std::uint32_t>>& exponents() const { return exps_; }
  std::uint32_t degree() const { return degree_; }
  bool is_one() const { return exps_.empty(); }

  std::uint32_t exponent(VarId v) const {
    auto it = std::lower_bound(exps_.begin(), exps_.end(), v,
                               [](const auto& p, VarId x) { return p.first < x; });
    return it != exps_.end() && it->first == v ? it->second : 0;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.exps_.reserve(a.exps_.size() + b.exps_.size());
    std::size_t i = 0, j = 0;
    while (i < a.exps_.size() || j < b.exps_.size()) {
      if (j == b.exps_.size() || (i < a.exps_.size() && a.exps_[i].first < b.exps_[j].first)) {
        out.exps_.push_back(a.exps_[i++]);
      } else if (i == a.exps_.size() || b.exps_[j].first < a.exps_[i].first) {
        out.exps_.push_back(b.exps_[j++]);
      } else {
        out.exps_.emplace_back(a.exps_[i].first, a.exps_[i].second + b.exps_[j].second);
        ++i;
        ++j;
      }
    }
    out.degree_ = a.degree_ + b.degree_;
    return out;
  }

  /// a | b.
  friend bool divides(const Monomial& a, const Monomial& b) {
    if (a.degree_ > b.degree_) return false;
    std::size_t j = 0;
    for (const auto& [v, e] : a.exps_) {
      while (j < b.exps_.size() && b.exps_[j].first < v) ++j;
      if (j == b.exps_.size() || b.exps_[j].first != v || b.exps_[j].second < e) return false;
    }
    return true;
  }

  /// b / a, requiring a | b.
  friend Monomial quotient(const Monomial& b, const Monomial& a) {
    Monomial out;
    std::size_t i = 0;
    for (const auto& [v, e] : b.exps_) {
      while (i < a.exps_.size() && a.exps_[i].first < v) ++i;
      const std::uint32_t sub = (i < a.exps_.size() && a.exps_[i].first == v) ? a.exps_[i].second : 0;
      if (e > sub) out.exps_.emplace_back(v, e - sub);
    }
    out.degree_ = b.degree_ - a.degree_;
    return out;
  }

  friend Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial out;
    std::size_t i = 0, j = 0;
    while (i < a.exps_.size() || j < b.exps_.size()) {
      if (j == b.exps_.size() || (i < a.exps_.size() && a.exps_[i].first < b.exps_[j].first)) {
        out.exps_.push_back(a.exps_[i++]);
      } else if (i == a.exps_.size() || b.exps_[j].first < a.exps_[i].first) {
        out.exps_.push_back(b.exps_[j++]);
      } else {
        out.exps_.emplace_back(a.exps_[i].first, std::max(a.exps_[i].second, b.exps_[j].second));
        ++i;
        ++j;
      }
    }
    for (const auto& [v, e] : out.exps_) out.degree_ += e;
    return out;
  }

  friend bool coprime(const Monomial& a, const Monomial& b) {
    std::size_t j = 0;
    for (const auto& [v, e] : a.exps_) {
      while (j < b.exps_.size() && b.exps_[j].first < v) ++j;
      if (j < b.exps_.size() && b.exps_[j].first == v) return false;
    }
    return true;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps_ == b.exps_; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

 private:
  std::vector<std::pair<VarId, std::uint32_t>> exps_;
  std::uint32_t degree_ = 0;
};

enum class OrderKind { DegRevLex, Lex };

/// Total monomial order: degrevlex or lex with respect to an explicit
/// variable precedence (precedence[0] is the largest variable). Variables
/// outside the precedence list rank after it, by id.
class MonomialOrder {
 public:
  MonomialOrder() = default;
  MonomialOrder(OrderKind kind, std::vector<VarId> precedence) : kind_(kind), precedence_(std::move(precedence)) {
    std::vector<bool> seen(precedence_.size(), false);
    for (VarId v : precedence_) {
      if (v >= precedence_.size() || seen[v]) {
        throw Error(ErrorKind::ParseError, "variable precedence must be a permutation");
      }
      seen[v] = true;
    }
    rank_.resize(precedence_.size());
    for (std::size_t r = 0; r < precedence_.size(); ++r) rank_[precedence_[r]] = static_cast<std::uint32_t>(r);
  }

  static MonomialOrder degrevlex(std::size_t nvars) { return {OrderKind::DegRevLex, identity(nvars)}; }
  static MonomialOrder lex(std::size_t nvars) { return {OrderKind::Lex, identity(nvars)}; }

  OrderKind kind() const { return kind_; }
  const std::vector<VarId>& precedence() const { return precedence_; }

  std::uint32_t rank(VarId v) const { return v < rank_.size() ? rank_[v] : v; }

  /// -1, 0, 1 as a <, =, > b.
  int compare(const Monomial& a, const Monomial& b) const {
    if (kind_ == OrderKind::DegRevLex && a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
    // Scan variables where the exponents differ; degrevlex decides on the
    // smallest such variable, lex on the largest.
    const auto& x = a.exponents();
    const auto& y = b.exponents();
    bool found = false;
    std::uint32_t best_rank = 0;
    int best_sign = 0;
    auto consider = [&](VarId v, std::uint32_t ea, std::uint32_t eb) {
      if (ea == eb) return;
      const std::uint32_t r = rank(v);
      const bool better = !found || (kind_ == OrderKind::DegRevLex ? r > best_rank : r < best_rank);
      if (!better) return;
      found = true;
      best_rank = r;
      if (kind_ == OrderKind::DegRevLex) {
        best_sign = ea < eb ? 1 : -1;
      } else {
        best_sign = ea > eb ? 1 : -1;
      }
    };
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
      if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
        consider(x[i].first, x[i].second, 0);
        ++i;
      } else if (i == x.size() || y[j].first < x[i].first) {
        consider(y[j].first, 0, y[j].second);
        ++j;
      } else {
        consider(x[i].first, x[i].second, y[j].second);
        ++i;
        ++j;
      }
    }
    return best_sign;
  }

  friend bool operator==(const MonomialOrder& a, const MonomialOrder& b) {
    return a.kind_ == b.kind_ && a.precedence_ == b.precedence_;
  }

 private:
  static std::vector<VarId> identity(std::size_t n) {
    std::vector<VarId> v(n);
    std::iota(v.begin(), v.end(), VarId{0});
    return v;
  }

  OrderKind kind_ = OrderKind::DegRevLex;
  std::vector<VarId> precedence_;
  std::vector<std::uint32_t> rank_;
};

/// Coefficient field, variable names and active order shared by a family of
/// polynomials.
class PolyRing {
 public:
  PolyRing(Field field, std::vector<std::string> names, MonomialOrder order)
      : field_(std::move(field)), names_(std::move(names)), order_(std::move(order)) {
    for (const auto& n : names_) {
      if (n.empty() || !detail::is_ident_start(n[0]) ||
          !std::all_of(n.begin(), n.end(), detail::is_ident_char)) {
        throw Error(ErrorKind::ParseError, "bad variable name '" + n + "'");
      }
    }
    for (const Field* f = &field_; f->kind() == FieldKind::SimpleExtension; f = &f->base()) {
      if (std::find(names_.begin(), names_.end(), f->variable()) != names_.end()) {
        throw Error(ErrorKind::ParseError, "variable '" + f->variable() + "' is the field generator");
      }
    }
  }

  static std::shared_ptr<const PolyRing> make(Field field, std::vector<std::string> names,
                                              std::optional<MonomialOrder> order = std::nullopt) {
    const std::size_t n = names.size();
    return std::make_shared<const PolyRing>(std::move(field), std::move(names),
                                            order ? *order : MonomialOrder::degrevlex(n));
  }

  const Field& field() const { return field_; }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t nvars() const { return names_.size(); }
  const MonomialOrder& order() const { return order_; }

  std::optional<VarId> find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return static_cast<VarId>(i);
    }
    return std::nullopt;
  }

  friend bool operator==(const PolyRing& a, const PolyRing& b) {
    return a.field_ == b.field_ && a.names_ == b.names_ && a.order_ == b.order_;
  }

 private:
  Field field_;
  std::vector<std::string> names_;
  MonomialOrder order_;
};

using RingPtr = std::shared_ptr<const PolyRing>;

struct Term {
  Monomial monomial;
  FieldElement coeff;

  friend bool operator==(const Term& a, const Term& b) { return a.monomial == b.monomial && a.coeff == b.coeff; }
};

/// Sparse multivariate polynomial: terms strictly decreasing in the ring's
/// order, no zero coefficients; the zero polynomial has no terms.
class Polynomial {
 public:
  explicit Polynomial(RingPtr ring) : ring_(std::move(ring)) {}

  Polynomial(RingPtr ring, std::vector<Term> terms) : ring_(std::move(ring)) {
    const MonomialOrder& ord = ring_->order();
    std::sort(terms.begin(), terms.end(),
              [&](const Term& a, const Term& b) { return ord.compare(a.monomial, b.monomial) > 0; });
    for (auto& t : terms) {
      if (t.coeff.field() != ring_->field()) throw Error(ErrorKind::FieldMismatch, "coefficient over wrong field");
      if (!terms_.empty() && terms_.back().monomial == t.monomial) {
        terms_.back().coeff += t.coeff;
        if (terms_.back().coeff.is_zero()) terms_.pop_back();
      } else if (!t.coeff.is_zero()) {
        terms_.push_back(std::move(t));
      }
    }
  }

  /// Trusted construction from terms already strictly decreasing and nonzero.
  static Polynomial from_sorted(RingPtr ring, std::vector<Term> terms) {
    Polynomial p(std::move(ring));
    p.terms_ = std::move(terms);
    return p;
  }

  /// Everything but the leading term.
  Polynomial tail() const {
    if (terms_.empty()) return *this;
    return from_sorted(ring_, std::vector<Term>(terms_.begin() + 1, terms_.end()));
  }

  static Polynomial constant(RingPtr ring, const FieldElement& c) {
    Polynomial p(std::move(ring));
    if (!c.is_zero()) p.terms_.push_back({Monomial(), c});
    return p;
  }

  static Polynomial variable(RingPtr ring, VarId v) {
    const FieldElement one = ring->field().one();
    return Polynomial(ring, {{Monomial::variable(v), one}});
  }

  const RingPtr& ring() const { return ring_; }
  const Field& field() const { return ring_->field(); }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one()); }

  const Term& leading_term() const { return terms_.front(); }
  const Monomial& leading_monomial() const { return terms_.front().monomial; }
  const FieldElement& leading_coeff() const { return terms_.front().coeff; }

  std::uint32_t total_degree() const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.monomial.degree());
    return d;
  }

  Polynomial monic() const {
    if (is_zero() || leading_coeff().is_one()) return *this;
    return scaled(leading_coeff().inverse());
  }

  Polynomial scaled(const FieldElement& c) const {
    Polynomial out(ring_);
    if (c.is_zero()) return out;
    out.terms_.reserve(terms_.size());
    for (const auto& t : terms_) out.terms_.push_back({t.monomial, t.coeff * c});
    return out;
  }

  /// this + c * m * g, merging in the ring order.
  Polynomial add_scaled(const FieldElement& c, const Monomial& m, const Polynomial& g) const {
    check_ring(g);
    if (c.is_zero() || g.is_zero()) return *this;
    const MonomialOrder& ord = ring_->order();
    Polynomial out(ring_);
    out.terms_.reserve(terms_.size() + g.terms_.size());
    std::size_t i = 0, j = 0;
    Monomial shifted;
    bool have_shifted = false;
    while (i < terms_.size() || j < g.terms_.size()) {
      if (j < g.terms_.size() && !have_shifted) {
        shifted = m * g.terms_[j].monomial;
        have_shifted = true;
      }
      const int cmp = j == g.terms_.size() ? 1 : i == terms_.size() ? -1 : ord.compare(terms_[i].monomial, shifted);
      if (cmp > 0) {
        out.terms_.push_back(terms_[i++]);
      } else if (cmp < 0) {
        out.terms_.push_back({std::move(shifted), c * g.terms_[j].coeff});
        ++j;
        have_shifted = false;
      } else {
        FieldElement s = terms_[i].coeff + c * g.terms_[j].coeff;
        if (!s.is_zero()) out.terms_.push_back({terms_[i].monomial, std::move(s)});
        ++i;
        ++j;
        have_shifted = false;
      }
    }
    return out;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    return a.add_scaled(a.field().one(), Monomial(), b);
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    return a.add_scaled(-a.field().one(), Monomial(), b);
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_ring(b);
    Polynomial out(a.ring_);
    for (const auto& t : a.terms_) out = out.add_scaled(t.coeff, t.monomial, b);
    return out;
  }
  Polynomial operator-() const { return scaled(-field().one()); }

  Polynomial pow(unsigned exponent) const {
    Polynomial out = constant(ring_, field().one());
    for (unsigned i = 0; i < exponent; ++i) out = out * *this;
    return out;
  }

  FieldElement evaluate(const std::vector<FieldElement>& point) const {
    FieldElement sum = field().zero();
    for (const auto& t : terms_) {
      FieldElement v = t.coeff;
      for (const auto& [var, e] : t.monomial.exponents()) {
        if (var >= point.size()) throw Error(ErrorKind::DimensionMismatch, "evaluation point too short");
        v *= point[var].pow(e);
      }
      sum += v;
    }
    return sum;
  }

  /// Same polynomial viewed in another ring with the same field and at
  /// least as many variables (e.g. after changing the order).
  Polynomial in_ring(const RingPtr& other) const {
    if (other->field() != field()) throw Error(ErrorKind::FieldMismatch, "cannot move polynomial across fields");
    for (const auto& t : terms_) {
      for (const auto& [v, e] : t.monomial.exponents()) {
        if (v >= other->nvars()) throw Error(ErrorKind::DimensionMismatch, "target ring lacks a variable");
      }
    }
    return Polynomial(other, terms_);
  }

  /// Terms joined by " + ", each "coeff*x^2*y" with variables in order of
  /// precedence; the zero polynomial prints as "0".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& t : terms_) {
      if (!out.empty()) out += " + ";
      std::string c = t.coeff.to_string();
      if (c.find('+') != std::string::npos) c = "(" + c + ")";
      out += c;
      auto exps = t.monomial.exponents();
      std::sort(exps.begin(), exps.end(), [&](const auto& a, const auto& b) {
        return ring_->order().rank(a.first) < ring_->order().rank(b.first);
      });
      for (const auto& [v, e] : exps) {
        out += "*" + ring_->names()[v];
        if (e > 1) out += "^" + std::to_string(e);
      }
    }
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.field() == b.field() && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

 private:
  void check_ring(const Polynomial& other) const {
    if (other.ring_ == ring_) return;
    if (other.field() != field()) throw Error(ErrorKind::FieldMismatch, "polynomials over different fields");
    if (!(other.ring_->order() == ring_->order())) {
      throw Error(ErrorKind::FieldMismatch, "polynomials under different monomial orders");
    }
  }

  RingPtr ring_;
  std::vector<Term> terms_;
};

namespace detail {

class PolyParser {
 public:
  PolyParser(RingPtr ring, std::string_view text) : ring_(std::move(ring)), text_(strip_spaces(text)) {}

  Polynomial parse() {
    if (text_.empty()) fail("empty polynomial");
    Polynomial p = parse_sum();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ParseError, what + " at position " + std::to_string(pos_) + " in '" + text_ + "'");
  }
  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  Polynomial parse_sum() {
    Polynomial acc = parse_term();
    while (peek('+') || peek('-')) {
      const bool minus = peek('-');
      ++pos_;
      Polynomial t = parse_term();
      acc = minus ? acc - t : acc + t;
    }
    return acc;
  }

  Polynomial parse_term() {
    bool negate = false;
    while (peek('-') || peek('+')) {
      if (peek('-')) negate = !negate;
      ++pos_;
    }
    Polynomial acc = parse_factor();
    while (peek('*')) {
      ++pos_;
      acc = acc * parse_factor();
    }
    return negate ? -acc : acc;
  }

  Polynomial parse_factor() {
    std::optional<Polynomial> atom;
    if (peek('(')) {
      ++pos_;
      atom = parse_sum();
      if (!peek(')')) fail("missing ')'");
      ++pos_;
    } else if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/')) ++pos_;
      atom = Polynomial::constant(ring_, ring_->field().parse_element(text_.substr(start, pos_ - start)));
    } else if (pos_ < text_.size() && is_ident_start(text_[pos_])) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      if (auto v = ring_->find(name)) {
        atom = Polynomial::variable(ring_, *v);
      } else {
        atom = Polynomial::constant(ring_, ring_->field().parse_element(name));
      }
    } else {
      fail("expected a factor");
    }
    if (peek('^')) {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      atom = atom->pow(static_cast<unsigned>(std::stoul(text_.substr(start, pos_ - start))));
    }
    return *atom;
  }

  RingPtr ring_;
  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial parse_polynomial(const RingPtr& ring, std::string_view text) {
  return detail::PolyParser(ring, text).parse();
}

/// Embeds every coefficient into the field of `target`, which must extend
/// the source field and have at least as many variables.
inline Polynomial base_change(const Polynomial& p, const RingPtr& target) {
  if (target->nvars() < p.ring()->nvars()) {
    throw Error(ErrorKind::DimensionMismatch, "target ring lacks a variable");
  }
  std::vector<Term> terms;
  for (const auto& t : p.terms()) terms.push_back({t.monomial, embed_scalar(t.coeff, target->field())});
  return Polynomial(target, std::move(terms));
}

}  // namespace isoalg

#endif  // ISOALG_POLYNOMIAL_HPP
