#ifndef ISOALG_SCALARS_HPP
#define ISOALG_SCALARS_HPP

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "isoalg/error.hpp"

namespace isoalg {

class FieldElement;

enum class FieldKind { Rationals, PrimeField, SimpleExtension };

namespace detail {
struct FieldData;
}

/// Descriptor of an exact field: the rationals, a prime field F_p, or a
/// simple extension base[y]/(m) with m monic of degree >= 2. Handles are
/// cheap to copy and compare structurally.
class Field {
 public:
  /// The rationals.
  Field();

  static Field rationals();
  static Field prime(std::uint64_t p);
  /// `modulus` lists the coefficients c0..cd of a monic polynomial over
  /// `base`. Over a finite base the modulus is checked for irreducibility.
  static Field extension(const Field& base, std::vector<FieldElement> modulus,
                         std::string variable = "y");

  /// Accepts "Q", "Fp:<p>", "F<p>", and "ext:<base>:<modulus>" where the
  /// modulus is written as a polynomial in a fresh variable, e.g.
  /// "ext:Fp:2:y^2+y+1".
  static Field parse(std::string_view text);

  FieldKind kind() const;
  std::uint64_t characteristic() const;
  /// Prime of a PrimeField.
  std::uint64_t prime_modulus() const;
  const Field& base() const;
  const std::vector<FieldElement>& modulus() const;
  /// Degree over the immediate base (1 for Rationals and prime fields).
  std::size_t degree() const;
  const std::string& variable() const;
  int depth() const;
  /// Number of elements, or nullopt for infinite fields.
  std::optional<std::uint64_t> size() const;
  bool is_finite() const { return size().has_value(); }
  /// True when `sub` is this field or lies below it in the extension tower.
  bool extends(const Field& sub) const;

  const std::string& to_string() const;

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_int(std::int64_t value) const;
  FieldElement from_rational(const mpq_class& value) const;
  /// The generator y of a SimpleExtension.
  FieldElement generator() const;
  FieldElement parse_element(std::string_view text) const;
  /// Enumeration of a finite field: prime fields by residue, extensions by
  /// little-endian base-|base| digits of the coefficient vector.
  FieldElement element_at(std::uint64_t index) const;
  std::uint64_t index_of(const FieldElement& element) const;

  friend bool operator==(const Field& a, const Field& b);
  friend bool operator!=(const Field& a, const Field& b) { return !(a == b); }

 private:
  explicit Field(std::shared_ptr<const detail::FieldData> data) : data_(std::move(data)) {}
  const detail::FieldData& data() const { return *data_; }

  std::shared_ptr<const detail::FieldData> data_;

  friend class FieldElement;
};

/// Immutable exact scalar in canonical form, so equality is payload equality.
class FieldElement {
 public:
  /// Rational zero.
  FieldElement();

  const Field& field() const { return field_; }

  bool is_zero() const;
  bool is_one() const;

  /// Payload accessors; each requires the matching field kind.
  const mpq_class& rational() const { return std::get<mpq_class>(value_); }
  std::uint64_t residue() const { return std::get<std::uint64_t>(value_); }
  const std::vector<FieldElement>& coefficients() const {
    return std::get<std::vector<FieldElement>>(value_);
  }

  FieldElement operator-() const;
  FieldElement inverse() const;
  FieldElement pow(std::uint64_t exponent) const;

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    return a * b.inverse();
  }
  FieldElement& operator+=(const FieldElement& b) { return *this = *this + b; }
  FieldElement& operator-=(const FieldElement& b) { return *this = *this - b; }
  FieldElement& operator*=(const FieldElement& b) { return *this = *this * b; }

  friend bool operator==(const FieldElement& a, const FieldElement& b);
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  /// "a/b" over Q, the residue over F_p, "c0+c1*y+..." over extensions
  /// (zero terms omitted, compound coefficients parenthesized).
  std::string to_string() const;

 private:
  using Payload = std::variant<mpq_class, std::uint64_t, std::vector<FieldElement>>;

  FieldElement(Field field, Payload value) : field_(std::move(field)), value_(std::move(value)) {}

  static FieldElement make_rational(const Field& f, mpq_class q) {
    q.canonicalize();
    return FieldElement(f, Payload(std::move(q)));
  }
  static FieldElement make_residue(const Field& f, std::uint64_t r) {
    return FieldElement(f, Payload(r));
  }
  /// Reduces `coeffs` modulo the field's modulus and pads to full length.
  static FieldElement make_extension(const Field& f, std::vector<FieldElement> coeffs);

  Field field_;
  Payload value_;

  friend class Field;
  friend FieldElement embed_scalar(const FieldElement& a, const Field& target);
};

// Named entry points matching the arithmetic contract.
inline FieldElement field_add(const FieldElement& a, const FieldElement& b) { return a + b; }
inline FieldElement field_mul(const FieldElement& a, const FieldElement& b) { return a * b; }
inline FieldElement field_inv(const FieldElement& a) { return a.inverse(); }
/// Image of `a` under the inclusion of its field into `target`.
FieldElement embed_scalar(const FieldElement& a, const Field& target);

namespace detail {

struct FieldData {
  FieldKind kind = FieldKind::Rationals;
  std::uint64_t p = 0;
  std::optional<Field> base;
  std::vector<FieldElement> modulus;
  std::string variable;
  int depth = 0;
  std::optional<std::uint64_t> size;
  std::string text;
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t p) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
  }
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t);
}

// Dense univariate polynomials over a field, lowest degree first, with no
// trailing zeros (the zero polynomial is empty).
using UPoly = std::vector<FieldElement>;

inline void upoly_trim(UPoly& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

inline int upoly_degree(const UPoly& a) { return static_cast<int>(a.size()) - 1; }

inline UPoly upoly_add(const UPoly& a, const UPoly& b) {
  UPoly out = a.size() >= b.size() ? a : b;
  const UPoly& other = a.size() >= b.size() ? b : a;
  for (std::size_t i = 0; i < other.size(); ++i) out[i] = out[i] + other[i];
  upoly_trim(out);
  return out;
}

inline UPoly upoly_neg(const UPoly& a) {
  UPoly out;
  out.reserve(a.size());
  for (const auto& c : a) out.push_back(-c);
  return out;
}

inline UPoly upoly_sub(const UPoly& a, const UPoly& b) { return upoly_add(a, upoly_neg(b)); }

inline UPoly upoly_mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  const Field& f = a.front().field();
  UPoly out(a.size() + b.size() - 1, f.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
  }
  upoly_trim(out);
  return out;
}

inline UPoly upoly_scale(const UPoly& a, const FieldElement& c) {
  if (c.is_zero()) return {};
  UPoly out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(x * c);
  return out;
}

/// Quotient and remainder; `b` must be nonzero.
inline std::pair<UPoly, UPoly> upoly_divmod(const UPoly& a, const UPoly& b) {
  if (b.empty()) throw Error(ErrorKind::DivisionByZero, "polynomial division by zero");
  UPoly rem = a;
  upoly_trim(rem);
  if (rem.size() < b.size()) return {UPoly{}, rem};
  const Field& f = b.back().field();
  const FieldElement lead_inv = b.back().inverse();
  UPoly quot(rem.size() - b.size() + 1, f.zero());
  while (!rem.empty() && rem.size() >= b.size()) {
    const std::size_t shift = rem.size() - b.size();
    const FieldElement c = rem.back() * lead_inv;
    quot[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) rem[shift + i] = rem[shift + i] - c * b[i];
    upoly_trim(rem);
  }
  upoly_trim(quot);
  return {quot, rem};
}

inline UPoly upoly_mod(const UPoly& a, const UPoly& b) { return upoly_divmod(a, b).second; }

inline UPoly upoly_monic(const UPoly& a) {
  if (a.empty()) return a;
  return upoly_scale(a, a.back().inverse());
}

inline UPoly upoly_gcd(UPoly a, UPoly b) {
  upoly_trim(a);
  upoly_trim(b);
  while (!b.empty()) {
    UPoly r = upoly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return upoly_monic(a);
}

/// base^exponent mod m by square-and-multiply.
inline UPoly upoly_powmod(UPoly base, std::uint64_t exponent, const UPoly& m) {
  const Field& f = m.back().field();
  UPoly result{f.one()};
  base = upoly_mod(base, m);
  while (exponent > 0) {
    if (exponent & 1U) result = upoly_mod(upoly_mul(result, base), m);
    exponent >>= 1U;
    if (exponent > 0) base = upoly_mod(upoly_mul(base, base), m);
  }
  return result;
}

/// Ben-Or irreducibility test over a finite field with `q` elements:
/// m is irreducible iff gcd(x^(q^i) - x, m) = 1 for 1 <= i <= deg(m)/2.
inline bool upoly_irreducible_finite(const UPoly& m, std::uint64_t q) {
  const Field& f = m.back().field();
  const int d = upoly_degree(m);
  const UPoly x{f.zero(), f.one()};
  UPoly power = x;
  for (int i = 1; i <= d / 2; ++i) {
    power = upoly_powmod(power, q, m);
    const UPoly g = upoly_gcd(upoly_sub(power, x), m);
    if (upoly_degree(g) > 0) return false;
  }
  return true;
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

/// Parses a signed integer or fraction "a/b" into a canonical rational.
inline mpq_class parse_rational(std::string_view text) {
  const std::string s = strip_spaces(text);
  auto valid_int = [](std::string_view t, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && i < t.size() && (t[i] == '-' || t[i] == '+')) ++i;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    }
    return true;
  };
  const auto slash = s.find('/');
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false)) {
    throw Error(ErrorKind::ParseError, "not a rational number: '" + std::string(text) + "'");
  }
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  mpz_class n(num), d(den);
  if (d == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator in '" + std::string(text) + "'");
  mpq_class q(n, d);
  q.canonicalize();
  return q;
}

/// Recursive-descent parser for sums of products of numbers, field
/// generators and parenthesized subexpressions. Produces a polynomial in
/// `variable` over `base` without reducing it.
class UPolyParser {
 public:
  UPolyParser(const Field& base, std::string variable, std::string_view text)
      : base_(base), variable_(std::move(variable)), text_(strip_spaces(text)) {}

  UPoly parse() {
    if (text_.empty()) fail("empty expression");
    UPoly result = parse_sum();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return result;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ParseError,
                what + " at position " + std::to_string(pos_) + " in '" + text_ + "'");
  }

  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  UPoly parse_sum() {
    UPoly acc = parse_term();
    while (pos_ < text_.size() && (peek('+') || peek('-'))) {
      const bool minus = peek('-');
      ++pos_;
      UPoly t = parse_term();
      acc = minus ? upoly_sub(acc, t) : upoly_add(acc, t);
    }
    return acc;
  }

  UPoly parse_term() {
    bool negate = false;
    while (peek('-') || peek('+')) {
      if (peek('-')) negate = !negate;
      ++pos_;
    }
    UPoly acc = parse_factor();
    while (peek('*')) {
      ++pos_;
      acc = upoly_mul(acc, parse_factor());
    }
    return negate ? upoly_neg(acc) : acc;
  }

  UPoly parse_factor() {
    UPoly atom;
    if (peek('(')) {
      ++pos_;
      atom = parse_sum();
      if (!peek(')')) fail("missing ')'");
      ++pos_;
    } else if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/')) {
        ++pos_;
      }
      atom = constant(base_.parse_element(text_.substr(start, pos_ - start)));
    } else if (pos_ < text_.size() && is_ident_start(text_[pos_])) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      if (name == variable_) {
        atom = UPoly{base_.zero(), base_.one()};
      } else {
        atom = constant(base_.parse_element(name));
      }
    } else {
      fail("expected a factor");
    }
    if (peek('^')) {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      const unsigned long e = std::stoul(text_.substr(start, pos_ - start));
      UPoly r{base_.one()};
      for (unsigned long i = 0; i < e; ++i) r = upoly_mul(r, atom);
      atom = r;
    }
    return atom;
  }

  static UPoly constant(const FieldElement& c) {
    UPoly p{c};
    upoly_trim(p);
    return p;
  }

  Field base_;
  std::string variable_;
  std::string text_;
  std::size_t pos_ = 0;
};

inline std::string render_upoly(const UPoly& coeffs, const std::string& variable) {
  std::string out;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].is_zero()) continue;
    std::string c = coeffs[i].to_string();
    if (coeffs[i].field().kind() == FieldKind::SimpleExtension &&
        c.find('+') != std::string::npos) {
      c = "(" + c + ")";
    }
    if (!out.empty()) out += "+";
    out += c;
    if (i == 1) out += "*" + variable;
    if (i > 1) out += "*" + variable + "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Field

inline Field::Field() : Field(rationals()) {}

inline Field Field::rationals() {
  static const Field q = [] {
    auto d = std::make_shared<detail::FieldData>();
    d->kind = FieldKind::Rationals;
    d->text = "Q";
    return Field(std::shared_ptr<const detail::FieldData>(std::move(d)));
  }();
  return q;
}

inline Field Field::prime(std::uint64_t p) {
  if (p >= (std::uint64_t{1} << 31U) || !detail::is_prime(p)) {
    throw Error(ErrorKind::InvalidField, "prime field modulus must be a prime below 2^31, got " +
                                             std::to_string(p));
  }
  auto d = std::make_shared<detail::FieldData>();
  d->kind = FieldKind::PrimeField;
  d->p = p;
  d->size = p;
  d->text = "Fp:" + std::to_string(p);
  return Field(std::shared_ptr<const detail::FieldData>(std::move(d)));
}

inline Field Field::extension(const Field& base, std::vector<FieldElement> modulus,
                              std::string variable) {
  detail::upoly_trim(modulus);
  for (const auto& c : modulus) {
    if (c.field() != base) throw Error(ErrorKind::DescriptorMismatch, "modulus coefficient not over base");
  }
  if (modulus.size() < 3) throw Error(ErrorKind::InvalidField, "extension modulus must have degree >= 2");
  if (!modulus.back().is_one()) throw Error(ErrorKind::InvalidField, "extension modulus must be monic");
  if (base.depth() >= 2) throw Error(ErrorKind::InvalidField, "extension towers are limited to depth 2");
  if (variable.empty() || !detail::is_ident_start(variable[0]) ||
      !std::all_of(variable.begin(), variable.end(), detail::is_ident_char)) {
    throw Error(ErrorKind::InvalidField, "bad extension variable name '" + variable + "'");
  }
  for (const Field* f = &base; f->kind() == FieldKind::SimpleExtension; f = &f->base()) {
    if (f->variable() == variable) {
      throw Error(ErrorKind::InvalidField, "extension variable '" + variable + "' already used in base");
    }
  }
  const std::size_t degree = modulus.size() - 1;
  std::optional<std::uint64_t> size;
  if (auto q = base.size()) {
    if (degree > 8) throw Error(ErrorKind::InvalidField, "extension degree over a finite field is limited to 8");
    if (!detail::upoly_irreducible_finite(modulus, *q)) {
      throw Error(ErrorKind::InvalidField, "modulus " + detail::render_upoly(modulus, variable) +
                                               " is reducible over " + base.to_string());
    }
    long double total = 1;
    std::uint64_t exact = 1;
    for (std::size_t i = 0; i < degree; ++i) {
      total *= static_cast<long double>(*q);
      exact *= *q;
    }
    if (total < 1.8e19L) size = exact;
  }
  auto d = std::make_shared<detail::FieldData>();
  d->kind = FieldKind::SimpleExtension;
  d->p = base.characteristic();
  d->base = base;
  d->modulus = std::move(modulus);
  d->variable = std::move(variable);
  d->depth = base.depth() + 1;
  d->size = size;
  d->text = "ext:" + base.to_string() + ":" + detail::render_upoly(d->modulus, d->variable);
  return Field(std::shared_ptr<const detail::FieldData>(std::move(d)));
}

inline Field Field::parse(std::string_view text) {
  const std::string s = detail::strip_spaces(text);
  if (s == "Q") return rationals();
  if (s.rfind("Fp:", 0) == 0 || (s.size() > 1 && s[0] == 'F' && std::isdigit(static_cast<unsigned char>(s[1])))) {
    const std::string digits = s[1] == 'p' ? s.substr(3) : s.substr(1);
    if (digits.empty() || digits.size() > 12 ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw Error(ErrorKind::ParseError, "bad prime field descriptor '" + s + "'");
    }
    return prime(std::stoull(digits));
  }
  if (s.rfind("ext:", 0) == 0) {
    const auto colon = s.rfind(':');
    if (colon <= 4) throw Error(ErrorKind::ParseError, "bad extension descriptor '" + s + "'");
    const Field base = parse(s.substr(4, colon - 4));
    const std::string modulus_text = s.substr(colon + 1);
    // The new variable is the one identifier not naming a generator below.
    std::vector<std::string> base_vars;
    for (const Field* f = &base; f->kind() == FieldKind::SimpleExtension; f = &f->base()) {
      base_vars.push_back(f->variable());
    }
    std::string variable;
    for (std::size_t i = 0; i < modulus_text.size();) {
      if (detail::is_ident_start(modulus_text[i])) {
        std::size_t j = i;
        while (j < modulus_text.size() && detail::is_ident_char(modulus_text[j])) ++j;
        std::string name = modulus_text.substr(i, j - i);
        if (std::find(base_vars.begin(), base_vars.end(), name) == base_vars.end()) {
          if (!variable.empty() && variable != name) {
            throw Error(ErrorKind::ParseError, "modulus mentions two new variables in '" + s + "'");
          }
          variable = name;
        }
        i = j;
      } else {
        ++i;
      }
    }
    if (variable.empty()) throw Error(ErrorKind::ParseError, "modulus has no variable in '" + s + "'");
    detail::UPoly m = detail::UPolyParser(base, variable, modulus_text).parse();
    return extension(base, std::move(m), variable);
  }
  throw Error(ErrorKind::ParseError, "unknown field descriptor '" + s + "'");
}

inline FieldKind Field::kind() const { return data().kind; }
inline std::uint64_t Field::characteristic() const { return data().p; }

inline std::uint64_t Field::prime_modulus() const {
  if (kind() != FieldKind::PrimeField) throw Error(ErrorKind::InvalidField, to_string() + " is not a prime field");
  return data().p;
}

inline const Field& Field::base() const {
  if (!data().base) throw Error(ErrorKind::NotAnExtension, to_string() + " has no base field");
  return *data().base;
}

inline const std::vector<FieldElement>& Field::modulus() const { return data().modulus; }

inline std::size_t Field::degree() const {
  return kind() == FieldKind::SimpleExtension ? data().modulus.size() - 1 : 1;
}

inline const std::string& Field::variable() const { return data().variable; }
inline int Field::depth() const { return data().depth; }
inline std::optional<std::uint64_t> Field::size() const { return data().size; }
inline const std::string& Field::to_string() const { return data().text; }

inline bool Field::extends(const Field& sub) const {
  if (*this == sub) return true;
  return kind() == FieldKind::SimpleExtension && base().extends(sub);
}

inline bool operator==(const Field& a, const Field& b) {
  if (a.data_ == b.data_) return true;
  const auto& x = a.data();
  const auto& y = b.data();
  if (x.kind != y.kind || x.p != y.p) return false;
  if (x.kind != FieldKind::SimpleExtension) return true;
  return x.variable == y.variable && *x.base == *y.base && x.modulus == y.modulus;
}

inline FieldElement Field::zero() const { return from_int(0); }
inline FieldElement Field::one() const { return from_int(1); }

inline FieldElement Field::from_int(std::int64_t value) const {
  switch (kind()) {
    case FieldKind::Rationals:
      return FieldElement::make_rational(*this, mpq_class(mpz_class(static_cast<long>(value))));
    case FieldKind::PrimeField: {
      const auto p = static_cast<std::int64_t>(data().p);
      std::int64_t r = value % p;
      if (r < 0) r += p;
      return FieldElement::make_residue(*this, static_cast<std::uint64_t>(r));
    }
    case FieldKind::SimpleExtension:
      return FieldElement::make_extension(*this, {base().from_int(value)});
  }
  return {};
}

inline FieldElement Field::from_rational(const mpq_class& value) const {
  switch (kind()) {
    case FieldKind::Rationals:
      return FieldElement::make_rational(*this, value);
    case FieldKind::PrimeField: {
      const mpz_class p(static_cast<unsigned long>(data().p));
      mpz_class num = value.get_num() % p;
      mpz_class den = value.get_den() % p;
      if (den == 0) throw Error(ErrorKind::DivisionByZero, "denominator vanishes in " + to_string());
      if (num < 0) num += p;
      const FieldElement n = FieldElement::make_residue(*this, num.get_ui());
      return n * FieldElement::make_residue(*this, den.get_ui()).inverse();
    }
    case FieldKind::SimpleExtension:
      return FieldElement::make_extension(*this, {base().from_rational(value)});
  }
  return {};
}

inline FieldElement Field::generator() const {
  if (kind() != FieldKind::SimpleExtension) throw Error(ErrorKind::NotAnExtension, to_string() + " has no generator");
  return FieldElement::make_extension(*this, {base().zero(), base().one()});
}

inline FieldElement Field::parse_element(std::string_view text) const {
  switch (kind()) {
    case FieldKind::Rationals:
      return FieldElement::make_rational(*this, detail::parse_rational(text));
    case FieldKind::PrimeField:
      return from_rational(detail::parse_rational(text));
    case FieldKind::SimpleExtension: {
      detail::UPoly poly = detail::UPolyParser(base(), variable(), text).parse();
      return FieldElement::make_extension(*this, std::move(poly));
    }
  }
  return {};
}

inline FieldElement Field::element_at(std::uint64_t index) const {
  const auto n = size();
  if (!n) throw Error(ErrorKind::FieldTooLarge, to_string() + " is infinite");
  if (index >= *n) throw Error(ErrorKind::IndexOutOfRange, "element index beyond field size");
  if (kind() == FieldKind::PrimeField) return FieldElement::make_residue(*this, index);
  const std::uint64_t q = *base().size();
  std::vector<FieldElement> coeffs;
  for (std::size_t i = 0; i < degree(); ++i) {
    coeffs.push_back(base().element_at(index % q));
    index /= q;
  }
  return FieldElement::make_extension(*this, std::move(coeffs));
}

inline std::uint64_t Field::index_of(const FieldElement& element) const {
  if (element.field() != *this) throw Error(ErrorKind::DescriptorMismatch, "element not in " + to_string());
  if (!size()) throw Error(ErrorKind::FieldTooLarge, to_string() + " is infinite");
  if (kind() == FieldKind::PrimeField) return element.residue();
  const std::uint64_t q = *base().size();
  std::uint64_t index = 0;
  const auto& coeffs = element.coefficients();
  for (std::size_t i = coeffs.size(); i-- > 0;) index = index * q + base().index_of(coeffs[i]);
  return index;
}

// ---------------------------------------------------------------------------
// FieldElement

inline FieldElement::FieldElement() : field_(Field::rationals()), value_(mpq_class(0)) {}

inline FieldElement FieldElement::make_extension(const Field& f, std::vector<FieldElement> coeffs) {
  detail::upoly_trim(coeffs);
  const auto& m = f.modulus();
  if (coeffs.size() >= m.size()) coeffs = detail::upoly_mod(coeffs, m);
  coeffs.resize(m.size() - 1, f.base().zero());
  return FieldElement(f, Payload(std::move(coeffs)));
}

inline bool FieldElement::is_zero() const {
  switch (value_.index()) {
    case 0: return rational() == 0;
    case 1: return residue() == 0;
    default:
      return std::all_of(coefficients().begin(), coefficients().end(),
                         [](const FieldElement& c) { return c.is_zero(); });
  }
}

inline bool FieldElement::is_one() const {
  switch (value_.index()) {
    case 0: return rational() == 1;
    case 1: return residue() == 1;
    default: {
      const auto& c = coefficients();
      for (std::size_t i = 1; i < c.size(); ++i) {
        if (!c[i].is_zero()) return false;
      }
      return c[0].is_one();
    }
  }
}

inline void require_same_field(const FieldElement& a, const FieldElement& b) {
  if (a.field() != b.field()) {
    throw Error(ErrorKind::DescriptorMismatch, a.field().to_string() + " vs " + b.field().to_string());
  }
}

inline FieldElement FieldElement::operator-() const {
  switch (value_.index()) {
    case 0: return make_rational(field_, -rational());
    case 1: return make_residue(field_, residue() == 0 ? 0 : field_.characteristic() - residue());
    default: {
      std::vector<FieldElement> out;
      out.reserve(coefficients().size());
      for (const auto& c : coefficients()) out.push_back(-c);
      return FieldElement(field_, Payload(std::move(out)));
    }
  }
}

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  switch (a.value_.index()) {
    case 0: return FieldElement::make_rational(a.field_, a.rational() + b.rational());
    case 1: {
      const std::uint64_t p = a.field_.characteristic();
      std::uint64_t s = a.residue() + b.residue();
      if (s >= p) s -= p;
      return FieldElement::make_residue(a.field_, s);
    }
    default: {
      const auto& x = a.coefficients();
      const auto& y = b.coefficients();
      std::vector<FieldElement> out;
      out.reserve(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) out.push_back(x[i] + y[i]);
      return FieldElement(a.field_, FieldElement::Payload(std::move(out)));
    }
  }
}

inline FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + (-b); }

inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  switch (a.value_.index()) {
    case 0: return FieldElement::make_rational(a.field_, a.rational() * b.rational());
    case 1: return FieldElement::make_residue(a.field_, (a.residue() * b.residue()) % a.field_.characteristic());
    default:
      return FieldElement::make_extension(a.field_, detail::upoly_mul(a.coefficients(), b.coefficients()));
  }
}

inline FieldElement FieldElement::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero in " + field_.to_string());
  switch (value_.index()) {
    case 0: return make_rational(field_, 1 / rational());
    case 1: return make_residue(field_, detail::mod_inverse(residue(), field_.characteristic()));
    default: {
      // Extended Euclid: track s with s*a = r (mod m).
      detail::UPoly a = coefficients();
      detail::upoly_trim(a);
      detail::UPoly r0 = field_.modulus(), r1 = a;
      detail::UPoly s0, s1{field_.base().one()};
      while (!r1.empty()) {
        auto [q, r] = detail::upoly_divmod(r0, r1);
        detail::UPoly s = detail::upoly_sub(s0, detail::upoly_mul(q, s1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
      }
      if (r0.size() != 1) {
        throw Error(ErrorKind::NonInvertibleElement,
                    to_string() + " is a zero divisor; modulus of " + field_.to_string() + " is reducible");
      }
      return make_extension(field_, detail::upoly_scale(s0, r0[0].inverse()));
    }
  }
}

inline FieldElement FieldElement::pow(std::uint64_t exponent) const {
  FieldElement result = field_.one();
  FieldElement base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

inline bool operator==(const FieldElement& a, const FieldElement& b) {
  return a.field_ == b.field_ && a.value_ == b.value_;
}

inline std::string FieldElement::to_string() const {
  switch (value_.index()) {
    case 0: return rational().get_str();
    case 1: return std::to_string(residue());
    default: return detail::render_upoly(coefficients(), field_.variable());
  }
}

inline FieldElement embed_scalar(const FieldElement& a, const Field& target) {
  if (a.field() == target) return a;
  if (target.kind() != FieldKind::SimpleExtension || !target.base().extends(a.field())) {
    throw Error(ErrorKind::NotAnExtension, target.to_string() + " does not extend " + a.field().to_string());
  }
  return FieldElement::make_extension(target, {embed_scalar(a, target.base())});
}

}  // namespace isoalg

#endif  // ISOALG_SCALARS_HPP
