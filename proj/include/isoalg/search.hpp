#ifndef ISOALG_SEARCH_HPP
#define ISOALG_SEARCH_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "isoalg/algebra.hpp"
#include "isoalg/error.hpp"
#include "isoalg/groebner.hpp"
#include "isoalg/linalg.hpp"
#include "isoalg/polynomial.hpp"
#include "isoalg/polysys.hpp"
#include "isoalg/scalars.hpp"

namespace isoalg {

struct SearchBudget {
  /// Candidate rows tried during zero search.
  std::size_t max_assignments = 20'000'000;
  /// Critical pairs processed by Buchberger.
  std::size_t max_gb_steps = 200'000;
  /// Wall-clock limit for the whole decision, in seconds.
  double wall_limit = 60.0;
};

enum class SearchMode { First, All };

struct ZeroSearchResult {
  /// Zeros in lexicographic order of (T row-major, palette index).
  std::vector<Certificate> zeros;
  std::size_t assignments = 0;
  /// True when the whole space was covered.
  bool complete = false;
  bool budget_exceeded = false;
};

/// Largest field that enumerate_zeros_fp will scan exhaustively.
inline constexpr std::uint64_t kMaxEnumerableField = 64;

namespace detail {

/// Arithmetic on element indices of a small finite field via lookup tables.
struct TableArith {
  using V = std::uint8_t;
  Field field;
  std::size_t q = 0;
  std::vector<V> add_t, mul_t, neg_t, inv_t;
  std::vector<FieldElement> elements;

  explicit TableArith(const Field& f) : field(f), q(static_cast<std::size_t>(*f.size())) {
    for (std::size_t i = 0; i < q; ++i) elements.push_back(f.element_at(i));
    add_t.resize(q * q);
    mul_t.resize(q * q);
    neg_t.resize(q);
    inv_t.resize(q);
    for (std::size_t a = 0; a < q; ++a) {
      neg_t[a] = from(-elements[a]);
      inv_t[a] = a == 0 ? 0 : from(elements[a].inverse());
      for (std::size_t b = 0; b < q; ++b) {
        add_t[a * q + b] = from(elements[a] + elements[b]);
        mul_t[a * q + b] = from(elements[a] * elements[b]);
      }
    }
  }
  V from(const FieldElement& x) const { return static_cast<V>(field.index_of(x)); }
  const FieldElement& to(V v) const { return elements[v]; }
  V zero() const { return 0; }
  bool is_zero(V v) const { return v == 0; }
  V add(V a, V b) const { return add_t[a * q + b]; }
  V mul(V a, V b) const { return mul_t[a * q + b]; }
  V neg(V a) const { return neg_t[a]; }
  V inv(V a) const { return inv_t[a]; }
};

struct ElementArith {
  using V = FieldElement;
  Field field;

  V from(const FieldElement& x) const { return x; }
  const FieldElement& to(const V& v) const { return v; }
  V zero() const { return field.zero(); }
  bool is_zero(const V& v) const { return v.is_zero(); }
  V add(const V& a, const V& b) const { return a + b; }
  V mul(const V& a, const V& b) const { return a * b; }
  V neg(const V& a) const { return -a; }
  V inv(const V& a) const { return a.inverse(); }
};

/// Backtracking over the rows of T. A generator in the T variables only is
/// checked at the first row after which all its variables are assigned;
/// partial rows must stay linearly independent. S = T^{-1} and the
/// remaining generators are checked at the leaves.
template <class Arith>
class RowSearch {
 public:
  using V = typename Arith::V;

  RowSearch(const IsoSystem& sys, const Arith& arith, std::vector<V> palette)
      : sys_(sys), ar_(arith), palette_(std::move(palette)), n_(sys.dim) {
    const std::size_t tvars = n_ * n_;
    by_row_.resize(n_);
    for (std::size_t g = 0; g < sys.generators.size(); ++g) {
      Compiled c;
      bool t_only = true;
      std::size_t last_row = 0;
      for (const auto& term : sys.generators[g].terms()) {
        CompiledTerm ct{ar_.from(term.coeff), -1, -1};
        for (const auto& [v, e] : term.monomial.exponents()) {
          if (v >= tvars) t_only = false;
          else last_row = std::max<std::size_t>(last_row, v / n_);
          for (std::uint32_t r = 0; r < e; ++r) {
            if (ct.v1 < 0) ct.v1 = static_cast<int>(v);
            else if (ct.v2 < 0) ct.v2 = static_cast<int>(v);
            else c.generic = true;
          }
        }
        c.terms.push_back(ct);
      }
      c.index = g;
      if (t_only && n_ > 0) by_row_[last_row].push_back(std::move(c));
      else leaf_.push_back(g);
    }
  }

  struct Options {
    SearchMode mode = SearchMode::First;
    std::size_t max_assignments = 0;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::size_t stride = 1;
    std::size_t offset = 0;
    std::atomic<std::size_t>* counter = nullptr;
  };

  struct Found {
    std::vector<std::size_t> key;
    Certificate cert;
  };

  /// Returns the zeros in this worker's share plus whether it was cut short.
  std::pair<std::vector<Found>, bool> run(const Options& opt) {
    opt_ = &opt;
    found_.clear();
    stopped_ = false;
    aborted_ = false;
    if (n_ == 0) return {found_, false};
    values_.assign(n_ * n_, ar_.zero());
    key_.assign(n_, 0);
    echelon_.clear();
    pivots_.clear();
    descend(0);
    return {std::move(found_), aborted_};
  }

 private:
  struct CompiledTerm {
    V coeff;
    int v1;
    int v2;
  };
  struct Compiled {
    std::vector<CompiledTerm> terms;
    std::size_t index = 0;
    bool generic = false;
  };

  bool tick() {
    const std::size_t used = opt_->counter->fetch_add(1) + 1;
    if (used > opt_->max_assignments) return false;
    if (opt_->deadline && (used & 1023) == 0 && std::chrono::steady_clock::now() > *opt_->deadline) return false;
    return true;
  }

  bool satisfied(const Compiled& c) const {
    if (c.generic) {
      std::vector<FieldElement> point(2 * n_ * n_, ar_.field.zero());
      for (std::size_t i = 0; i < values_.size(); ++i) point[i] = ar_.to(values_[i]);
      return sys_.generators[c.index].evaluate(point).is_zero();
    }
    V acc = ar_.zero();
    for (const auto& t : c.terms) {
      V x = t.coeff;
      if (t.v1 >= 0) x = ar_.mul(x, values_[t.v1]);
      if (t.v2 >= 0) x = ar_.mul(x, values_[t.v2]);
      acc = ar_.add(acc, x);
    }
    return ar_.is_zero(acc);
  }

  /// Reduces the row against the stored echelon rows; appends it if independent.
  bool push_independent(std::size_t row) {
    std::vector<V> v(values_.begin() + row * n_, values_.begin() + (row + 1) * n_);
    for (std::size_t r = 0; r < echelon_.size(); ++r) {
      const V c = v[pivots_[r]];
      if (ar_.is_zero(c)) continue;
      const V nc = ar_.neg(c);
      for (std::size_t j = 0; j < n_; ++j) v[j] = ar_.add(v[j], ar_.mul(nc, echelon_[r][j]));
    }
    std::size_t p = 0;
    while (p < n_ && ar_.is_zero(v[p])) ++p;
    if (p == n_) return false;
    const V inv = ar_.inv(v[p]);
    for (auto& x : v) x = ar_.mul(x, inv);
    echelon_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
  }

  void descend(std::size_t row) {
    const std::size_t m = palette_.size();
    std::size_t total = 1;
    for (std::size_t j = 0; j < n_; ++j) total *= m;
    std::size_t start = 0, step = 1;
    if (row == 0) {
      start = opt_->offset;
      step = opt_->stride;
    }
    for (std::size_t idx = start; idx < total; idx += step) {
      if (stopped_) return;
      if (!tick()) {
        stopped_ = true;
        aborted_ = true;
        return;
      }
      std::size_t rest = idx;
      for (std::size_t j = n_; j-- > 0;) {
        values_[row * n_ + j] = palette_[rest % m];
        rest /= m;
      }
      key_[row] = idx;
      if (!push_independent(row)) continue;
      bool ok = true;
      for (const auto& c : by_row_[row]) {
        if (!satisfied(c)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        if (row + 1 == n_) leaf();
        else descend(row + 1);
      }
      echelon_.pop_back();
      pivots_.pop_back();
    }
  }

  void leaf() {
    Matrix t(ar_.field, n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) t(i, j) = ar_.to(values_[i * n_ + j]);
    }
    auto s = inverse(t);
    if (!s) return;
    if (!leaf_.empty()) {
      const auto point = iso_point(t, *s);
      for (std::size_t g : leaf_) {
        if (!sys_.generators[g].evaluate(point).is_zero()) return;
      }
    }
    found_.push_back({key_, Certificate{ar_.field, std::move(t), std::move(*s)}});
    if (opt_->mode == SearchMode::First) stopped_ = true;
  }

  const IsoSystem& sys_;
  Arith ar_;
  std::vector<V> palette_;
  std::size_t n_;
  std::vector<std::vector<Compiled>> by_row_;
  std::vector<std::size_t> leaf_;
  const Options* opt_ = nullptr;
  std::vector<V> values_;
  std::vector<std::size_t> key_;
  std::vector<std::vector<V>> echelon_;
  std::vector<std::size_t> pivots_;
  std::vector<Found> found_;
  bool stopped_ = false;
  bool aborted_ = false;
};

template <class Arith>
ZeroSearchResult run_row_search(const IsoSystem& sys, const Arith& arith, std::vector<typename Arith::V> palette,
                                SearchMode mode, std::size_t max_assignments,
                                std::optional<std::chrono::steady_clock::time_point> deadline, unsigned jobs) {
  using Search = RowSearch<Arith>;
  jobs = std::max(1u, jobs);
  std::atomic<std::size_t> counter{0};
  std::vector<std::vector<typename Search::Found>> found(jobs);
  std::vector<char> aborted(jobs, 0);
  auto work = [&](unsigned w) {
    Search search(sys, arith, palette);
    typename Search::Options opt;
    opt.mode = mode;
    opt.max_assignments = max_assignments;
    opt.deadline = deadline;
    opt.stride = jobs;
    opt.offset = w;
    opt.counter = &counter;
    auto [zeros, cut] = search.run(opt);
    found[w] = std::move(zeros);
    aborted[w] = cut;
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  std::vector<typename Search::Found> all;
  for (auto& f : found) {
    for (auto& z : f) all.push_back(std::move(z));
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
  ZeroSearchResult out;
  out.assignments = std::min(counter.load(), max_assignments);
  out.budget_exceeded = std::any_of(aborted.begin(), aborted.end(), [](char c) { return c != 0; });
  if (mode == SearchMode::First && all.size() > 1) all.erase(all.begin() + 1, all.end());
  out.complete = !out.budget_exceeded;
  for (auto& z : all) out.zeros.push_back(std::move(z.cert));
  return out;
}

}  // namespace detail

/// Every point of K^{2n^2} with S = T^{-1} that is a zero of the system,
/// scanning K in index order. Restricted to fields with at most 64 elements.
inline ZeroSearchResult enumerate_zeros_fp(const IsoSystem& sys, const SearchBudget& budget = {},
                                           SearchMode mode = SearchMode::All, unsigned jobs = 1) {
  const Field& field = sys.ring->field();
  const auto q = field.size();
  if (!q || *q > kMaxEnumerableField) {
    throw Error(ErrorKind::FieldTooLarge, field.to_string() + " has more than " +
                                              std::to_string(kMaxEnumerableField) + " elements");
  }
  detail::TableArith arith(field);
  std::vector<detail::TableArith::V> palette;
  for (std::size_t i = 0; i < arith.q; ++i) palette.push_back(static_cast<detail::TableArith::V>(i));
  std::optional<std::chrono::steady_clock::time_point> deadline;
  if (budget.wall_limit > 0) {
    deadline = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                   std::chrono::duration<double>(budget.wall_limit));
  }
  return detail::run_row_search(sys, arith, std::move(palette), mode, budget.max_assignments, deadline, jobs);
}

inline ZeroSearchResult enumerate_zeros_fp(const Algebra& a, const Algebra& b, const SearchBudget& budget = {},
                                           SearchMode mode = SearchMode::All, unsigned jobs = 1) {
  return enumerate_zeros_fp(build_iso_system(a, b), budget, mode, jobs);
}

/// Small fixed set of trial entries for fields too large to scan:
/// 0, 1, -1 and, for an extension, y and -y.
inline std::vector<FieldElement> small_palette(const Field& field) {
  std::vector<FieldElement> out{field.zero(), field.one()};
  auto add = [&](const FieldElement& x) {
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  };
  add(-field.one());
  if (field.kind() == FieldKind::SimpleExtension) {
    add(field.generator());
    add(-field.generator());
  }
  return out;
}

/// Zero search over an explicit palette of entries (any field).
inline ZeroSearchResult enumerate_zeros_palette(const IsoSystem& sys, const std::vector<FieldElement>& palette,
                                                const SearchBudget& budget = {}, SearchMode mode = SearchMode::First,
                                                unsigned jobs = 1) {
  detail::ElementArith arith{sys.ring->field()};
  std::optional<std::chrono::steady_clock::time_point> deadline;
  if (budget.wall_limit > 0) {
    deadline = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                   std::chrono::duration<double>(budget.wall_limit));
  }
  return detail::run_row_search(sys, arith, palette, mode, budget.max_assignments, deadline, jobs);
}

// ---------------------------------------------------------------------------
// Decision pipeline

enum class VerdictKind { IsoExplicit, IsoOverClosure, NotIsoOverClosure, NotIsoPrefilter, Unknown };

inline std::string verdict_name(VerdictKind v) {
  switch (v) {
    case VerdictKind::IsoExplicit: return "IsoExplicit";
    case VerdictKind::IsoOverClosure: return "IsoOverClosure";
    case VerdictKind::NotIsoOverClosure: return "NotIsoOverClosure";
    case VerdictKind::NotIsoPrefilter: return "NotIsoPrefilter";
    case VerdictKind::Unknown: return "Unknown";
  }
  return "Unknown";
}

struct BudgetUsage {
  std::size_t assignments = 0;
  std::size_t groebner_pairs = 0;
  /// True when the zero search covered its whole space.
  bool search_complete = false;
  /// True when the scanned space was all of K (not just a palette).
  bool search_exhaustive = false;
};

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::optional<Certificate> certificate;
  std::optional<std::vector<Polynomial>> groebner_basis;
  /// Failed invariant for NotIsoPrefilter, limit hit for Unknown.
  std::string reason;
  BudgetUsage used;
};

struct DecideOptions {
  bool two_sided = false;
  OrderKind order = OrderKind::DegRevLex;
  unsigned jobs = 1;
};

/// Pipeline: prefilter, then zero search, then a Groebner basis of the
/// isomorphism ideal. A failed prefilter on anything but dimension still
/// tries the Groebner basis so that {1} can be reported.
inline Verdict decide_isomorphism(const Algebra& a, const Algebra& b, const SearchBudget& budget = {},
                                  const DecideOptions& options = {}) {
  if (a.field() != b.field()) {
    throw Error(ErrorKind::FieldMismatch, a.field().to_string() + " vs " + b.field().to_string());
  }
  const auto start = std::chrono::steady_clock::now();
  const auto deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                    std::chrono::duration<double>(budget.wall_limit));
  Verdict v;
  const PrefilterResult pre = invariant_prefilter(a, b);
  if (!pre.pass && a.dim() != b.dim()) {
    v.kind = VerdictKind::NotIsoPrefilter;
    v.reason = pre.reason;
    return v;
  }
  const IsoSystem sys = build_iso_system(a, b, options.two_sided, options.order);

  if (pre.pass) {
    SearchBudget sb = budget;
    sb.wall_limit = std::max(0.001, budget.wall_limit / 2);
    const Field& f = a.field();
    ZeroSearchResult zs;
    const bool exhaustive = f.size() && *f.size() <= kMaxEnumerableField;
    if (exhaustive) zs = enumerate_zeros_fp(sys, sb, SearchMode::First, options.jobs);
    else zs = enumerate_zeros_palette(sys, small_palette(f), sb, SearchMode::First, options.jobs);
    v.used.assignments = zs.assignments;
    v.used.search_complete = zs.complete;
    v.used.search_exhaustive = exhaustive && zs.complete;
    if (!zs.zeros.empty()) {
      const Certificate& z = zs.zeros.front();
      Verification check = verify_candidate(a, b, {z.t, z.s});
      if (check.ok()) {
        v.kind = VerdictKind::IsoExplicit;
        v.certificate = std::move(check.certificate);
        return v;
      }
    }
  }

  GroebnerBudget gb_budget{budget.max_gb_steps, deadline};
  GroebnerResult gb = buchberger(sys.generators, gb_budget);
  v.used.groebner_pairs = gb.pairs_processed;
  if (!gb.complete) {
    if (!pre.pass) {
      v.kind = VerdictKind::NotIsoPrefilter;
      v.reason = pre.reason;
    } else {
      v.kind = VerdictKind::Unknown;
      v.reason = std::chrono::steady_clock::now() > deadline ? "wall_limit" : "max_gb_steps";
    }
    return v;
  }
  if (gb.is_unit_ideal()) {
    v.kind = VerdictKind::NotIsoOverClosure;
    v.groebner_basis = std::move(gb.basis);
    return v;
  }
  if (!pre.pass) {
    v.kind = VerdictKind::NotIsoPrefilter;
    v.reason = pre.reason;
    return v;
  }
  v.kind = VerdictKind::IsoOverClosure;
  v.groebner_basis = std::move(gb.basis);
  return v;
}

/// Decides A (x) L against B (x) L for an extension L of the ground field.
inline Verdict decide_after_extension(const Algebra& a, const Algebra& b, const Field& target,
                                      const SearchBudget& budget = {}, const DecideOptions& options = {}) {
  return decide_isomorphism(scalar_extension(a, target), scalar_extension(b, target), budget, options);
}

}  // namespace isoalg

#endif  // ISOALG_SEARCH_HPP
