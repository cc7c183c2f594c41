#ifndef ISOALG_GROEBNER_HPP
#define ISOALG_GROEBNER_HPP

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isoalg/error.hpp"
#include "isoalg/polynomial.hpp"

namespace isoalg {

/// Three-valued outcome of a budgeted decision.
enum class Answer { No, Yes, Timeout };

inline std::string_view answer_name(Answer a) {
  switch (a) {
    case Answer::No: return "false";
    case Answer::Yes: return "true";
    case Answer::Timeout: return "Timeout";
  }
  return "?";
}

/// Limits for one Buchberger run. `max_pairs` counts processed critical
/// pairs.
struct GroebnerBudget {
  std::size_t max_pairs = 200000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct GroebnerResult {
  /// Reduced basis when complete; the current (unreduced) generators otherwise.
  std::vector<Polynomial> basis;
  bool complete = false;
  std::size_t pairs_processed = 0;

  bool is_unit_ideal() const {
    return complete && basis.size() == 1 && basis[0].is_constant() && !basis[0].is_zero();
  }
};

namespace detail {

inline void require_common_ring(const Polynomial& p, const std::vector<Polynomial>& g) {
  for (const auto& q : g) {
    if (q.field() != p.field()) throw Error(ErrorKind::FieldMismatch, "polynomials over different fields");
    if (!(q.ring()->order() == p.ring()->order())) {
      throw Error(ErrorKind::FieldMismatch, "polynomials under different monomial orders");
    }
  }
}

inline std::optional<std::size_t> first_divisor(const Monomial& m, const std::vector<const Polynomial*>& g) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (divides(g[i]->leading_monomial(), m)) return i;
  }
  return std::nullopt;
}

/// Full reduction of p by the listed divisors, always using the first
/// divisor in list order. Optionally accumulates quotients.
inline Polynomial reduce_full(Polynomial p, const std::vector<const Polynomial*>& g,
                              std::vector<Polynomial>* quotients) {
  std::vector<Term> rem_terms;
  while (!p.is_zero()) {
    const Term lt = p.leading_term();
    if (auto i = first_divisor(lt.monomial, g)) {
      const Polynomial& d = *g[*i];
      const FieldElement c = lt.coeff / d.leading_coeff();
      const Monomial m = quotient(lt.monomial, d.leading_monomial());
      p = p.add_scaled(-c, m, d);
      if (quotients) {
        (*quotients)[*i] = (*quotients)[*i] + Polynomial(p.ring(), {{m, c}});
      }
    } else {
      rem_terms.push_back(lt);
      p = p.tail();
    }
  }
  return Polynomial::from_sorted(p.ring(), std::move(rem_terms));
}

}  // namespace detail

/// Remainder of multivariate division of p by G.
inline Polynomial normal_form(const Polynomial& p, const std::vector<Polynomial>& g) {
  detail::require_common_ring(p, g);
  std::vector<const Polynomial*> divisors;
  for (const auto& q : g) {
    if (!q.is_zero()) divisors.push_back(&q);
  }
  return detail::reduce_full(p, divisors, nullptr);
}

/// Division with cofactors: p = sum_i quotients[i] * G[i] + remainder.
struct DivisionResult {
  std::vector<Polynomial> quotients;
  Polynomial remainder;
};

inline DivisionResult divide(const Polynomial& p, const std::vector<Polynomial>& g) {
  detail::require_common_ring(p, g);
  std::vector<const Polynomial*> divisors;
  std::vector<std::size_t> origin;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g[i].is_zero()) {
      divisors.push_back(&g[i]);
      origin.push_back(i);
    }
  }
  std::vector<Polynomial> q(divisors.size(), Polynomial(p.ring()));
  Polynomial r = detail::reduce_full(p, divisors, &q);
  std::vector<Polynomial> quotients(g.size(), Polynomial(p.ring()));
  for (std::size_t i = 0; i < origin.size(); ++i) quotients[origin[i]] = q[i];
  return {std::move(quotients), std::move(r)};
}

/// S(f,g) = (L/lt(f)) f - (L/lt(g)) g with L the lcm of leading monomials.
inline Polynomial s_polynomial(const Polynomial& f, const Polynomial& g) {
  if (f.is_zero() || g.is_zero()) throw Error(ErrorKind::DivisionByZero, "S-polynomial of zero");
  const Monomial l = lcm(f.leading_monomial(), g.leading_monomial());
  const Polynomial a = Polynomial(f.ring()).add_scaled(f.leading_coeff().inverse(), quotient(l, f.leading_monomial()), f);
  return a.add_scaled(-g.leading_coeff().inverse(), quotient(l, g.leading_monomial()), g);
}

namespace detail {

struct CriticalPair {
  std::size_t i;
  std::size_t j;
  Monomial lcm;
};

/// Minimal, interreduced, monic basis sorted by ascending leading monomial.
inline std::vector<Polynomial> reduce_basis(std::vector<Polynomial> g) {
  if (g.empty()) return g;
  const MonomialOrder& ord = g.front().ring()->order();
  std::vector<Polynomial> minimal;
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
      if (i == j) continue;
      const auto& li = g[i].leading_monomial();
      const auto& lj = g[j].leading_monomial();
      // Among equal leading monomials keep the first.
      redundant = divides(lj, li) && (lj != li || j < i);
    }
    if (!redundant) minimal.push_back(g[i].monic());
  }
  std::vector<Polynomial> reduced;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<const Polynomial*> others;
    for (std::size_t j = 0; j < minimal.size(); ++j) {
      if (j != i) others.push_back(&minimal[j]);
    }
    const Polynomial& head = minimal[i];
    Polynomial r = reduce_full(head.tail(), others, nullptr);
    reduced.push_back(Polynomial(head.ring(), {head.leading_term()}) + r);
  }
  std::sort(reduced.begin(), reduced.end(), [&](const Polynomial& a, const Polynomial& b) {
    return ord.compare(a.leading_monomial(), b.leading_monomial()) < 0;
  });
  return reduced;
}

}  // namespace detail

/// Buchberger's algorithm with the normal selection strategy (lowest lcm
/// degree, ties broken by the first-indexed pair) and the Gebauer-Moeller
/// form of the coprime and chain criteria. Returns the reduced basis, or an
/// incomplete result when the budget runs out.
inline GroebnerResult buchberger(const std::vector<Polynomial>& gens, const GroebnerBudget& budget = {}) {
  GroebnerResult result;
  if (gens.empty()) {
    result.complete = true;
    return result;
  }
  detail::require_common_ring(gens.front(), gens);
  const RingPtr ring = gens.front().ring();

  std::vector<Polynomial> polys;
  std::vector<bool> active;
  std::vector<detail::CriticalPair> pairs;

  auto active_divisors = [&] {
    std::vector<const Polynomial*> d;
    for (std::size_t i = 0; i < polys.size(); ++i) {
      if (active[i]) d.push_back(&polys[i]);
    }
    return d;
  };

  auto unit_result = [&] {
    result.basis = {Polynomial::constant(ring, ring->field().one())};
    result.complete = true;
    return result;
  };

  // Gebauer-Moeller update for a new basis element h.
  auto update = [&](Polynomial h) {
    const std::size_t hi = polys.size();
    polys.push_back(std::move(h));
    active.push_back(true);
    const Monomial& lh = polys[hi].leading_monomial();

    std::vector<detail::CriticalPair> candidates;
    for (std::size_t g = 0; g < hi; ++g) {
      if (active[g]) candidates.push_back({g, hi, lcm(polys[g].leading_monomial(), lh)});
    }
    std::vector<detail::CriticalPair> kept;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const auto& cand = candidates[c];
      bool keep = coprime(polys[cand.i].leading_monomial(), lh);
      if (!keep) {
        keep = true;
        for (std::size_t o = c + 1; o < candidates.size() && keep; ++o) {
          if (divides(candidates[o].lcm, cand.lcm)) keep = false;
        }
        for (std::size_t o = 0; o < kept.size() && keep; ++o) {
          if (divides(kept[o].lcm, cand.lcm)) keep = false;
        }
      }
      if (keep) kept.push_back(cand);
    }
    std::vector<detail::CriticalPair> next;
    for (auto& p : pairs) {
      const bool chain_removable =
          divides(lh, p.lcm) && lcm(polys[p.i].leading_monomial(), lh) != p.lcm &&
          lcm(polys[p.j].leading_monomial(), lh) != p.lcm;
      if (!chain_removable) next.push_back(std::move(p));
    }
    for (auto& p : kept) {
      if (!coprime(polys[p.i].leading_monomial(), lh)) next.push_back(std::move(p));
    }
    pairs = std::move(next);
    for (std::size_t g = 0; g < hi; ++g) {
      if (active[g] && divides(lh, polys[g].leading_monomial())) active[g] = false;
    }
  };

  for (const auto& f : gens) {
    if (f.is_zero()) continue;
    Polynomial h = detail::reduce_full(f, active_divisors(), nullptr);
    if (h.is_zero()) continue;
    if (h.is_constant()) return unit_result();
    update(h.monic());
  }

  while (!pairs.empty()) {
    if (result.pairs_processed >= budget.max_pairs ||
        (budget.deadline && std::chrono::steady_clock::now() > *budget.deadline)) {
      for (std::size_t i = 0; i < polys.size(); ++i) {
        if (active[i]) result.basis.push_back(polys[i]);
      }
      return result;
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < pairs.size(); ++k) {
      const auto& a = pairs[k];
      const auto& b = pairs[best];
      if (a.lcm.degree() != b.lcm.degree() ? a.lcm.degree() < b.lcm.degree()
                                           : std::make_pair(a.i, a.j) < std::make_pair(b.i, b.j)) {
        best = k;
      }
    }
    const detail::CriticalPair pair = pairs[best];
    pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(best));
    ++result.pairs_processed;
    Polynomial s = s_polynomial(polys[pair.i], polys[pair.j]);
    Polynomial h = detail::reduce_full(std::move(s), active_divisors(), nullptr);
    if (h.is_zero()) continue;
    if (h.is_constant()) {
      const std::size_t used = result.pairs_processed;
      unit_result();
      result.pairs_processed = used;
      return result;
    }
    update(h.monic());
  }

  std::vector<Polynomial> g;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (active[i]) g.push_back(polys[i]);
  }
  result.basis = detail::reduce_basis(std::move(g));
  result.complete = true;
  return result;
}

/// Re-expresses the generators under `order` before running Buchberger.
inline GroebnerResult buchberger(const std::vector<Polynomial>& gens, const MonomialOrder& order,
                                 const GroebnerBudget& budget = {}) {
  if (gens.empty()) return buchberger(gens, budget);
  const RingPtr& r = gens.front().ring();
  const RingPtr target = std::make_shared<const PolyRing>(r->field(), r->names(), order);
  std::vector<Polynomial> moved;
  for (const auto& g : gens) moved.push_back(g.in_ring(target));
  return buchberger(moved, budget);
}

/// Whether 1 lies in the ideal, i.e. the reduced basis is {1}.
inline Answer ideal_is_trivial(const std::vector<Polynomial>& gens, const GroebnerBudget& budget = {}) {
  const GroebnerResult r = buchberger(gens, budget);
  if (!r.complete) return Answer::Timeout;
  return r.is_unit_ideal() ? Answer::Yes : Answer::No;
}

inline Answer ideal_membership(const Polynomial& p, const std::vector<Polynomial>& gens,
                               const GroebnerBudget& budget = {}) {
  if (p.is_zero()) return Answer::Yes;
  const GroebnerResult r = buchberger(gens, budget);
  if (!r.complete) return Answer::Timeout;
  return normal_form(p, r.basis).is_zero() ? Answer::Yes : Answer::No;
}

/// Rabinowitsch trick: p lies in the radical iff gens + (1 - z p) is the
/// unit ideal, for a fresh variable z ranked below all others.
inline Answer in_radical(const Polynomial& p, const std::vector<Polynomial>& gens,
                         const GroebnerBudget& budget = {}) {
  const RingPtr& r = p.ring();
  std::vector<std::string> names = r->names();
  std::string fresh = "z_aux";
  while (r->find(fresh)) fresh += "_";
  names.push_back(fresh);
  std::vector<VarId> precedence = r->order().precedence();
  for (VarId v = static_cast<VarId>(precedence.size()); v < names.size(); ++v) precedence.push_back(v);
  const RingPtr extended =
      std::make_shared<const PolyRing>(r->field(), names, MonomialOrder(r->order().kind(), precedence));
  std::vector<Polynomial> system;
  for (const auto& g : gens) system.push_back(g.in_ring(extended));
  const Polynomial z = Polynomial::variable(extended, static_cast<VarId>(names.size() - 1));
  system.push_back(Polynomial::constant(extended, r->field().one()) - z * p.in_ring(extended));
  return ideal_is_trivial(system, budget);
}

}  // namespace isoalg

#endif  // ISOALG_GROEBNER_HPP
