#pragma once

// p-power towers in F_q(t): the ground-truth Den_p decision, squareness with
// witness, Pasten's square-product criterion with its M(g, d, p) parameter
// selection, and emission of the phi/chi formulas over the ring language.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fqt/formula.hpp"
#include "fqt/galois.hpp"
#include "fqt/poly.hpp"
#include "fqt/rational.hpp"

namespace fqt {

/// Decides whether f = h^{p^s} for some integer s and returns such an s.
/// Zero inputs are rejected.  For nonconstant inputs the exponent is unique
/// (compared by degree); for constants the least s >= 0 in the Frobenius
/// orbit is returned.
inline std::optional<int64_t> den_p(const RationalFunction& f,
                                    const RationalFunction& h) {
  if (f.field() != h.field()) throw std::invalid_argument("den_p: mixed fields");
  if (f.is_zero() || h.is_zero()) throw std::domain_error("den_p: zero input");
  const FieldSpec* F = f.field();
  int64_t p = F->p();

  if (f.is_constant() || h.is_constant()) {
    if (!f.is_constant() || !h.is_constant()) return std::nullopt;
    // Constants: c^{p^s} walks the Frobenius orbit, which has size dividing n.
    Fq cf = f.num().coeff(0);
    Fq ch = h.num().coeff(0);
    Fq g = ch;
    for (int64_t s = 0; s < F->n(); ++s) {
      if (g == cf) return s;
      g = g.frobenius();
    }
    return std::nullopt;
  }

  int64_t df = field_index(f), dh = field_index(h);
  if (df == dh) return f == h ? std::optional<int64_t>(0) : std::nullopt;
  if (df > dh) {
    // s >= 0: iterate p-th powers of h until the degree catches up.
    RationalFunction g = h;
    int64_t s = 0;
    while (field_index(g) < df) {
      g = g.pow(p);
      ++s;
    }
    if (field_index(g) == df && g == f) return s;
    return std::nullopt;
  }
  // s < 0: peel exact p-th roots off h.  In lowest terms h = A/B with B
  // monic, and h = r^p forces A and B to be p-th powers separately.
  RationalFunction g = h;
  int64_t s = 0;
  while (field_index(g) > df) {
    std::optional<Poly> rn = g.num().pth_root();
    std::optional<Poly> rd = g.den().pth_root();
    if (!rn || !rd) return std::nullopt;
    g = RationalFunction(*rn, *rd);
    --s;
  }
  if (field_index(g) == df && g == f) return s;
  return std::nullopt;
}

/// A square root of w in F_q(t) if one exists.  w is a square exactly when
/// every finite-place valuation is even and the leading-coefficient unit is
/// a square in F_q; the witness is assembled from half multiplicities.
/// is_square(0) = 0.
inline std::optional<RationalFunction> is_square(const RationalFunction& w) {
  const FieldSpec* F = w.field();
  if (w.is_zero()) return RationalFunction::zero(F);
  auto half_of = [](const Poly& f) -> std::optional<Poly> {
    Poly half = Poly::one(f.field());
    for (const auto& [part, mult] : f.squarefree_decomposition()) {
      if (mult % 2 != 0) return std::nullopt;
      half = half * part.pow(mult / 2);
    }
    return half;
  };
  std::optional<Poly> hn = half_of(w.num());
  std::optional<Poly> hd = half_of(w.den());
  if (!hn || !hd) return std::nullopt;
  std::optional<Fq> r = w.num().lc().sqrt();  // den is monic, so the unit is lc(num)
  if (!r) return std::nullopt;
  return RationalFunction(Poly::constant(*r) * *hn, *hd);
}

/// M(g, d, p) = ceil((1/d)(4g + 12 + 8 * sum_{i=1}^{ceil((d-1)/2)} p^i)).
inline int64_t m_of(int64_t g, int64_t d, int64_t p) {
  if (g < 0 || d < 1) throw std::invalid_argument("m_of: need g >= 0 and d >= 1");
  if (p < 3 || p % 2 == 0 || !detail::is_prime_int(p))
    throw std::invalid_argument("m_of: p must be an odd prime");
  int64_t top = 4 * g + 12;
  int64_t pk = 1;
  int64_t lim = d / 2;  // ceil((d-1)/2)
  for (int64_t i = 1; i <= lim; ++i) {
    if (pk > (int64_t(1) << 55) / p) throw std::invalid_argument("m_of: overflow");
    pk *= p;
    top += 8 * pk;
  }
  return (top + d - 1) / d;
}

struct PastenParams {
  int64_t g;
  int64_t p;
  int64_t d;
  int64_t M;
  std::vector<Poly> F_list;  // M distinct monic irreducibles of degree d over F_p
};

/// Deterministic parameter selection.  For p > 4g+12: d = 1, M = 4g+12,
/// F_i = X - i.  Otherwise the least d satisfying both
/// p^d >= (12 + sqrt(8g+168))^2 and (count of monic irreducibles of degree
/// d) > M(g, d, p), with F_list the first M in enumeration order.
inline PastenParams choose_params(int64_t g, int64_t p) {
  if (g < 0) throw std::invalid_argument("choose_params: g must be >= 0");
  if (p < 3 || p % 2 == 0 || !detail::is_prime_int(p))
    throw std::invalid_argument("choose_params: p must be an odd prime");
  const FieldSpec* F = FieldSpec::get(p);
  PastenParams out{g, p, 0, 0, {}};
  if (p > 4 * g + 12) {
    out.d = 1;
    out.M = 4 * g + 12;
    for (int64_t i = 1; i <= out.M; ++i)
      out.F_list.push_back(Poly::from_indices(F, {p - i, 1}));  // X - i
    return out;
  }
  // p^d >= (12 + sqrt(B))^2 = A + 24 sqrt(B) with A = 8g+312, B = 8g+168,
  // tested exactly in integers.
  const int64_t A = 8 * g + 312;
  const int64_t B = 8 * g + 168;
  for (int64_t d = 1, pd = p;; ++d) {
    bool deep_enough =
        pd >= A && static_cast<__int128>(pd - A) * (pd - A) >=
                       static_cast<__int128>(576) * B;
    if (deep_enough) {
      int64_t M = m_of(g, d, p);
      if (count_monic_irreducibles(p, d) > M) {
        std::vector<Poly> all = enumerate_monic_irreducibles(F, d);
        out.d = d;
        out.M = M;
        out.F_list.assign(all.begin(), all.begin() + M);
        return out;
      }
    }
    if (pd > (int64_t(1) << 55) / p)
      throw std::invalid_argument("choose_params: parameter search overflow");
    pd *= p;
  }
}

namespace detail {

/// Coefficient-wise embedding of a prime-field polynomial into F_{p^n}[t].
inline Poly lift_poly(const Poly& f, const FieldSpec* G) {
  if (f.field() == G) return f;
  if (f.field()->p() != G->p())
    throw std::invalid_argument("lift_poly: characteristic mismatch");
  std::vector<int64_t> idx;
  if (!f.is_zero())
    for (int64_t j = 0; j <= f.degree(); ++j) idx.push_back(f.coeff(j).index());
  return Poly::from_indices(G, idx);
}

}  // namespace detail

/// True iff F_i(f) * F_i(h) is a square in F_q(t) for every F_i in params.
/// For nonconstant f, h this decides f = h^{p^s}; constants are rejected.
inline bool pasten_criterion(const RationalFunction& f, const RationalFunction& h,
                             const PastenParams& params) {
  if (f.field() != h.field())
    throw std::invalid_argument("pasten_criterion: mixed fields");
  const FieldSpec* F = f.field();
  if (F->p() != params.p)
    throw std::invalid_argument("pasten_criterion: characteristic does not match params");
  if (f.is_zero() || h.is_zero())
    throw std::domain_error("pasten_criterion: zero input");
  if (f.is_constant() || h.is_constant())
    throw std::domain_error("pasten_criterion: constant input");
  for (const Poly& Fi : params.F_list) {
    Poly lifted = detail::lift_poly(Fi, F);
    RationalFunction prod = eval_poly_at(lifted, f) * eval_poly_at(lifted, h);
    if (!is_square(prod)) return false;
  }
  return true;
}

namespace detail {

/// Horner form of f applied to the term x, coefficients lifted to integer
/// literals in [0, p); the leading 1 of a monic polynomial is elided.
inline RingTermPtr lift_eval_term(const Poly& f, const RingTermPtr& x) {
  if (f.is_zero()) return term_lit(0);
  if (f.is_constant()) return term_lit(f.coeff(0).index());
  RingTermPtr acc;  // null encodes a leading coefficient 1
  if (!f.lc().is_one()) acc = term_lit(f.lc().index());
  for (int64_t j = f.degree() - 1; j >= 0; --j) {
    RingTermPtr prod = acc ? term_mul(acc, x) : x;
    acc = term_add(prod, term_lit(f.coeff(j).index()));
  }
  return acc;
}

/// E z (lhs = z * z).
inline RingFormulaPtr square_atom(RingTermPtr lhs) {
  RingTermPtr z = term_var("z");
  return ring_exists("z", ring_eq(std::move(lhs), term_mul(z, z)));
}

/// phi_{g,p} evaluated at the argument terms a, b.
inline RingFormulaPtr phi_at(int64_t g, int64_t p, const RingTermPtr& a,
                             const RingTermPtr& b) {
  PastenParams params = choose_params(g, p);
  std::vector<RingFormulaPtr> conj;
  conj.reserve(params.F_list.size());
  for (const Poly& Fi : params.F_list)
    conj.push_back(square_atom(term_mul(lift_eval_term(Fi, a), lift_eval_term(Fi, b))));
  return ring_and_all(conj);
}

/// The characteristic-free d = 1 instance: conjuncts E z ((a-i)(b-i) = z*z)
/// for i = 1..M, with plain negative integer literals.
inline RingFormulaPtr phi_d1_at(int64_t M, const RingTermPtr& a, const RingTermPtr& b) {
  std::vector<RingFormulaPtr> conj;
  conj.reserve(static_cast<size_t>(M));
  for (int64_t i = 1; i <= M; ++i)
    conj.push_back(square_atom(
        term_mul(term_add(a, term_lit(-i)), term_add(b, term_lit(-i)))));
  return ring_and_all(conj);
}

inline std::vector<int64_t> primes_upto(int64_t n) {
  std::vector<int64_t> out;
  for (int64_t k = 2; k <= n; ++k)
    if (is_prime_int(k)) out.push_back(k);
  return out;
}

/// chi_g at the argument terms: either the characteristic exceeds 4g+12 and
/// the d = 1 template holds, or the characteristic is a listed odd prime p
/// and phi_{g,p} holds.  p = 2 has no phi instance (the criterion needs odd
/// characteristic), so it appears only in the first disjunct's guards.
inline RingFormulaPtr chi_at(int64_t g, const RingTermPtr& a, const RingTermPtr& b) {
  int64_t bound = 4 * g + 12;
  std::vector<int64_t> ps = primes_upto(bound);
  std::vector<RingFormulaPtr> guards;
  for (int64_t p : ps) guards.push_back(ring_charne(p));
  RingFormulaPtr first = ring_and(phi_d1_at(bound, a, b), ring_and_all(guards));
  std::vector<RingFormulaPtr> cases;
  for (int64_t p : ps)
    if (p != 2) cases.push_back(ring_and(ring_chareq(p), phi_at(g, p, a, b)));
  return ring_or(first, ring_or_all(cases));
}

/// The uniform phi_g at arbitrary argument terms; the names of the two
/// internal bound multiplier variables are caller-chosen so that splicing
/// into a larger formula cannot capture variables of the surrounding scope.
inline RingFormulaPtr phi_uniform_at(int64_t g, const RingTermPtr& a,
                                     const RingTermPtr& b, const std::string& un,
                                     const std::string& vn) {
  RingTermPtr u = term_var(un), v = term_var(vn);
  RingFormulaPtr direct = ring_and(ring_and(ring_F(a), ring_F(b)), chi_at(g, a, b));
  RingFormulaPtr scaled = ring_exists(
      un,
      ring_exists(vn, ring_and(ring_and(ring_and(ring_F(u), ring_F(v)),
                                        chi_at(g, u, v)),
                               chi_at(g, term_mul(u, a), term_mul(v, b)))));
  return ring_or(direct, scaled);
}

}  // namespace detail

/// phi_{g,p}: free variables x, y; a conjunction of M square atoms whose
/// polynomial coefficients are integer literals in [0, p).
inline RingFormulaPtr build_phi(int64_t g, int64_t p) {
  return detail::phi_at(g, p, term_var("x"), term_var("y"));
}

/// chi_g: free variables x, y; case split on the characteristic.
inline RingFormulaPtr build_chi(int64_t g) {
  return detail::chi_at(g, term_var("x"), term_var("y"));
}

/// The uniform phi_g: either x, y are themselves nonconstant and chi_g
/// holds, or nonconstant multipliers u, v exist with chi_g at (u, v) and at
/// (u*x, v*y).
inline RingFormulaPtr build_phi_uniform(int64_t g) {
  return detail::phi_uniform_at(g, term_var("x"), term_var("y"), "u", "v");
}

}  // namespace fqt
