#pragma once

// The l-behavedness predicate on F_q(t), the behaved factor of the zero
// divisor, rounded valuation orders, the Ints membership test, and the h_w
// valuation identities.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fqt/rational.hpp"

namespace fqt {

struct BehavedWitness {
  Place place;
  int64_t k;  // k = v_P(u) > 0, k and deg(P) both nonzero mod l
};

enum class ExcludedReason { mult_div_l, degree_div_l };

inline const char* to_string(ExcludedReason r) {
  return r == ExcludedReason::mult_div_l ? "mult_div_l" : "degree_div_l";
}

struct ExcludedPlace {
  Place place;
  int64_t v;
  ExcludedReason reason;
};

/// Witnesses and exclusions together cover exactly the support of the zero
/// divisor of u.
struct BehavedReport {
  RationalFunction u;
  int64_t l;
  bool is_behaved;
  std::vector<BehavedWitness> witnesses;
  std::vector<ExcludedPlace> excluded;
};

/// u is l-behaved iff some place P has v_P(u) > 0 with v_P(u) and deg(P) both
/// nonzero mod l.  Constants (including 0) are never behaved.  A place failing
/// the multiplicity condition is reported with that reason even if its degree
/// also fails.
inline BehavedReport is_l_behaved(const RationalFunction& u, int64_t l) {
  if (l < 2 || !detail::is_prime_int(l))
    throw std::invalid_argument("is_l_behaved: l must be prime");
  BehavedReport rep{u, l, false, {}, {}};
  if (u.is_constant()) return rep;
  Divisor z = zero_divisor(u);
  for (const auto& [P, v] : z.support()) {
    if (v % l == 0) {
      rep.excluded.push_back({P, v, ExcludedReason::mult_div_l});
    } else if (P.degree() % l == 0) {
      rep.excluded.push_back({P, v, ExcludedReason::degree_div_l});
    } else {
      rep.witnesses.push_back({P, v});
    }
  }
  rep.is_behaved = !rep.witnesses.empty();
  return rep;
}

/// The divisor formed from exactly the witness places at multiplicity k_P;
/// empty when u is not l-behaved.
inline Divisor behaved_factor(const RationalFunction& u, int64_t l) {
  Divisor d;
  for (const auto& w : is_l_behaved(u, l).witnesses) d.add(w.place, w.k);
  return d;
}

/// floor(v_P(w)/k) when v_P(w) >= 0, ceil(v_P(w)/k) when v_P(w) < 0 --
/// i.e. the quotient truncated toward zero.
inline int64_t ord_rounded(const RationalFunction& w, const Place& P, int64_t k) {
  if (k < 1) throw std::invalid_argument("ord_rounded: k must be >= 1");
  if (w.is_zero()) throw std::domain_error("ord_rounded: zero input");
  return valuation(w, P) / k;  // C++ integer division truncates toward zero
}

/// Membership in the outer Ints set over a precomputed witness list: every
/// rounded order is nonnegative.  The zero function is a member.
inline bool ints_member(const RationalFunction& w,
                        const std::vector<BehavedWitness>& witnesses) {
  if (w.is_zero()) return true;
  for (const auto& bw : witnesses)
    if (ord_rounded(w, bw.place, bw.k) < 0) return false;
  return true;
}

inline bool ints_member(const RationalFunction& w, const RationalFunction& u,
                        int64_t l) {
  BehavedReport rep = is_l_behaved(u, l);
  if (!rep.is_behaved) throw std::domain_error("ints_member: u is not l-behaved");
  return ints_member(w, rep.witnesses);
}

namespace detail {

inline int64_t floor_div(int64_t a, int64_t b) {  // b > 0
  int64_t q = a / b;
  return (a % b != 0 && a < 0) ? q - 1 : q;
}

inline int64_t ceil_div(int64_t a, int64_t b) {  // b > 0
  int64_t q = a / b;
  return (a % b != 0 && a > 0) ? q + 1 : q;
}

}  // namespace detail

/// The unique s with w/u^s and u^s/w both Ints members, if exactly one
/// exists.  At each witness (P, k) the two conditions say |s k - v_P(w)| <=
/// k - 1, an interval of candidate s; the answer is the sole point of the
/// intersection over all witnesses, and "none or several" is undefined.
inline std::optional<int64_t> ord_at_zb(const RationalFunction& w,
                                        const RationalFunction& u, int64_t l) {
  BehavedReport rep = is_l_behaved(u, l);
  if (!rep.is_behaved) throw std::domain_error("ord_at_zb: u is not l-behaved");
  if (w.is_zero()) throw std::domain_error("ord_at_zb: zero input");
  int64_t lo = INT64_MIN, hi = INT64_MAX;
  for (const auto& bw : rep.witnesses) {
    int64_t a = valuation(w, bw.place);
    lo = std::max(lo, detail::ceil_div(a - bw.k + 1, bw.k));
    hi = std::min(hi, detail::floor_div(a + bw.k - 1, bw.k));
  }
  if (lo != hi) return std::nullopt;  // empty or ambiguous
  return lo;
}

/// h_w = w^l/u + 1/u^l as a canonical fraction.
inline RationalFunction compute_h_w(const RationalFunction& w,
                                    const RationalFunction& u, int64_t l) {
  if (l < 1) throw std::invalid_argument("compute_h_w: l must be >= 1");
  if (u.is_zero()) throw std::domain_error("compute_h_w: zero u");
  return w.pow(l) / u + u.pow(l).reciprocal();
}

struct HwIdentityRow {
  Place place;
  int64_t k;
  bool negative_case;  // ord_rounded(w, P, k) < 0 (w = 0 counts as nonnegative)
  int64_t ord_hw;      // ord_rounded(h_w, P, k)
  bool pass;
};

struct HwIdentityReport {
  RationalFunction h_w;
  std::vector<HwIdentityRow> rows;
  bool all_pass;
};

/// At each witness (P, k) of the behaved factor: when the rounded order of w
/// is negative, require the rounded order of h_w to be negative and nonzero
/// mod l; otherwise require it to be zero mod l.  Failures are reported, not
/// thrown: the negative branch is known to fail for deep poles at witnesses
/// with k >= 3 (e.g. u = t^3, w = 1/t^5, l = 2 gives rounded order -4).
inline HwIdentityReport check_hw_identities(const RationalFunction& w,
                                            const RationalFunction& u, int64_t l) {
  BehavedReport rep = is_l_behaved(u, l);
  if (!rep.is_behaved)
    throw std::domain_error("check_hw_identities: u is not l-behaved");
  RationalFunction h = compute_h_w(w, u, l);
  if (h.is_zero())
    throw std::logic_error("check_hw_identities: h_w vanished for behaved u");
  HwIdentityReport out{h, {}, true};
  for (const auto& bw : rep.witnesses) {
    bool neg = !w.is_zero() && ord_rounded(w, bw.place, bw.k) < 0;
    int64_t oh = ord_rounded(h, bw.place, bw.k);
    bool pass = neg ? (oh < 0 && oh % l != 0) : (oh % l == 0);
    out.rows.push_back({bw.place, bw.k, neg, oh, pass});
    out.all_pass = out.all_pass && pass;
  }
  return out;
}

}  // namespace fqt
