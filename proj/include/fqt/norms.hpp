#pragma once

// Norm forms of degree-l constant-field extensions of F_q(t): Kummer and
// Artin-Schreier extension data, symbolic norm forms, the valuation-based
// norm decision with trace, brute-force witness oracles, the behaved-vs-norm
// consistency report, Leahey's two-squares decision, and psi_C.

#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fqt/behaved.hpp"
#include "fqt/galois.hpp"
#include "fqt/pasten.hpp"
#include "fqt/poly.hpp"
#include "fqt/rational.hpp"

namespace fqt {

// ---------------------------------------------------------------------------
// Multivariate polynomials over F_q (dense-by-terms, exact), just enough to
// carry expanded norm forms.
// ---------------------------------------------------------------------------

class MVPoly {
 public:
  MVPoly(const FieldSpec* F, int64_t nvars) : F_(F), m_(nvars) {
    if (nvars < 1) throw std::invalid_argument("MVPoly: need at least one variable");
  }

  static MVPoly constant(const FieldSpec* F, int64_t nvars, const Fq& c) {
    MVPoly f(F, nvars);
    if (!c.is_zero()) f.c_[std::vector<int64_t>(nvars, 0)] = c;
    return f;
  }

  static MVPoly variable(const FieldSpec* F, int64_t nvars, int64_t i) {
    if (i < 0 || i >= nvars) throw std::invalid_argument("MVPoly: variable index");
    MVPoly f(F, nvars);
    std::vector<int64_t> e(nvars, 0);
    e[static_cast<size_t>(i)] = 1;
    f.c_[e] = Fq::one(F);
    return f;
  }

  const FieldSpec* field() const { return F_; }
  int64_t nvars() const { return m_; }
  bool is_zero() const { return c_.empty(); }

  int64_t total_degree() const {
    int64_t d = 0;
    for (const auto& [e, c] : c_)
      d = std::max(d, std::accumulate(e.begin(), e.end(), int64_t{0}));
    return d;
  }

  friend MVPoly operator+(const MVPoly& a, const MVPoly& b) {
    a.check_compatible(b);
    MVPoly out = a;
    for (const auto& [e, c] : b.c_) {
      auto it = out.c_.find(e);
      if (it == out.c_.end()) {
        out.c_[e] = c;
      } else {
        it->second = it->second + c;
        if (it->second.is_zero()) out.c_.erase(it);
      }
    }
    return out;
  }

  friend MVPoly operator*(const MVPoly& a, const MVPoly& b) {
    a.check_compatible(b);
    MVPoly out(a.F_, a.m_);
    for (const auto& [e1, c1] : a.c_)
      for (const auto& [e2, c2] : b.c_) {
        std::vector<int64_t> e(e1.size());
        for (size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
        Fq c = c1 * c2;
        auto it = out.c_.find(e);
        if (it == out.c_.end()) {
          if (!c.is_zero()) out.c_[e] = c;
        } else {
          it->second = it->second + c;
          if (it->second.is_zero()) out.c_.erase(it);
        }
      }
    return out;
  }

  friend MVPoly operator*(const MVPoly& a, const Fq& s) {
    MVPoly out(a.F_, a.m_);
    if (s.is_zero()) return out;
    for (const auto& [e, c] : a.c_) out.c_[e] = c * s;
    return out;
  }

  friend bool operator==(const MVPoly& a, const MVPoly& b) {
    a.check_compatible(b);
    return a.c_ == b.c_;
  }
  friend bool operator!=(const MVPoly& a, const MVPoly& b) { return !(a == b); }

  RationalFunction eval(const std::vector<RationalFunction>& xs) const {
    return eval_gen<RationalFunction>(xs, [&](const Fq& c) {
      return RationalFunction(Poly::constant(c));
    });
  }

  Poly eval_poly(const std::vector<Poly>& xs) const {
    return eval_gen<Poly>(xs, [&](const Fq& c) { return Poly::constant(c); });
  }

  Fq eval_const(const std::vector<Fq>& xs) const {
    return eval_gen<Fq>(xs, [](const Fq& c) { return c; });
  }

  /// Deterministic rendering, terms in descending exponent-vector order,
  /// e.g. "a_0^2 + 2*a_1^2".
  std::string str(const std::string& var_prefix = "a_") const {
    if (c_.empty()) return "0";
    std::string out;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      const auto& [e, c] = *it;
      if (!out.empty()) out += " + ";
      bool has_vars = false;
      std::string vars;
      for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (has_vars) vars += "*";
        has_vars = true;
        vars += var_prefix + std::to_string(i);
        if (e[i] > 1) vars += "^" + std::to_string(e[i]);
      }
      if (!has_vars) {
        out += std::to_string(c.index());
      } else if (c.is_one()) {
        out += vars;
      } else {
        out += std::to_string(c.index()) + "*" + vars;
      }
    }
    return out;
  }

 private:
  void check_compatible(const MVPoly& o) const {
    if (F_ != o.F_ || m_ != o.m_)
      throw std::invalid_argument("MVPoly: incompatible operands");
  }

  template <class R, class MakeConst>
  R eval_gen(const std::vector<R>& xs, MakeConst make_const) const {
    if (static_cast<int64_t>(xs.size()) != m_)
      throw std::invalid_argument("MVPoly: wrong number of evaluation points");
    R acc = make_const(Fq::zero(F_));
    for (const auto& [e, c] : c_) {
      R term = make_const(c);
      for (size_t i = 0; i < e.size(); ++i)
        for (int64_t k = 0; k < e[i]; ++k) term = term * xs[i];
      acc = acc + term;
    }
    return acc;
  }

  const FieldSpec* F_;
  int64_t m_;
  std::map<std::vector<int64_t>, Fq> c_;
};

// ---------------------------------------------------------------------------
// Extension data: a degree-l Kummer extension F_q(root of X^l - a) with
// l | q-1, or the degree-p Artin-Schreier extension F_q(root of X^p - X - a).
// Both are constant-field extensions of F_q(t) once tensored with F_q(t).
// ---------------------------------------------------------------------------

class ExtensionSpec {
 public:
  enum class Kind { Kummer, ArtinSchreier };

  static ExtensionSpec kummer(const FieldSpec* F, int64_t l, const Fq& a) {
    if (a.field() != F)
      throw std::invalid_argument("ExtensionSpec: constant from the wrong field");
    if (l < 2 || !detail::is_prime_int(l) || l == F->p())
      throw std::invalid_argument(
          "ExtensionSpec: Kummer degree must be a prime different from the characteristic");
    if ((F->q() - 1) % l != 0)
      throw std::invalid_argument(
          "ExtensionSpec: the l-th roots of unity must lie in F_q (l | q-1)");
    ExtensionSpec s(Kind::Kummer, F, l, a);
    if (!s.defining_poly().is_irreducible())
      throw std::invalid_argument("ExtensionSpec: X^l - a is reducible over F_q");
    return s;
  }

  static ExtensionSpec artin_schreier(const FieldSpec* F, const Fq& a) {
    if (a.field() != F)
      throw std::invalid_argument("ExtensionSpec: constant from the wrong field");
    ExtensionSpec s(Kind::ArtinSchreier, F, F->p(), a);
    if (!s.defining_poly().is_irreducible())
      throw std::invalid_argument("ExtensionSpec: X^p - X - a is reducible over F_q");
    return s;
  }

  Kind kind() const { return kind_; }
  const FieldSpec* field() const { return F_; }
  int64_t degree() const { return deg_; }
  const Fq& a() const { return a_; }

  /// The defining polynomial over F_q, with t standing in for X.
  Poly defining_poly() const {
    Poly X = Poly::t(F_);
    Poly f = X.pow(deg_) - Poly::constant(a_);
    if (kind_ == Kind::ArtinSchreier) f = f - X;
    return f;
  }

  std::string str() const {
    if (kind_ == Kind::Kummer)
      return "Kummer(l=" + std::to_string(deg_) + ", a=" + std::to_string(a_.index()) + ")";
    return "ArtinSchreier(a=" + std::to_string(a_.index()) + ")";
  }

 private:
  ExtensionSpec(Kind k, const FieldSpec* F, int64_t deg, const Fq& a)
      : kind_(k), F_(F), deg_(deg), a_(a) {}

  Kind kind_;
  const FieldSpec* F_;
  int64_t deg_;
  Fq a_;
};

namespace detail {

/// Multiplication of alpha-coordinate vectors modulo the defining relation
/// (alpha^l = a for Kummer, alpha^p = alpha + a for Artin-Schreier).  Works
/// for any coefficient ring R with +, *.
template <class R>
std::vector<R> ext_mul(const std::vector<R>& x, const std::vector<R>& y,
                       bool artin_schreier, const R& a_lift, const R& zero) {
  size_t d = x.size();
  if (d < 2 || y.size() != d) throw std::invalid_argument("ext_mul: bad coordinates");
  std::vector<R> prod(2 * d - 1, zero);
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j) prod[i + j] = prod[i + j] + x[i] * y[j];
  for (size_t k = 2 * d - 2; k >= d; --k) {
    R c = prod[k];
    prod[k] = zero;
    if (artin_schreier) prod[k - d + 1] = prod[k - d + 1] + c;
    prod[k - d] = prod[k - d] + c * a_lift;
    if (k == d) break;
  }
  prod.erase(prod.begin() + static_cast<std::ptrdiff_t>(d), prod.end());
  return prod;
}

}  // namespace detail

/// Coordinate product in the extension: (x_0 + x_1 a + ...)(y_0 + y_1 a + ...)
/// reduced by the defining relation, over F_q(t).
inline std::vector<RationalFunction> coordinate_mul(
    const std::vector<RationalFunction>& x, const std::vector<RationalFunction>& y,
    const ExtensionSpec& spec) {
  if (static_cast<int64_t>(x.size()) != spec.degree() || y.size() != x.size())
    throw std::invalid_argument("coordinate_mul: wrong coordinate count");
  const FieldSpec* F = spec.field();
  RationalFunction a_lift(Poly::constant(spec.a()));
  return detail::ext_mul(x, y, spec.kind() == ExtensionSpec::Kind::ArtinSchreier,
                         a_lift, RationalFunction::zero(F));
}

/// The j-th Galois conjugate in coordinates: alpha maps to xi^j alpha in the
/// Kummer case and to alpha + j in the Artin-Schreier case.
inline std::vector<RationalFunction> conjugate_coords(
    const std::vector<RationalFunction>& x, const ExtensionSpec& spec, int64_t j) {
  if (static_cast<int64_t>(x.size()) != spec.degree())
    throw std::invalid_argument("conjugate_coords: wrong coordinate count");
  if (j < 0 || j >= spec.degree())
    throw std::invalid_argument("conjugate_coords: conjugate index out of range");
  const FieldSpec* F = spec.field();
  int64_t d = spec.degree();
  if (spec.kind() == ExtensionSpec::Kind::Kummer) {
    Fq xi = root_of_unity(F, d);
    std::vector<RationalFunction> out;
    out.reserve(x.size());
    Fq scale = Fq::one(F);
    Fq step = xi.pow(j);
    for (const RationalFunction& xi_coord : x) {
      out.push_back(xi_coord * RationalFunction(Poly::constant(scale)));
      scale = scale * step;
    }
    return out;
  }
  // Artin-Schreier: substitute alpha + j and re-expand, using coordinate
  // arithmetic for the powers of (alpha + j).
  RationalFunction zero = RationalFunction::zero(F);
  RationalFunction a_lift(Poly::constant(spec.a()));
  std::vector<RationalFunction> base(static_cast<size_t>(d), zero);  // alpha + j
  base[0] = RationalFunction(Poly::constant(Fq::from_index(F, j)));
  base[1] = RationalFunction::one(F);
  std::vector<RationalFunction> pw(static_cast<size_t>(d), zero);  // (alpha+j)^0
  pw[0] = RationalFunction::one(F);
  std::vector<RationalFunction> out(static_cast<size_t>(d), zero);
  for (size_t i = 0; i < x.size(); ++i) {
    for (size_t k = 0; k < pw.size(); ++k) out[k] = out[k] + x[i] * pw[k];
    if (i + 1 < x.size()) pw = detail::ext_mul(pw, base, true, a_lift, zero);
  }
  return out;
}

// ---------------------------------------------------------------------------
// The expanded norm form.
// ---------------------------------------------------------------------------

struct NormForm {
  ExtensionSpec spec;
  MVPoly P;  // expanded product of the conjugates of a_0 + a_1 alpha + ...
};

inline NormForm build_norm_form(const ExtensionSpec& spec) {
  const FieldSpec* F = spec.field();
  int64_t d = spec.degree();
  bool as = spec.kind() == ExtensionSpec::Kind::ArtinSchreier;
  MVPoly zero(F, d);
  MVPoly a_lift = MVPoly::constant(F, d, spec.a());

  // The generic element as an alpha-coordinate vector of MVPoly entries.
  std::vector<MVPoly> generic;
  for (int64_t i = 0; i < d; ++i) generic.push_back(MVPoly::variable(F, d, i));

  // Conjugates, built with the same substitution rules as conjugate_coords.
  std::vector<std::vector<MVPoly>> conj;
  if (!as) {
    Fq xi = root_of_unity(F, d);
    for (int64_t j = 0; j < d; ++j) {
      std::vector<MVPoly> c;
      Fq scale = Fq::one(F);
      Fq step = xi.pow(j);
      for (int64_t i = 0; i < d; ++i) {
        c.push_back(generic[static_cast<size_t>(i)] * scale);
        scale = scale * step;
      }
      conj.push_back(std::move(c));
    }
  } else {
    for (int64_t j = 0; j < d; ++j) {
      std::vector<MVPoly> base(static_cast<size_t>(d), zero);  // alpha + j
      base[0] = MVPoly::constant(F, d, Fq::from_index(F, j));
      base[1] = MVPoly::constant(F, d, Fq::one(F));
      std::vector<MVPoly> pw(static_cast<size_t>(d), zero);
      pw[0] = MVPoly::constant(F, d, Fq::one(F));
      std::vector<MVPoly> c(static_cast<size_t>(d), zero);
      for (int64_t i = 0; i < d; ++i) {
        for (size_t k = 0; k < pw.size(); ++k)
          c[k] = c[k] + generic[static_cast<size_t>(i)] * pw[k];
        if (i + 1 < d) pw = detail::ext_mul(pw, base, true, a_lift, zero);
      }
      conj.push_back(std::move(c));
    }
  }

  std::vector<MVPoly> acc = conj[0];
  for (int64_t j = 1; j < d; ++j)
    acc = detail::ext_mul(acc, conj[static_cast<size_t>(j)], as, a_lift, zero);
  // The product is Galois-invariant, so every alpha-coordinate above the
  // constant one must cancel.
  for (int64_t k = 1; k < d; ++k)
    if (!acc[static_cast<size_t>(k)].is_zero())
      throw std::logic_error("build_norm_form: conjugate product not invariant");
  return NormForm{spec, acc[0]};
}

/// The norm form evaluated at rational-function coordinates.
inline RationalFunction norm_of(const std::vector<RationalFunction>& x,
                                const ExtensionSpec& spec) {
  if (static_cast<int64_t>(x.size()) != spec.degree())
    throw std::invalid_argument("norm_of: wrong coordinate count");
  for (const RationalFunction& xi : x)
    if (xi.field() != spec.field())
      throw std::invalid_argument("norm_of: coordinate from the wrong field");
  return build_norm_form(spec).P.eval(x);
}

// ---------------------------------------------------------------------------
// The norm decision.  In the degree-d constant-field extension, a place of
// F_q(t) whose degree is coprime to d stays inert, so a norm has valuation
// divisible by d there; a place of degree divisible by d splits completely
// and imposes no condition; constant units are norms because finite-field
// norm maps are surjective.  The infinite place participates as a place of
// degree 1.
// ---------------------------------------------------------------------------

struct NormConditionRow {
  Place place;
  int64_t valuation;
  int64_t place_degree;
  bool inert;      // degree coprime to the extension degree
  bool satisfied;  // !inert or valuation divisible by the extension degree
};

struct NormReport {
  RationalFunction u;
  ExtensionSpec spec;
  bool is_norm;
  std::vector<NormConditionRow> rows;
};

inline NormReport is_norm_report(const RationalFunction& u, const ExtensionSpec& spec) {
  if (u.field() != spec.field())
    throw std::invalid_argument("is_norm: input from the wrong field");
  if (u.is_zero()) throw std::domain_error("is_norm: zero input");
  int64_t d = spec.degree();
  Divisor div = zero_divisor(u) - pole_divisor(u);
  NormReport report{u, spec, true, {}};
  for (const auto& [P, v] : div.support()) {
    bool inert = std::gcd(P.degree(), d) == 1;
    bool ok = !inert || v % d == 0;
    report.rows.push_back(NormConditionRow{P, v, P.degree(), inert, ok});
    if (!ok) report.is_norm = false;
  }
  return report;
}

inline bool is_norm(const RationalFunction& u, const ExtensionSpec& spec) {
  return is_norm_report(u, spec).is_norm;
}

// ---------------------------------------------------------------------------
// Witness searches.
// ---------------------------------------------------------------------------

namespace detail {

/// All polynomials of degree <= max_deg in counter order (base-q digits of
/// the counter are the coefficients, constant term first).
inline std::vector<Poly> polys_up_to(const FieldSpec* F, int64_t max_deg) {
  int64_t count = 1;
  for (int64_t i = 0; i <= max_deg; ++i) {
    if (count > (int64_t(1) << 40) / F->q())
      throw std::invalid_argument("polys_up_to: search space too large");
    count *= F->q();
  }
  std::vector<Poly> out;
  out.reserve(static_cast<size_t>(count));
  for (int64_t k = 0; k < count; ++k) {
    std::vector<int64_t> idx;
    int64_t v = k;
    for (int64_t i = 0; i <= max_deg; ++i) {
      idx.push_back(v % F->q());
      v /= F->q();
    }
    out.push_back(Poly::from_indices(F, idx));
  }
  return out;
}

/// Distinct rational functions with num and den degrees <= bound, in
/// first-seen order under (numerator counter, then monic denominator by
/// (degree, counter)) enumeration.
inline std::vector<RationalFunction> rationals_up_to(const FieldSpec* F, int64_t bound) {
  std::vector<Poly> nums = polys_up_to(F, bound);
  std::vector<Poly> dens;
  for (int64_t dd = 0; dd <= bound; ++dd)
    for (const Poly& f : polys_up_to(F, dd))
      if (!f.is_zero() && f.degree() == dd && f.is_monic()) dens.push_back(f);
  std::vector<RationalFunction> out;
  std::map<std::string, bool> seen;
  for (const Poly& n : nums)
    for (const Poly& den : dens) {
      RationalFunction w(n, den);
      std::string key = w.str();
      if (!seen.emplace(key, true).second) continue;
      out.push_back(w);
    }
  return out;
}

}  // namespace detail

/// Literal bounded search: scans coordinate vectors of rational functions
/// with num/den degrees <= degree_bound and returns the first witness with
/// norm_of(W) = u in a deterministic order, or none (inconclusive).  For
/// quadratic Kummer forms the first coordinate is solved as a square root
/// instead of enumerated: the order is then (second coordinate by list
/// position, then the canonical root before its negative).
inline std::optional<std::vector<RationalFunction>> norm_witness_search(
    const RationalFunction& u, const ExtensionSpec& spec, int64_t degree_bound) {
  if (degree_bound < 0)
    throw std::invalid_argument("norm_witness_search: negative bound");
  if (u.field() != spec.field())
    throw std::invalid_argument("norm_witness_search: input from the wrong field");
  const FieldSpec* F = spec.field();
  std::vector<RationalFunction> values = detail::rationals_up_to(F, degree_bound);

  if (spec.kind() == ExtensionSpec::Kind::Kummer && spec.degree() == 2) {
    // x0^2 - a x1^2 = u: solve for x0 given x1.
    RationalFunction a_lift(Poly::constant(spec.a()));
    for (const RationalFunction& x1 : values) {
      RationalFunction rhs = u + a_lift * x1 * x1;
      std::optional<RationalFunction> r = is_square(rhs);
      if (!r) continue;
      // The two roots differ only in sign, so the canonical one decides
      // membership in the search box.
      bool in_box = r->is_zero() ||
                    (r->num().degree() <= degree_bound &&
                     r->den().degree() <= degree_bound);
      if (in_box) return std::vector<RationalFunction>{*r, x1};
    }
    return std::nullopt;
  }

  NormForm form = build_norm_form(spec);
  size_t d = static_cast<size_t>(spec.degree());
  double space = 1;
  for (size_t i = 0; i < d; ++i) space *= static_cast<double>(values.size());
  if (space > 4e7)
    throw std::invalid_argument("norm_witness_search: search space too large");
  std::vector<size_t> pick(d, 0);
  std::vector<RationalFunction> coords(d, RationalFunction::zero(F));
  for (;;) {
    for (size_t i = 0; i < d; ++i) coords[i] = values[pick[i]];
    if (form.P.eval(coords) == u) return coords;
    // Odometer: coordinate 0 varies fastest.
    size_t i = 0;
    while (i < d && ++pick[i] == values.size()) {
      pick[i] = 0;
      ++i;
    }
    if (i == d) return std::nullopt;
  }
}

/// Complete decision-by-search for the norm property.  Clearing denominators
/// reduces to the polynomial w = num * den^{deg-1}; if w is a norm at all,
/// it is the norm of an element with polynomial coordinates of degree at
/// most deg(w)/deg (split factors of w contribute their share, inert ones
/// come in full multiples, and the unit is a constant norm), so scanning up
/// to ceil(deg(w)/deg) is exhaustive.  Returns rational coordinates for u.
inline std::optional<std::vector<RationalFunction>> norm_witness_exact(
    const RationalFunction& u, const ExtensionSpec& spec) {
  if (u.field() != spec.field())
    throw std::invalid_argument("norm_witness_exact: input from the wrong field");
  const FieldSpec* F = spec.field();
  size_t d = static_cast<size_t>(spec.degree());
  if (u.is_zero())
    return std::vector<RationalFunction>(d, RationalFunction::zero(F));

  NormForm form = build_norm_form(spec);
  if (u.is_constant()) {
    // Constant norms have constant witnesses.
    std::vector<int64_t> pick(d, 0);
    std::vector<Fq> coords(d, Fq::zero(F));
    Fq target = u.num().coeff(0);
    for (;;) {
      for (size_t i = 0; i < d; ++i) coords[i] = Fq::from_index(F, pick[i]);
      if (form.P.eval_const(coords) == target) {
        std::vector<RationalFunction> out;
        for (const Fq& c : coords) out.push_back(RationalFunction(Poly::constant(c)));
        return out;
      }
      size_t i = 0;
      while (i < d && ++pick[i] == F->q()) {
        pick[i] = 0;
        ++i;
      }
      if (i == d) return std::nullopt;
    }
  }

  Poly w = u.num() * u.den().pow(static_cast<int64_t>(d) - 1);
  int64_t m = (w.degree() + static_cast<int64_t>(d) - 1) / static_cast<int64_t>(d);
  std::vector<Poly> polys = detail::polys_up_to(F, m);
  double space = 1;
  for (size_t i = 0; i < d; ++i) space *= static_cast<double>(polys.size());
  if (space > 4e7)
    throw std::invalid_argument("norm_witness_exact: search space too large");
  std::vector<size_t> pick(d, 0);
  std::vector<Poly> coords(d, Poly::zero(F));
  for (;;) {
    for (size_t i = 0; i < d; ++i) coords[i] = polys[pick[i]];
    if (form.P.eval_poly(coords) == w) {
      std::vector<RationalFunction> out;
      for (const Poly& c : coords) out.push_back(RationalFunction(c, u.den()));
      return out;
    }
    size_t i = 0;
    while (i < d && ++pick[i] == polys.size()) {
      pick[i] = 0;
      ++i;
    }
    if (i == d) return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Behaved-versus-norm consistency: for u in F_q[t] and a degree-l extension
// with l | q-1 or l = p, the expectation is that u fails to be l-behaved
// exactly when u is a norm.  The check computes both sides and reports;
// it never asserts.
// ---------------------------------------------------------------------------

struct Corollary36Report {
  RationalFunction u;
  int64_t l;
  BehavedReport behaved;
  NormReport norm;
  bool consistent;  // is_behaved XOR is_norm
};

inline Corollary36Report corollary36_check(const Poly& u, int64_t l,
                                           const ExtensionSpec& spec) {
  if (u.is_zero()) throw std::domain_error("corollary36_check: zero input");
  if (u.field() != spec.field())
    throw std::invalid_argument("corollary36_check: input from the wrong field");
  if (spec.degree() != l)
    throw std::invalid_argument("corollary36_check: spec degree does not match l");
  const FieldSpec* F = u.field();
  if ((F->q() - 1) % l != 0 && l != F->p())
    throw std::invalid_argument(
        "corollary36_check: hypothesis violation (need l | q-1 or l = p)");
  RationalFunction ru(u);
  BehavedReport br = is_l_behaved(ru, l);
  NormReport nr = is_norm_report(ru, spec);
  bool consistent = br.is_behaved != nr.is_norm;
  return Corollary36Report{ru, l, std::move(br), std::move(nr), consistent};
}

// ---------------------------------------------------------------------------
// Sums of two squares in F_q[t] for q = 3 mod 4: representable exactly when
// every odd-degree irreducible factor appears to even multiplicity.  The
// witness composes per-factor representations by the two-square product
// identity (ac - bd, ad + bc).
// ---------------------------------------------------------------------------

namespace detail {

inline std::pair<Fq, Fq> two_squares_const(const Fq& c) {
  const FieldSpec* F = c.field();
  for (int64_t r = 0; r < F->q(); ++r) {
    Fq a = Fq::from_index(F, r);
    std::optional<Fq> b = (c - a * a).sqrt();
    if (b) return {a, *b};
  }
  throw std::logic_error("two_squares_const: no representation found");
}

/// Bounded search for f = a^2 + b^2 over polynomials of degree <= deg(f).
/// The representation exists for every even-degree irreducible under the
/// two-squares hypothesis, so exhausting the bound indicates a bug.
inline std::pair<Poly, Poly> two_squares_irreducible(const Poly& f) {
  const FieldSpec* F = f.field();
  std::vector<Poly> polys = polys_up_to(F, f.degree());
  for (const Poly& a : polys)
    for (const Poly& b : polys)
      if (a * a + b * b == f) return {a, b};
  throw std::logic_error("two_squares_irreducible: no representation at the bound");
}

inline std::pair<Poly, Poly> two_squares_compose(const std::pair<Poly, Poly>& x,
                                                 const std::pair<Poly, Poly>& y) {
  return {x.first * y.first - x.second * y.second,
          x.first * y.second + x.second * y.first};
}

}  // namespace detail

inline std::optional<std::pair<Poly, Poly>> two_squares(const Poly& f) {
  const FieldSpec* F = f.field();
  if (F->p() % 4 != 3 || F->n() % 2 == 0)
    throw std::invalid_argument("two_squares: need p = 3 mod 4 and odd extension degree");
  if (f.is_zero()) return std::make_pair(Poly::zero(F), Poly::zero(F));
  Poly::Factorization fact = f.factor();
  for (const auto& [fi, e] : fact.factors)
    if (fi.degree() % 2 == 1 && e % 2 == 1) return std::nullopt;

  std::pair<Fq, Fq> c = detail::two_squares_const(fact.unit);
  std::pair<Poly, Poly> acc{Poly::constant(c.first), Poly::constant(c.second)};
  for (const auto& [fi, e] : fact.factors) {
    if (fi.degree() % 2 == 1) {
      acc = detail::two_squares_compose(
          acc, {fi.pow(e / 2), Poly::zero(F)});
    } else {
      std::pair<Poly, Poly> rep = detail::two_squares_irreducible(fi);
      for (int64_t k = 0; k < e; ++k) acc = detail::two_squares_compose(acc, rep);
    }
  }
  // Deterministic presentation: each coordinate keeps whichever sign has the
  // smaller leading-coefficient index, and the higher-degree one comes first.
  auto canon = [](Poly& g) {
    if (g.is_zero()) return;
    Poly neg = -g;
    if (neg.lc().index() < g.lc().index()) g = neg;
  };
  canon(acc.first);
  canon(acc.second);
  bool swap_pair;
  if (acc.first.is_zero())
    swap_pair = !acc.second.is_zero();
  else if (acc.second.is_zero())
    swap_pair = false;
  else
    swap_pair = acc.second.degree() > acc.first.degree();
  if (swap_pair) std::swap(acc.first, acc.second);
  if (!(acc.first * acc.first + acc.second * acc.second == f))
    throw std::logic_error("two_squares: witness self-check failed");
  return acc;
}

// ---------------------------------------------------------------------------
// psi_C: u is a ratio of values of the quadratic form X^2 - alpha Y^2 with
// alpha the canonical nonsquare constant — equivalently, a norm of the
// quadratic Kummer constant extension.  The witness is (a, b, c, d) with
// a^2 - alpha b^2 = u (c^2 - alpha d^2).
// ---------------------------------------------------------------------------

struct PsiCResult {
  bool holds;
  std::optional<std::array<RationalFunction, 4>> witness;
};

inline PsiCResult psi_c(const RationalFunction& u) {
  const FieldSpec* F = u.field();
  if (F->q() % 2 == 0)
    throw std::invalid_argument("psi_c: odd characteristic required");
  if (u.is_zero()) {
    // 0 = 0 * (1 - alpha * 0): the defining tuple (0, 0, 1, 0) is not all zero.
    return {true,
            std::array<RationalFunction, 4>{
                RationalFunction::zero(F), RationalFunction::zero(F),
                RationalFunction::one(F), RationalFunction::zero(F)}};
  }
  ExtensionSpec spec = ExtensionSpec::kummer(F, 2, nonsquare_constant(F));
  if (!is_norm(u, spec)) return {false, std::nullopt};
  std::optional<std::vector<RationalFunction>> w = norm_witness_exact(u, spec);
  if (!w) throw std::logic_error("psi_c: norm claimed but no witness found");
  return {true,
          std::array<RationalFunction, 4>{(*w)[0], (*w)[1], RationalFunction::one(F),
                                          RationalFunction::zero(F)}};
}

}  // namespace fqt
