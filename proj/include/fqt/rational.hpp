#pragma once

// Rational functions over F_q(t), places (finite and infinite), valuations,
// divisors, and the genus-0 Mobius action.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "fqt/poly.hpp"

namespace fqt {

/// Multiplicity of the monic irreducible `pi` in nonzero `f`.
inline int64_t multiplicity(Poly f, const Poly& pi) {
  if (f.is_zero()) throw std::domain_error("multiplicity: zero polynomial");
  int64_t m = 0;
  while (!f.is_constant()) {
    auto [q, r] = divmod(f, pi);
    if (!r.is_zero()) break;
    f = q;
    ++m;
  }
  return m;
}

/// A canonical fraction num/den: den monic, gcd(num, den) = 1, zero is 0/1.
class RationalFunction {
 public:
  RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (num_.field() != den_.field())
      throw std::invalid_argument("RationalFunction: mixed fields");
    if (den_.is_zero()) throw std::invalid_argument("RationalFunction: zero denominator");
    Poly g = gcd(num_, den_);
    if (!g.is_zero() && !g.is_one()) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
    Fq c = den_.lc();
    if (!c.is_one()) {
      Fq ci = c.inv();
      num_ = num_ * Poly::constant(ci);
      den_ = den_ * Poly::constant(ci);
    }
  }
  explicit RationalFunction(Poly num)
      : RationalFunction(num, Poly::one(num.field())) {}

  static RationalFunction zero(const FieldSpec* F) { return RationalFunction(Poly::zero(F)); }
  static RationalFunction one(const FieldSpec* F) { return RationalFunction(Poly::one(F)); }
  static RationalFunction t(const FieldSpec* F) { return RationalFunction(Poly::t(F)); }
  static RationalFunction constant(const Fq& c) { return RationalFunction(Poly::constant(c)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  const FieldSpec* field() const { return num_.field(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

  RationalFunction operator-() const { return RationalFunction(-num_, den_); }
  RationalFunction operator+(const RationalFunction& o) const {
    check_same(o);
    return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  RationalFunction operator-(const RationalFunction& o) const { return *this + (-o); }
  RationalFunction operator*(const RationalFunction& o) const {
    check_same(o);
    return RationalFunction(num_ * o.num_, den_ * o.den_);
  }
  RationalFunction operator/(const RationalFunction& o) const {
    return *this * o.reciprocal();
  }

  RationalFunction reciprocal() const {
    if (is_zero()) throw std::domain_error("RationalFunction: reciprocal of zero");
    return RationalFunction(den_, num_);
  }

  RationalFunction pow(int64_t e) const {
    if (e < 0) return reciprocal().pow(-e);
    if (e == 0) return one(field());
    // num and den stay coprime under powers; normalization is cheap anyway.
    return RationalFunction(num_.pow(e), den_.pow(e));
  }

  bool operator==(const RationalFunction& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const RationalFunction& o) const { return !(*this == o); }

  /// "t^6/(t^6+2)"; a side is parenthesized iff it prints with a '+'.
  std::string str(char var = 't') const {
    if (den_.is_one()) return num_.str(var);
    auto wrap = [](const std::string& s) {
      return s.find('+') != std::string::npos ? "(" + s + ")" : s;
    };
    return wrap(num_.str(var)) + "/" + wrap(den_.str(var));
  }

  /// Accepts "num/den" with at most one top-level '/', each side optionally
  /// parenthesized, or a bare polynomial (den = 1).
  static RationalFunction parse(const FieldSpec* F, const std::string& text) {
    int depth = 0;
    size_t slash = std::string::npos;
    for (size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '(') ++depth;
      else if (text[i] == ')') {
        if (--depth < 0)
          throw std::invalid_argument("RationalFunction::parse: unbalanced ')'");
      } else if (text[i] == '/' && depth == 0) {
        if (slash != std::string::npos)
          throw std::invalid_argument("RationalFunction::parse: multiple '/'");
        slash = i;
      }
    }
    if (depth != 0) throw std::invalid_argument("RationalFunction::parse: unbalanced '('");
    if (slash == std::string::npos) return RationalFunction(parse_side(F, text));
    return RationalFunction(parse_side(F, text.substr(0, slash)),
                            parse_side(F, text.substr(slash + 1)));
  }

 private:
  static Poly parse_side(const FieldSpec* F, std::string s) {
    // Strip whitespace and any number of full outer paren pairs.
    auto trim = [&] {
      size_t a = s.find_first_not_of(" \t");
      size_t b = s.find_last_not_of(" \t");
      s = (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
    };
    trim();
    while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
      int depth = 0;
      bool outer = true;
      for (size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        else if (s[i] == ')') --depth;
        if (depth == 0) { outer = false; break; }
      }
      if (!outer) break;
      s = s.substr(1, s.size() - 2);
      trim();
    }
    return Poly::parse(F, s);
  }

  void check_same(const RationalFunction& o) const {
    if (field() != o.field())
      throw std::invalid_argument("RationalFunction: mixed fields");
  }

  Poly num_, den_;
};

/// A place of F_q(t): either a finite place carried by a monic irreducible
/// polynomial, or the infinite place (degree 1).
class Place {
 public:
  static Place finite(const Poly& pi) {
    if (pi.is_zero() || pi.is_constant())
      throw std::invalid_argument("Place: finite place needs a nonconstant polynomial");
    if (!pi.is_monic()) throw std::invalid_argument("Place: polynomial must be monic");
    if (!pi.is_irreducible())
      throw std::invalid_argument("Place: polynomial must be irreducible");
    return Place(pi.field(), pi);
  }
  static Place infinity(const FieldSpec* F) { return Place(F, std::nullopt); }

  bool is_infinity() const { return !pi_.has_value(); }
  const Poly& pi() const {
    if (!pi_) throw std::logic_error("Place: infinite place carries no polynomial");
    return *pi_;
  }
  int64_t degree() const { return pi_ ? pi_->degree() : 1; }
  const FieldSpec* field() const { return F_; }

  std::string str(char var = 't') const { return pi_ ? pi_->str(var) : "INF"; }

  static Place parse(const FieldSpec* F, const std::string& text) {
    size_t a = text.find_first_not_of(" \t");
    size_t b = text.find_last_not_of(" \t");
    std::string s = (a == std::string::npos) ? "" : text.substr(a, b - a + 1);
    if (s == "INF") return infinity(F);
    return finite(Poly::parse(F, s));
  }

  bool operator==(const Place& o) const {
    if (F_ != o.F_) return false;
    if (pi_.has_value() != o.pi_.has_value()) return false;
    return !pi_ || *pi_ == *o.pi_;
  }
  bool operator!=(const Place& o) const { return !(*this == o); }

  /// Finite places first, ordered by (degree, coefficients); infinity last.
  bool operator<(const Place& o) const {
    if (F_ != o.F_) throw std::invalid_argument("Place: mixed fields");
    if (pi_.has_value() != o.pi_.has_value()) return pi_.has_value();
    if (!pi_) return false;
    return Poly::poly_less(*pi_, *o.pi_);
  }

 private:
  Place(const FieldSpec* F, std::optional<Poly> pi) : F_(F), pi_(std::move(pi)) {}

  const FieldSpec* F_;
  std::optional<Poly> pi_;
};

/// v_P(w) for nonzero w.  At a finite place: multiplicity in num minus
/// multiplicity in den; at infinity: deg(den) - deg(num).
inline int64_t valuation(const RationalFunction& w, const Place& P) {
  if (w.is_zero()) throw std::domain_error("valuation: zero input");
  if (w.field() != P.field()) throw std::invalid_argument("valuation: mixed fields");
  if (P.is_infinity()) return w.den().degree() - w.num().degree();
  return multiplicity(w.num(), P.pi()) - multiplicity(w.den(), P.pi());
}

/// Finite formal sum of places with nonzero integer multiplicities.
class Divisor {
 public:
  Divisor() = default;

  void add(const Place& P, int64_t m) {
    if (m == 0) return;
    auto it = sup_.find(P);
    if (it == sup_.end()) {
      sup_.emplace(P, m);
    } else {
      it->second += m;
      if (it->second == 0) sup_.erase(it);
    }
  }

  int64_t mult(const Place& P) const {
    auto it = sup_.find(P);
    return it == sup_.end() ? 0 : it->second;
  }

  bool empty() const { return sup_.empty(); }
  size_t size() const { return sup_.size(); }
  const std::map<Place, int64_t>& support() const { return sup_; }

  int64_t degree() const {
    int64_t d = 0;
    for (const auto& [P, m] : sup_) d += m * P.degree();
    return d;
  }

  Divisor operator+(const Divisor& o) const {
    Divisor r = *this;
    for (const auto& [P, m] : o.sup_) r.add(P, m);
    return r;
  }
  Divisor operator-(const Divisor& o) const {
    Divisor r = *this;
    for (const auto& [P, m] : o.sup_) r.add(P, -m);
    return r;
  }

  bool operator==(const Divisor& o) const { return sup_ == o.sup_; }
  bool operator!=(const Divisor& o) const { return !(*this == o); }

  /// [{"place": "t+1", "mult": 3}, {"place": "INF", "mult": -1}]
  std::string to_json() const {
    std::string out = "[";
    bool first = true;
    for (const auto& [P, m] : sup_) {
      if (!first) out += ", ";
      first = false;
      out += "{\"place\": \"" + P.str() + "\", \"mult\": " + std::to_string(m) + "}";
    }
    return out + "]";
  }

 private:
  std::map<Place, int64_t> sup_;
};

/// All places with v_P(u) > 0 at multiplicity v_P(u); empty for nonzero
/// constants.
inline Divisor zero_divisor(const RationalFunction& u) {
  if (u.is_zero()) throw std::domain_error("zero_divisor: zero input");
  Divisor d;
  if (u.is_constant()) return d;
  if (!u.num().is_constant())
    for (const auto& [irr, m] : u.num().factor().factors) d.add(Place::finite(irr), m);
  int64_t vinf = u.den().degree() - u.num().degree();
  if (vinf > 0) d.add(Place::infinity(u.field()), vinf);
  return d;
}

/// All places with v_P(u) < 0, stored at multiplicity -v_P(u).
inline Divisor pole_divisor(const RationalFunction& u) {
  if (u.is_zero()) throw std::domain_error("pole_divisor: zero input");
  Divisor d;
  if (u.is_constant()) return d;
  if (!u.den().is_constant())
    for (const auto& [irr, m] : u.den().factor().factors) d.add(Place::finite(irr), m);
  int64_t vinf = u.den().degree() - u.num().degree();
  if (vinf < 0) d.add(Place::infinity(u.field()), -vinf);
  return d;
}

/// [F_q(t) : F_q(u)] = max(deg num, deg den) for nonconstant u.
inline int64_t field_index(const RationalFunction& u) {
  if (u.is_constant()) throw std::domain_error("field_index: constant input");
  return std::max(u.num().degree(), u.den().degree());
}

/// u |-> (a u + b)/(c u + d) with ad - bc != 0.
class MobiusMap {
 public:
  MobiusMap(Fq a, Fq b, Fq c, Fq d)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    if (a_.field() != b_.field() || a_.field() != c_.field() || a_.field() != d_.field())
      throw std::invalid_argument("MobiusMap: mixed fields");
    if ((a_ * d_ - b_ * c_).is_zero())
      throw std::invalid_argument("MobiusMap: singular (ad - bc = 0)");
  }

  static MobiusMap identity(const FieldSpec* F) {
    return MobiusMap(Fq::one(F), Fq::zero(F), Fq::zero(F), Fq::one(F));
  }

  const Fq& a() const { return a_; }
  const Fq& b() const { return b_; }
  const Fq& c() const { return c_; }
  const Fq& d() const { return d_; }
  const FieldSpec* field() const { return a_.field(); }

  /// Matrix product; apply(compose(m1, m2), u) = apply(m1, apply(m2, u)).
  MobiusMap compose(const MobiusMap& o) const {
    return MobiusMap(a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_,
                     c_ * o.a_ + d_ * o.c_, c_ * o.b_ + d_ * o.d_);
  }

  MobiusMap inverse() const { return MobiusMap(d_, -b_, -c_, a_); }

  RationalFunction apply(const RationalFunction& u) const {
    if (field() != u.field()) throw std::invalid_argument("MobiusMap: mixed fields");
    Poly top = Poly::constant(a_) * u.num() + Poly::constant(b_) * u.den();
    Poly bot = Poly::constant(c_) * u.num() + Poly::constant(d_) * u.den();
    if (bot.is_zero())
      throw std::domain_error("MobiusMap: transform denominator vanishes");
    return RationalFunction(top, bot);
  }

 private:
  Fq a_, b_, c_, d_;
};

/// f(s) for a polynomial f and rational s, by Horner over F_q(t).
inline RationalFunction eval_poly_at(const Poly& f, const RationalFunction& s) {
  if (f.field() != s.field()) throw std::invalid_argument("eval_poly_at: mixed fields");
  RationalFunction acc = RationalFunction::zero(s.field());
  if (f.is_zero()) return acc;
  for (int64_t i = f.degree(); i >= 0; --i)
    acc = acc * s + RationalFunction::constant(f.coeff(i));
  return acc;
}

/// u o s as a canonical fraction; s must be nonconstant.
inline RationalFunction substitute(const RationalFunction& u, const RationalFunction& s) {
  if (u.field() != s.field()) throw std::invalid_argument("substitute: mixed fields");
  if (s.is_constant()) throw std::domain_error("substitute: constant substitution");
  // den(s) never vanishes identically: s is nonconstant, so s - r != 0 for
  // every root r of den in the algebraic closure.
  return eval_poly_at(u.num(), s) / eval_poly_at(u.den(), s);
}

}  // namespace fqt
