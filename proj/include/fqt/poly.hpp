#pragma once

// Univariate polynomials over F_q.
//
// Coefficients are stored constant-term first with no trailing zeros, so
// every polynomial has exactly one representation.  The zero polynomial has
// no degree: degree() throws on it, callers test is_zero() first.
//
// factor() is a complete factorization: squarefree decomposition (with the
// char-p p-th-power descent), then distinct-degree splitting, then
// equal-degree splitting.  The equal-degree stage draws its random elements
// from a generator seeded by the input bytes, so results are a pure
// function of the input.

#include <cassert>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fqt/galois.hpp"

namespace fqt {

class Poly {
 public:
  Poly() : F_(nullptr) {}

  static Poly zero(const FieldSpec* F) { return Poly(F); }
  static Poly one(const FieldSpec* F) { return constant(Fq::one(F)); }
  static Poly t(const FieldSpec* F) { return monomial(F, 1, Fq::one(F)); }

  static Poly constant(const Fq& c) {
    Poly f(c.field());
    if (!c.is_zero()) f.c_.push_back(c);
    return f;
  }

  static Poly monomial(const FieldSpec* F, int64_t deg, const Fq& c) {
    if (deg < 0) throw std::invalid_argument("Poly: negative degree");
    Poly f(F);
    if (!c.is_zero()) {
      f.c_.assign(static_cast<size_t>(deg), Fq::zero(F));
      f.c_.push_back(c);
    }
    return f;
  }

  /// Coefficients constant-term first; trailing zeros are dropped.
  static Poly from_coeffs(const FieldSpec* F, std::vector<Fq> coeffs) {
    Poly f(F);
    f.c_ = std::move(coeffs);
    f.trim();
    return f;
  }

  /// Coefficients given as canonical indices, constant-term first.
  static Poly from_indices(const FieldSpec* F, const std::vector<int64_t>& idx) {
    std::vector<Fq> c;
    c.reserve(idx.size());
    for (int64_t k : idx) c.push_back(Fq::from_index(F, k));
    return from_coeffs(F, std::move(c));
  }

  const FieldSpec* field() const { return F_; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }

  int64_t degree() const {
    if (is_zero()) throw std::domain_error("Poly: the zero polynomial has no degree");
    return static_cast<int64_t>(c_.size()) - 1;
  }

  Fq lc() const {
    if (is_zero()) throw std::domain_error("Poly: the zero polynomial has no leading coefficient");
    return c_.back();
  }

  Fq coeff(int64_t i) const {
    if (i < 0 || static_cast<size_t>(i) >= c_.size()) return Fq::zero(F_);
    return c_[static_cast<size_t>(i)];
  }

  const std::vector<Fq>& coeffs() const { return c_; }

  bool is_monic() const { return !is_zero() && lc().is_one(); }

  Poly monic() const {
    if (is_zero()) return *this;
    if (is_monic()) return *this;
    return *this * Poly::constant(lc().inv());
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    a.check_same(b);
    Poly r(a.F_);
    size_t n = std::max(a.c_.size(), b.c_.size());
    r.c_.reserve(n);
    for (size_t i = 0; i < n; ++i) r.c_.push_back(a.coeff(i) + b.coeff(i));
    r.trim();
    return r;
  }

  friend Poly operator-(const Poly& a, const Poly& b) {
    a.check_same(b);
    Poly r(a.F_);
    size_t n = std::max(a.c_.size(), b.c_.size());
    r.c_.reserve(n);
    for (size_t i = 0; i < n; ++i) r.c_.push_back(a.coeff(i) - b.coeff(i));
    r.trim();
    return r;
  }

  Poly operator-() const { return zero(F_) - *this; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check_same(b);
    if (a.is_zero() || b.is_zero()) return zero(a.F_);
    Poly r(a.F_);
    r.c_.assign(a.c_.size() + b.c_.size() - 1, Fq::zero(a.F_));
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (size_t j = 0; j < b.c_.size(); ++j)
        r.c_[i + j] = r.c_[i + j] + a.c_[i] * b.c_[j];
    }
    r.trim();
    return r;
  }

  /// Quotient and remainder; throws on a zero divisor.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    a.check_same(b);
    if (b.is_zero()) throw std::domain_error("Poly: division by zero");
    if (a.is_zero() || a.degree() < b.degree()) return {zero(a.F_), a};
    Poly q(a.F_), r = a;
    q.c_.assign(a.c_.size() - b.c_.size() + 1, Fq::zero(a.F_));
    Fq lcinv = b.lc().inv();
    while (!r.is_zero() && r.degree() >= b.degree()) {
      int64_t shift = r.degree() - b.degree();
      Fq c = r.lc() * lcinv;
      q.c_[static_cast<size_t>(shift)] = c;
      for (size_t i = 0; i < b.c_.size(); ++i) {
        size_t k = i + static_cast<size_t>(shift);
        r.c_[k] = r.c_[k] - c * b.c_[i];
      }
      r.trim();
    }
    q.trim();
    return {q, r};
  }

  friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

  /// Monic gcd; gcd(0, 0) = 0.
  friend Poly gcd(Poly a, Poly b) {
    a.check_same(b);
    while (!b.is_zero()) {
      a = a % b;
      std::swap(a, b);
    }
    return a.monic();
  }

  /// g = gcd(a, b) monic along with s, t with s*a + t*b = g.
  friend void xgcd(const Poly& a, const Poly& b, Poly& g, Poly& s, Poly& t) {
    a.check_same(b);
    Poly r0 = a, r1 = b;
    Poly s0 = one(a.F_), s1 = zero(a.F_);
    Poly t0 = zero(a.F_), t1 = one(a.F_);
    while (!r1.is_zero()) {
      auto [q, r] = divmod(r0, r1);
      r0 = r1;
      r1 = r;
      Poly s2 = s0 - q * s1, t2 = t0 - q * t1;
      s0 = s1;
      s1 = s2;
      t0 = t1;
      t1 = t2;
    }
    if (r0.is_zero()) {
      g = r0;
      s = s0;
      t = t0;
      return;
    }
    Poly u = Poly::constant(r0.lc().inv());
    g = r0 * u;
    s = s0 * u;
    t = t0 * u;
  }

  Poly pow(int64_t e) const {
    if (e < 0) throw std::invalid_argument("Poly: negative exponent");
    Poly base = *this, r = one(F_);
    while (e) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  Poly derivative() const {
    Poly r(F_);
    for (size_t i = 1; i < c_.size(); ++i)
      r.c_.push_back(c_[i] * Fq::from_index(F_, static_cast<int64_t>(i % static_cast<size_t>(F_->p()))));
    r.trim();
    return r;
  }

  Fq eval(const Fq& x) const {
    Fq r = Fq::zero(F_);
    for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
  }

  /// The exact p-th root if the polynomial is a p-th power, else nullopt.
  std::optional<Poly> pth_root() const {
    if (is_zero()) return zero(F_);
    int64_t p = F_->p();
    Poly r(F_);
    r.c_.assign(c_.size() / static_cast<size_t>(p) + 1, Fq::zero(F_));
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i].is_zero()) continue;
      if (i % static_cast<size_t>(p) != 0) return std::nullopt;
      r.c_[i / static_cast<size_t>(p)] = c_[i].pth_root();
    }
    r.trim();
    return r;
  }

  /// Monic squarefree parts with multiplicities, f = lc * prod part^mult,
  /// parts pairwise coprime and squarefree, sorted by (degree, lex).
  std::vector<std::pair<Poly, int64_t>> squarefree_decomposition() const {
    if (is_zero()) throw std::domain_error("Poly: squarefree decomposition of zero");
    std::vector<std::pair<Poly, int64_t>> out;
    sqfree_rec(monic(), 1, out);
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
      return poly_less(x.first, y.first);
    });
    return out;
  }

  bool is_irreducible() const {
    if (is_zero() || is_constant()) return false;
    Poly f = monic();
    int64_t d = f.degree();
    if (d == 1) return true;
    int64_t q = F_->q();
    Poly x = t(F_);
    std::vector<Poly> frob;  // frob[i] = x^{q^{i+1}} mod f
    Poly g = x;
    for (int64_t i = 0; i < d; ++i) {
      g = powmod(g, q, f);
      frob.push_back(g);
    }
    if (!(frob[static_cast<size_t>(d - 1)] - x).is_zero()) return false;
    for (int64_t r = 2; r <= d; ++r) {
      if (d % r != 0 || !detail::is_prime_int(r)) continue;
      Poly diff = frob[static_cast<size_t>(d / r - 1)] - x;
      if (!(gcd(f, diff) - one(F_)).is_zero()) return false;
    }
    return true;
  }

  struct Factorization {
    Fq unit;
    std::vector<std::pair<Poly, int64_t>> factors;  // monic irreducible, mult
  };

  /// Complete factorization into the unit and monic irreducible powers,
  /// sorted by (degree, lex coefficients).  Deterministic.
  Factorization factor() const {
    if (is_zero()) throw std::domain_error("Poly: factorization of zero");
    Factorization out;
    out.unit = lc();
    Poly f = monic();
    if (f.is_constant()) return out;
    uint64_t seed = hash_bytes();
    for (const auto& [part, mult] : f.squarefree_decomposition()) {
      for (const Poly& irr : factor_squarefree(part, seed))
        out.factors.emplace_back(irr, mult);
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& x, const auto& y) { return poly_less(x.first, y.first); });
    return out;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    a.check_same(b);
    return a.c_ == b.c_;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Total order: by degree (zero first), then coefficients from the
  /// highest degree down, each compared by canonical index.
  static bool poly_less(const Poly& a, const Poly& b) {
    a.check_same(b);
    if (a.is_zero() || b.is_zero()) return !a.is_zero() < !b.is_zero();
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (size_t i = a.c_.size(); i-- > 0;) {
      int64_t ai = a.c_[i].index(), bi = b.c_[i].index();
      if (ai != bi) return ai < bi;
    }
    return false;
  }

  /// base^e mod m.
  static Poly powmod(Poly base, int64_t e, const Poly& m) {
    return powmod_wide(std::move(base), static_cast<unsigned __int128>(e), m);
  }

  // --- text form -----------------------------------------------------------

  /// Canonical descending-degree form, e.g. "t^6+2" or "2t^2+2t+1".
  /// Coefficients print as canonical indices.
  std::string str(char var = 't') const {
    if (is_zero()) return "0";
    std::string out;
    for (size_t i = c_.size(); i-- > 0;) {
      if (c_[i].is_zero()) continue;
      if (!out.empty()) out += '+';
      int64_t e = static_cast<int64_t>(i);
      int64_t k = c_[i].index();
      if (e == 0) {
        out += std::to_string(k);
      } else {
        if (k != 1) out += std::to_string(k);
        out += var;
        if (e >= 2) out += "^" + std::to_string(e);
      }
    }
    return out;
  }

  /// Parses sums of terms in a single variable ('t' or 'X'), e.g.
  /// "t^6+2", "-t+1", "2*X^3".  Integer coefficients are canonical element
  /// indices, reduced mod q; '-' negates the following term.
  static Poly parse(const FieldSpec* F, const std::string& text) {
    size_t pos = 0;
    auto skip_ws = [&] {
      while (pos < text.size() && isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto fail = [&](const std::string& msg) -> void {
      throw std::invalid_argument("Poly::parse at " + std::to_string(pos) + ": " + msg);
    };
    auto parse_int = [&]() -> int64_t {
      size_t start = pos;
      while (pos < text.size() && isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos == start) fail("expected integer");
      return std::stoll(text.substr(start, pos - start));
    };
    Poly result = zero(F);
    skip_ws();
    if (pos >= text.size()) fail("empty polynomial");
    bool first = true;
    while (true) {
      skip_ws();
      bool neg = false;
      if (!first || pos < text.size()) {
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
          if (first && text[pos] == '+') fail("unexpected '+'");
          neg = text[pos] == '-';
          ++pos;
          skip_ws();
        } else if (!first) {
          break;
        }
      }
      first = false;
      // term := int ['*'] [var ['^' int]] | var ['^' int]
      std::optional<int64_t> coeff;
      if (pos < text.size() && isdigit(static_cast<unsigned char>(text[pos])))
        coeff = parse_int();
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skip_ws();
      }
      int64_t exp = 0;
      if (pos < text.size() && (text[pos] == 't' || text[pos] == 'X')) {
        ++pos;
        exp = 1;
        skip_ws();
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          skip_ws();
          exp = parse_int();
          if (exp < 0) fail("negative exponent");
        }
      } else if (!coeff) {
        fail("expected term");
      }
      Fq c = coeff ? Fq::from_index(F, *coeff) : Fq::one(F);
      if (neg) c = -c;
      result = result + monomial(F, exp, c);
      skip_ws();
      if (pos >= text.size()) break;
      if (text[pos] != '+' && text[pos] != '-') break;
    }
    skip_ws();
    if (pos != text.size()) fail("trailing characters");
    return result;
  }

 private:
  explicit Poly(const FieldSpec* F) : F_(F) {}

  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  void check_same(const Poly& o) const {
    if (!F_ || !o.F_) throw std::logic_error("Poly: null field");
    if (F_ != o.F_) throw std::invalid_argument("Poly: mixed fields");
  }

  uint64_t hash_bytes() const {
    uint64_t h = detail::fnv1a(&F_, sizeof(F_));
    int64_t p = F_->p(), n = F_->n();
    h = detail::fnv1a(&p, sizeof(p), h);
    h = detail::fnv1a(&n, sizeof(n), h);
    for (const Fq& c : c_) {
      int64_t k = c.index();
      h = detail::fnv1a(&k, sizeof(k), h);
    }
    return h;
  }

  static Poly powmod_wide(Poly base, unsigned __int128 e, const Poly& m) {
    Poly r = one(base.F_);
    base = base % m;
    while (e) {
      if (e & 1) r = (r * base) % m;
      base = (base * base) % m;
      e >>= 1;
    }
    return r;
  }

  // f monic.  Standard char-p squarefree decomposition: strip repeated
  // factors with gcd(f, f'), recurse on the p-th-power part.
  static void sqfree_rec(const Poly& f, int64_t outer_mult,
                         std::vector<std::pair<Poly, int64_t>>& out) {
    const FieldSpec* F = f.field();
    if (f.is_constant()) return;
    Poly d = f.derivative();
    if (d.is_zero()) {
      auto root = f.pth_root();
      if (!root) throw std::logic_error("Poly: zero derivative without p-th root");
      sqfree_rec(root->monic(), outer_mult * F->p(), out);
      return;
    }
    Poly c = gcd(f, d);
    Poly w = f / c;  // product of squarefree factors with p-prime multiplicity
    int64_t i = 1;
    while (!w.is_constant()) {
      Poly y = gcd(w, c);
      Poly z = w / y;
      if (!z.is_constant()) out.emplace_back(z.monic(), i * outer_mult);
      w = y;
      c = c / y;
      ++i;
    }
    if (!c.is_constant()) {
      auto root = c.pth_root();
      if (!root) throw std::logic_error("Poly: leftover part is not a p-th power");
      sqfree_rec(root->monic(), outer_mult * F->p(), out);
    }
  }

  // part: monic squarefree.  Returns its monic irreducible factors.
  static std::vector<Poly> factor_squarefree(const Poly& part, uint64_t seed) {
    const FieldSpec* F = part.field();
    int64_t q = F->q();
    std::vector<Poly> out;
    Poly f = part;
    Poly x = t(F);
    Poly h = x;
    int64_t d = 0;
    while (!f.is_constant() && f.degree() >= 2 * (d + 1)) {
      ++d;
      h = powmod(h, q, f);
      Poly g = gcd(f, h - x);
      if (!g.is_constant()) {
        equal_degree_split(g, d, seed, out);
        f = f / g;
        h = h % f;
      }
    }
    if (!f.is_constant()) out.push_back(f.monic());
    return out;
  }

  // g: monic squarefree product of irreducibles all of degree d.
  static void equal_degree_split(const Poly& g, int64_t d, uint64_t seed,
                                 std::vector<Poly>& out) {
    const FieldSpec* F = g.field();
    if (g.degree() == d) {
      out.push_back(g.monic());
      return;
    }
    uint64_t h = seed;
    for (const Fq& c : g.coeffs()) {
      int64_t k = c.index();
      h = detail::fnv1a(&k, sizeof(k), h);
    }
    detail::SplitMix64 rng(h);
    int64_t q = F->q();
    unsigned __int128 qd = 1;
    for (int64_t i = 0; i < d; ++i) {
      qd *= static_cast<unsigned __int128>(q);
      if (qd > (static_cast<unsigned __int128>(1) << 100))
        throw std::domain_error("Poly: equal-degree split exponent too large");
    }
    while (true) {
      // Random element of F_q[t]/(g).
      Poly a = zero(F);
      for (int64_t i = 0; i < g.degree(); ++i) {
        int64_t k = static_cast<int64_t>(rng.next() % static_cast<uint64_t>(q));
        a = a + monomial(F, i, Fq::from_index(F, k));
      }
      if (a.is_constant()) continue;
      Poly b;
      if (q % 2 == 0) {
        // Trace map over F_2: sum of a^{2^i} for 0 <= i < log2(q^d).
        Poly tr = a;
        Poly cur = a;
        for (unsigned __int128 steps = qd >> 1; steps > 1; steps >>= 1) {
          cur = (cur * cur) % g;
          tr = tr + cur;
        }
        b = tr;
      } else {
        b = powmod_wide(a, (qd - 1) / 2, g) - one(F);
      }
      Poly s = gcd(g, b);
      if (!s.is_constant() && s.degree() < g.degree()) {
        equal_degree_split(s, d, seed, out);
        equal_degree_split(g / s, d, seed, out);
        return;
      }
    }
  }

  const FieldSpec* F_;
  std::vector<Fq> c_;
};

/// Number of monic irreducibles of degree d over F_q (Gauss's necklace
/// count, (1/d) * sum over e | d of mu(d/e) q^e).
inline int64_t count_monic_irreducibles(int64_t q, int64_t d) {
  if (d < 1) throw std::invalid_argument("count_monic_irreducibles: d must be >= 1");
  auto mobius = [](int64_t n) -> int64_t {
    int64_t result = 1;
    for (int64_t p = 2; p * p <= n; ++p) {
      if (n % p == 0) {
        n /= p;
        if (n % p == 0) return 0;
        result = -result;
      }
    }
    if (n > 1) result = -result;
    return result;
  };
  __int128 total = 0;
  for (int64_t e = 1; e <= d; ++e) {
    if (d % e != 0) continue;
    __int128 qe = 1;
    for (int64_t i = 0; i < e; ++i) qe *= q;
    total += mobius(d / e) * qe;
  }
  total /= d;
  return static_cast<int64_t>(total);
}

/// All monic irreducibles of degree d over F, in lexicographic order of
/// (c_{d-1}, ..., c_0) with coefficients compared by canonical index.
inline std::vector<Poly> enumerate_monic_irreducibles(const FieldSpec* F, int64_t d) {
  if (d < 1) throw std::invalid_argument("enumerate_monic_irreducibles: d must be >= 1");
  double space = 1;
  for (int64_t i = 0; i < d; ++i) space *= static_cast<double>(F->q());
  if (space > 5e7)
    throw std::invalid_argument("enumerate_monic_irreducibles: search space too large");
  int64_t total = 1;
  for (int64_t i = 0; i < d; ++i) total *= F->q();
  std::vector<Poly> out;
  for (int64_t counter = 0; counter < total; ++counter) {
    std::vector<Fq> coeffs(static_cast<size_t>(d) + 1, Fq::zero(F));
    coeffs[static_cast<size_t>(d)] = Fq::one(F);
    int64_t c = counter;
    for (int64_t i = d - 1; i >= 0; --i) {
      int64_t place = 1;
      for (int64_t j = 0; j < i; ++j) place *= F->q();
      coeffs[static_cast<size_t>(i)] = Fq::from_index(F, c / place);
      c %= place;
    }
    Poly f = Poly::from_coeffs(F, std::move(coeffs));
    if (f.is_irreducible()) out.push_back(f);
  }
  return out;
}

/// Polynomial with the given enumeration counter: base-q digits of the
/// counter are the coefficient indices, constant term = least significant
/// digit, degrees up to max_deg.  Counter range is [0, q^{max_deg+1}).
inline Poly poly_from_counter(const FieldSpec* F, int64_t counter, int64_t max_deg) {
  std::vector<Fq> coeffs;
  coeffs.reserve(static_cast<size_t>(max_deg) + 1);
  for (int64_t i = 0; i <= max_deg; ++i) {
    coeffs.push_back(Fq::from_index(F, counter % F->q()));
    counter /= F->q();
  }
  return Poly::from_coeffs(F, std::move(coeffs));
}

}  // namespace fqt
