#pragma once

// Finite field arithmetic for F_{p^n}.
//
// A FieldSpec describes F_{p^n} as F_p[x]/(modulus) with a deterministic
// modulus (the lexicographically least monic irreducible of degree n), so
// element encodings are reproducible across runs and machines.  Specs are
// interned and live for the whole process; elements keep a raw pointer to
// their spec and can be shared freely between threads.
//
// Elements are indexed 0..q-1: the index written in base p, least
// significant digit first, gives the coordinates with respect to the power
// basis 1, x, ..., x^{n-1}.  For prime fields the index is just the residue.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace fqt {

namespace detail {

// Dense coefficient vectors over F_p, index = degree, no trailing zeros.
// Only what FieldSpec construction and Fq inversion need; the full-featured
// polynomial layer over F_q lives in poly.hpp.

using FpVec = std::vector<int64_t>;

inline int64_t mod_norm(int64_t a, int64_t p) {
  int64_t r = a % p;
  return r < 0 ? r + p : r;
}

inline void fp_trim(FpVec& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

inline int fp_deg(const FpVec& v) { return static_cast<int>(v.size()) - 1; }

inline FpVec fp_add(const FpVec& a, const FpVec& b, int64_t p) {
  FpVec r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    int64_t s = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
    r[i] = s >= p ? s - p : s;
  }
  fp_trim(r);
  return r;
}

inline FpVec fp_sub(const FpVec& a, const FpVec& b, int64_t p) {
  FpVec r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    int64_t s = (i < a.size() ? a[i] : 0) - (i < b.size() ? b[i] : 0);
    r[i] = s < 0 ? s + p : s;
  }
  fp_trim(r);
  return r;
}

inline FpVec fp_mul(const FpVec& a, const FpVec& b, int64_t p) {
  if (a.empty() || b.empty()) return {};
  FpVec r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  fp_trim(r);
  return r;
}

inline int64_t fp_inv_scalar(int64_t a, int64_t p) {
  int64_t t = 0, nt = 1, r = p, nr = mod_norm(a, p);
  while (nr != 0) {
    int64_t q = r / nr;
    std::swap(t -= q * nt, nt);
    std::swap(r -= q * nr, nr);
  }
  if (r != 1) throw std::domain_error("fp_inv_scalar: not invertible");
  return mod_norm(t, p);
}

// Remainder of a by b; b need not be monic.
inline FpVec fp_rem(FpVec a, const FpVec& b, int64_t p) {
  if (b.empty()) throw std::domain_error("fp_rem: division by zero");
  int64_t lcinv = fp_inv_scalar(b.back(), p);
  while (fp_deg(a) >= fp_deg(b)) {
    int64_t c = a.back() * lcinv % p;
    size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i)
      a[i + shift] = mod_norm(a[i + shift] - c * b[i] % p, p);
    fp_trim(a);
    if (a.empty()) break;
  }
  return a;
}

inline FpVec fp_make_monic(FpVec a, int64_t p) {
  if (a.empty()) return a;
  int64_t inv = fp_inv_scalar(a.back(), p);
  for (auto& c : a) c = c * inv % p;
  return a;
}

inline FpVec fp_gcd(FpVec a, FpVec b, int64_t p) {
  while (!b.empty()) {
    a = fp_rem(std::move(a), b, p);
    std::swap(a, b);
  }
  return fp_make_monic(std::move(a), p);
}

// g = gcd(a, b) monic together with s such that s*a = g (mod b).
inline void fp_half_xgcd(FpVec a, FpVec b, int64_t p, FpVec& g, FpVec& s) {
  FpVec r0 = std::move(a), r1 = std::move(b);
  FpVec s0 = {1}, s1 = {};
  while (!r1.empty()) {
    // r0 = q*r1 + r, tracked on s.
    FpVec q(std::max<size_t>(r0.size(), r1.size()), 0);
    q.clear();
    FpVec rem = r0;
    int64_t lcinv = fp_inv_scalar(r1.back(), p);
    FpVec qv;
    while (fp_deg(rem) >= fp_deg(r1)) {
      int64_t c = rem.back() * lcinv % p;
      size_t d = rem.size() - r1.size();
      if (qv.size() < d + 1) qv.resize(d + 1, 0);
      qv[d] = (qv[d] + c) % p;
      for (size_t i = 0; i < r1.size(); ++i)
        rem[i + d] = mod_norm(rem[i + d] - c * r1[i] % p, p);
      fp_trim(rem);
      if (rem.empty()) break;
    }
    fp_trim(qv);
    FpVec s2 = fp_sub(s0, fp_mul(qv, s1, p), p);
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.empty()) throw std::domain_error("fp_half_xgcd: gcd of zeros");
  int64_t inv = fp_inv_scalar(r0.back(), p);
  for (auto& c : r0) c = c * inv % p;
  for (auto& c : s0) c = c * inv % p;
  g = std::move(r0);
  s = std::move(s0);
}

inline FpVec fp_powmod(FpVec base, uint64_t e, const FpVec& m, int64_t p) {
  FpVec r = {1};
  base = fp_rem(std::move(base), m, p);
  while (e) {
    if (e & 1) r = fp_rem(fp_mul(r, base, p), m, p);
    base = fp_rem(fp_mul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

inline bool fp_is_irreducible(const FpVec& f, int64_t p) {
  int d = fp_deg(f);
  if (d < 1) return false;
  if (d == 1) return true;
  // x^{p^i} mod f via repeated p-th powering.
  FpVec x = {0, 1};
  FpVec g = x;
  std::vector<FpVec> frob;  // frob[i] = x^{p^{i+1}} mod f
  for (int i = 0; i < d; ++i) {
    g = fp_powmod(std::move(g), static_cast<uint64_t>(p), f, p);
    frob.push_back(g);
  }
  if (!fp_sub(frob[d - 1], x, p).empty()) return false;
  for (int r = 2; r <= d; ++r) {
    if (d % r != 0) continue;
    bool prime = true;
    for (int k = 2; k * k <= r; ++k)
      if (r % k == 0) { prime = false; break; }
    if (!prime) continue;
    FpVec diff = fp_sub(frob[d / r - 1], x, p);
    if (fp_gcd(f, diff, p) != FpVec{1}) return false;
  }
  return true;
}

inline bool is_prime_int(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline uint64_t fnv1a(const void* data, size_t len, uint64_t h = 1469598103934665603ull) {
  const unsigned char* b = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= b[i];
    h *= 1099511628211ull;
  }
  return h;
}

struct SplitMix64 {
  uint64_t s;
  explicit SplitMix64(uint64_t seed) : s(seed) {}
  uint64_t next() {
    uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
};

}  // namespace detail

/// Description of F_{p^n}.  Obtain instances through get(); the returned
/// pointer is valid for the lifetime of the process.
class FieldSpec {
 public:
  /// F_p for prime p (p < 2^31 so products fit in 64-bit arithmetic).
  static const FieldSpec* get(int64_t p) { return get(p, 1); }

  /// F_{p^n} with the canonical modulus: the lexicographically least monic
  /// irreducible of degree n, comparing coefficient tuples from the highest
  /// degree down.
  static const FieldSpec* get(int64_t p, int n) {
    return intern(p, n, canonical_modulus(p, n));
  }

  /// F_{p^n} with an explicit monic irreducible modulus, constant term
  /// first.  modulus.size() must be n+1 and modulus.back() must be 1.
  static const FieldSpec* get(int64_t p, int n, const std::vector<int64_t>& modulus) {
    validate_prime(p);
    if (n < 1) throw std::invalid_argument("FieldSpec: n must be >= 1");
    if (static_cast<int>(modulus.size()) != n + 1 || modulus.back() != 1)
      throw std::invalid_argument("FieldSpec: modulus must be monic of degree n");
    std::vector<int64_t> m = modulus;
    for (auto& c : m) c = detail::mod_norm(c, p);
    if (n > 1 && !detail::fp_is_irreducible(m, p))
      throw std::invalid_argument("FieldSpec: modulus is reducible");
    return intern(p, n, m);
  }

  /// Parses "p" or "p^n", e.g. "13" or "3^2".
  static const FieldSpec* parse(const std::string& text) {
    size_t caret = text.find('^');
    try {
      if (caret == std::string::npos) return get(std::stoll(text));
      return get(std::stoll(text.substr(0, caret)),
                 std::stoi(text.substr(caret + 1)));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("FieldSpec: cannot parse '" + text + "'");
    }
  }

  int64_t p() const { return p_; }
  int n() const { return n_; }
  int64_t q() const { return q_; }
  const std::vector<int64_t>& modulus() const { return modulus_; }

  std::string str() const {
    return n_ == 1 ? std::to_string(p_)
                   : std::to_string(p_) + "^" + std::to_string(n_);
  }

  FieldSpec(const FieldSpec&) = delete;
  FieldSpec& operator=(const FieldSpec&) = delete;

 private:
  FieldSpec(int64_t p, int n, std::vector<int64_t> m)
      : p_(p), n_(n), modulus_(std::move(m)) {
    q_ = 1;
    for (int i = 0; i < n_; ++i) {
      if (q_ > (int64_t{1} << 62) / p_)
        throw std::invalid_argument("FieldSpec: q = p^n too large");
      q_ *= p_;
    }
  }

  static void validate_prime(int64_t p) {
    if (p < 2 || p >= (int64_t{1} << 31))
      throw std::invalid_argument("FieldSpec: p out of range");
    if (!detail::is_prime_int(p))
      throw std::invalid_argument("FieldSpec: p is not prime");
  }

  static std::vector<int64_t> canonical_modulus(int64_t p, int n) {
    validate_prime(p);
    if (n < 1) throw std::invalid_argument("FieldSpec: n must be >= 1");
    if (n == 1) return {0, 1};  // x
    // Enumerate monic degree-n polynomials in lexicographic order of
    // (c_{n-1}, ..., c_0) and return the first irreducible one.
    double total_d = 1;
    for (int i = 0; i < n; ++i) total_d *= static_cast<double>(p);
    if (total_d > 1e9)
      throw std::invalid_argument("FieldSpec: modulus search space too large");
    int64_t total = 1;
    for (int i = 0; i < n; ++i) total *= p;
    for (int64_t counter = 0; counter < total; ++counter) {
      std::vector<int64_t> f(n + 1, 0);
      f[n] = 1;
      int64_t c = counter;
      for (int i = n - 1; i >= 0; --i) {  // most significant digit -> c_{n-1}
        int64_t place = ipow(p, i);
        f[i] = c / place;
        c %= place;
      }
      if (detail::fp_is_irreducible(f, p)) return f;
    }
    throw std::logic_error("FieldSpec: no irreducible modulus found");
  }

  static int64_t ipow(int64_t b, int e) {
    int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
  }

  static const FieldSpec* intern(int64_t p, int n, const std::vector<int64_t>& m) {
    using Key = std::tuple<int64_t, int, std::vector<int64_t>>;
    static std::mutex mu;
    static std::map<Key, std::unique_ptr<FieldSpec>>* table =
        new std::map<Key, std::unique_ptr<FieldSpec>>;
    std::lock_guard<std::mutex> lock(mu);
    Key key{p, n, m};
    auto it = table->find(key);
    if (it == table->end()) {
      it = table->emplace(key, std::unique_ptr<FieldSpec>(new FieldSpec(p, n, m)))
               .first;
    }
    return it->second.get();
  }

  int64_t p_;
  int n_;
  int64_t q_;
  std::vector<int64_t> modulus_;
};

/// Element of F_{p^n}.  Immutable value type; all operations return new
/// elements.  Mixing elements of different fields throws.
class Fq {
 public:
  Fq() : F_(nullptr), a0_(0) {}

  static Fq zero(const FieldSpec* F) { return Fq(F); }
  static Fq one(const FieldSpec* F) { return from_index(F, 1); }

  /// Element with canonical index ((k mod q) + q) mod q.
  static Fq from_index(const FieldSpec* F, int64_t k) {
    check_field(F);
    k %= F->q();
    if (k < 0) k += F->q();
    Fq e(F);
    if (F->n() == 1) {
      e.a0_ = k;
    } else {
      e.a0_ = k % F->p();
      k /= F->p();
      e.hi_.assign(F->n() - 1, 0);
      for (int i = 0; i < F->n() - 1; ++i) {
        e.hi_[i] = k % F->p();
        k /= F->p();
      }
    }
    return e;
  }

  /// Element with the given power-basis coordinates, constant first.
  static Fq from_coords(const FieldSpec* F, const std::vector<int64_t>& coords) {
    check_field(F);
    if (static_cast<int>(coords.size()) != F->n())
      throw std::invalid_argument("Fq: wrong coordinate count");
    Fq e(F);
    e.a0_ = detail::mod_norm(coords[0], F->p());
    if (F->n() > 1) {
      e.hi_.resize(F->n() - 1);
      for (int i = 1; i < F->n(); ++i)
        e.hi_[i - 1] = detail::mod_norm(coords[i], F->p());
    }
    return e;
  }

  const FieldSpec* field() const { return F_; }

  int64_t index() const {
    int64_t k = 0;
    for (int i = static_cast<int>(hi_.size()) - 1; i >= 0; --i)
      k = k * F_->p() + hi_[i];
    return k * (hi_.empty() ? 1 : F_->p()) + a0_;
  }

  std::vector<int64_t> coords() const {
    std::vector<int64_t> c{a0_};
    c.insert(c.end(), hi_.begin(), hi_.end());
    c.resize(F_->n(), 0);
    return c;
  }

  bool is_zero() const {
    if (a0_ != 0) return false;
    for (int64_t c : hi_)
      if (c != 0) return false;
    return true;
  }

  bool is_one() const { return index() == 1; }

  friend Fq operator+(const Fq& a, const Fq& b) {
    a.check_same(b);
    if (a.F_->n() == 1) {
      int64_t s = a.a0_ + b.a0_;
      return Fq(a.F_, s >= a.F_->p() ? s - a.F_->p() : s);
    }
    Fq r(a.F_);
    r.hi_.resize(a.F_->n() - 1);
    int64_t p = a.F_->p();
    int64_t s = a.a0_ + b.a0_;
    r.a0_ = s >= p ? s - p : s;
    for (size_t i = 0; i < r.hi_.size(); ++i) {
      s = a.hi_[i] + b.hi_[i];
      r.hi_[i] = s >= p ? s - p : s;
    }
    return r;
  }

  friend Fq operator-(const Fq& a, const Fq& b) {
    a.check_same(b);
    if (a.F_->n() == 1) {
      int64_t s = a.a0_ - b.a0_;
      return Fq(a.F_, s < 0 ? s + a.F_->p() : s);
    }
    Fq r(a.F_);
    r.hi_.resize(a.F_->n() - 1);
    int64_t p = a.F_->p();
    int64_t s = a.a0_ - b.a0_;
    r.a0_ = s < 0 ? s + p : s;
    for (size_t i = 0; i < r.hi_.size(); ++i) {
      s = a.hi_[i] - b.hi_[i];
      r.hi_[i] = s < 0 ? s + p : s;
    }
    return r;
  }

  Fq operator-() const {
    check_field(F_);
    return zero(F_) - *this;
  }

  friend Fq operator*(const Fq& a, const Fq& b) {
    a.check_same(b);
    if (a.F_->n() == 1) return Fq(a.F_, a.a0_ * b.a0_ % a.F_->p());
    detail::FpVec prod =
        detail::fp_mul(a.vec(), b.vec(), a.F_->p());
    prod = detail::fp_rem(std::move(prod), a.F_->modulus(), a.F_->p());
    return from_vec(a.F_, prod);
  }

  Fq inv() const {
    check_field(F_);
    if (is_zero()) throw std::domain_error("Fq: inverse of zero");
    if (F_->n() == 1) return Fq(F_, detail::fp_inv_scalar(a0_, F_->p()));
    detail::FpVec g, s;
    detail::fp_half_xgcd(vec(), F_->modulus(), F_->p(), g, s);
    if (g != detail::FpVec{1}) throw std::logic_error("Fq: modulus not irreducible");
    s = detail::fp_rem(std::move(s), F_->modulus(), F_->p());
    return from_vec(F_, s);
  }

  friend Fq operator/(const Fq& a, const Fq& b) { return a * b.inv(); }

  /// a^e for any integer e (negative exponents invert first).
  Fq pow(int64_t e) const {
    check_field(F_);
    if (e < 0) return inv().pow(-e);
    Fq base = *this, r = one(F_);
    uint64_t u = static_cast<uint64_t>(e);
    while (u) {
      if (u & 1) r = r * base;
      base = base * base;
      u >>= 1;
    }
    return r;
  }

  /// The Frobenius image a^p.
  Fq frobenius() const {
    if (F_->n() == 1) return *this;
    return pow(F_->p());
  }

  /// The unique p-th root (inverse Frobenius), a^{p^{n-1}}.
  Fq pth_root() const {
    if (F_->n() == 1) return *this;
    Fq r = *this;
    for (int i = 0; i < F_->n() - 1; ++i) r = r.frobenius();
    return r;
  }

  /// True iff the element is a square in F_q (0 counts as a square).
  bool is_square() const {
    check_field(F_);
    if (is_zero()) return true;
    if (F_->q() % 2 == 0) return true;  // squaring is bijective in char 2
    return pow((F_->q() - 1) / 2).is_one();
  }

  /// A square root if one exists; deterministic choice (least index).
  std::optional<Fq> sqrt() const {
    check_field(F_);
    if (is_zero()) return zero(F_);
    // Squaring is the 2-power Frobenius in char 2, so x^{q/2} inverts it.
    if (F_->q() % 2 == 0) return pow(F_->q() / 2);
    if (!is_square()) return std::nullopt;
    // Desk-scale fields: scan by index so the choice is canonical.
    for (int64_t k = 0; k < F_->q(); ++k) {
      Fq c = from_index(F_, k);
      if (c * c == *this) return c;
    }
    throw std::logic_error("Fq::sqrt: no root found for a square");
  }

  friend bool operator==(const Fq& a, const Fq& b) {
    a.check_same(b);
    return a.a0_ == b.a0_ && a.hi_ == b.hi_;
  }
  friend bool operator!=(const Fq& a, const Fq& b) { return !(a == b); }
  friend bool operator<(const Fq& a, const Fq& b) {
    a.check_same(b);
    return a.index() < b.index();
  }

  std::string str() const { return std::to_string(index()); }

 private:
  explicit Fq(const FieldSpec* F) : F_(F), a0_(0) {
    if (F && F->n() > 1) hi_.assign(F->n() - 1, 0);
  }
  Fq(const FieldSpec* F, int64_t a0) : F_(F), a0_(a0) {}

  static void check_field(const FieldSpec* F) {
    if (!F) throw std::logic_error("Fq: null field");
  }
  void check_same(const Fq& o) const {
    check_field(F_);
    check_field(o.F_);
    if (F_ != o.F_) throw std::invalid_argument("Fq: mixed fields");
  }

  detail::FpVec vec() const {
    detail::FpVec v{a0_};
    v.insert(v.end(), hi_.begin(), hi_.end());
    detail::fp_trim(v);
    return v;
  }

  static Fq from_vec(const FieldSpec* F, const detail::FpVec& v) {
    Fq e(F);
    e.a0_ = v.empty() ? 0 : v[0];
    if (F->n() > 1) {
      e.hi_.assign(F->n() - 1, 0);
      for (size_t i = 1; i < v.size(); ++i) e.hi_[i - 1] = v[i];
    }
    return e;
  }

  const FieldSpec* F_;
  int64_t a0_;
  std::vector<int64_t> hi_;
};

/// The least element of F_q that is not a square, scanning indices in
/// ascending order.  Throws for even q, where every element is a square.
inline Fq nonsquare_constant(const FieldSpec* F) {
  if (F->q() % 2 == 0)
    throw std::domain_error("nonsquare_constant: every element of an even field is a square");
  for (int64_t k = 0; k < F->q(); ++k) {
    Fq c = Fq::from_index(F, k);
    if (!c.is_square()) return c;
  }
  throw std::logic_error("nonsquare_constant: field has no nonsquare");
}

/// An element of multiplicative order exactly l (l prime, l | q-1),
/// deterministic: least such index.
inline Fq root_of_unity(const FieldSpec* F, int64_t l) {
  if (l < 2 || (F->q() - 1) % l != 0)
    throw std::domain_error("root_of_unity: l does not divide q-1");
  for (int64_t k = 2; k < F->q(); ++k) {
    Fq c = Fq::from_index(F, k);
    if (!c.is_zero() && !c.is_one() && c.pow(l).is_one()) return c;
  }
  throw std::logic_error("root_of_unity: not found");
}

}  // namespace fqt
