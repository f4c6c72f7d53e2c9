#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>

#include "fqt/poly.hpp"

using namespace fqt;

namespace {

Poly P(const FieldSpec* F, const std::string& s) { return Poly::parse(F, s); }

Poly random_poly(const FieldSpec* F, int64_t max_deg, std::mt19937_64& rng) {
  std::uniform_int_distribution<int64_t> ddeg(0, max_deg);
  std::uniform_int_distribution<int64_t> dcoef(0, F->q() - 1);
  int64_t d = ddeg(rng);
  std::vector<Fq> c;
  for (int64_t i = 0; i <= d; ++i) c.push_back(Fq::from_index(F, dcoef(rng)));
  return Poly::from_coeffs(F, std::move(c));
}

// Oracle: factor by trial division against the enumerated irreducibles of
// degree <= deg(f)/1, smallest degree first.
const std::vector<Poly>& irreducibles_cached(const FieldSpec* F, int64_t d) {
  static std::map<std::pair<const FieldSpec*, int64_t>, std::vector<Poly>> cache;
  auto key = std::make_pair(F, d);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, enumerate_monic_irreducibles(F, d)).first;
  return it->second;
}

// Oracle for inputs of degree at most 8: after all factors of degree <= 4 are
// divided out, any nonconstant leftover has factors of degree >= 5 only, and
// 8 < 5 + 5 forces it to be a single irreducible.
Poly::Factorization trial_division_factor(Poly f) {
  REQUIRE(f.degree() <= 8);
  Poly::Factorization out;
  out.unit = f.lc();
  f = f.monic();
  for (int64_t d = 1; !f.is_constant() && d <= std::min<int64_t>(4, f.degree()); ++d) {
    for (const Poly& irr : irreducibles_cached(f.field(), d)) {
      int64_t mult = 0;
      while (!f.is_constant()) {
        auto [q, r] = divmod(f, irr);
        if (!r.is_zero()) break;
        f = q;
        ++mult;
      }
      if (mult > 0) out.factors.emplace_back(irr, mult);
      if (f.is_constant()) break;
    }
  }
  if (!f.is_constant()) out.factors.emplace_back(f, 1);
  std::sort(out.factors.begin(), out.factors.end(),
            [](const auto& a, const auto& b) { return Poly::poly_less(a.first, b.first); });
  return out;
}

bool same_factorization(const Poly::Factorization& a, const Poly::Factorization& b) {
  if (a.unit != b.unit || a.factors.size() != b.factors.size()) return false;
  for (size_t i = 0; i < a.factors.size(); ++i)
    if (a.factors[i].first != b.factors[i].first ||
        a.factors[i].second != b.factors[i].second)
      return false;
  return true;
}

}  // namespace

TEST_CASE("parse and print round trips") {
  const FieldSpec* F3 = FieldSpec::get(3);
  CHECK(P(F3, "t^6+2").str() == "t^6+2");
  CHECK(P(F3, "2t^2+2t+1").str() == "2t^2+2t+1");
  CHECK(P(F3, "2*t^2 + 2*t + 1").str() == "2t^2+2t+1");
  CHECK(P(F3, "t-1").str() == "t+2");
  CHECK(P(F3, "-t").str() == "2t");
  CHECK(P(F3, "0").is_zero());
  CHECK(P(F3, "X^2+1").str('X') == "X^2+1");
  CHECK(P(F3, "5").str() == "2");
  CHECK_THROWS_AS(P(F3, ""), std::invalid_argument);
  CHECK_THROWS_AS(P(F3, "t^"), std::invalid_argument);
  CHECK_THROWS_AS(P(F3, "t+"), std::invalid_argument);
  CHECK_THROWS_AS(P(F3, "y+1"), std::invalid_argument);
  CHECK_THROWS_AS(P(F3, "t 2"), std::invalid_argument);
}

TEST_CASE("degree and leading coefficient of zero are errors") {
  const FieldSpec* F = FieldSpec::get(5);
  Poly z = Poly::zero(F);
  CHECK(z.is_zero());
  CHECK_THROWS_AS(z.degree(), std::domain_error);
  CHECK_THROWS_AS(z.lc(), std::domain_error);
  CHECK(Poly::one(F).degree() == 0);
  CHECK(Poly::t(F).degree() == 1);
}

TEST_CASE("arithmetic worked examples over F_3") {
  const FieldSpec* F = FieldSpec::get(3);
  // (t+1)^3 = t^3+1 in characteristic 3.
  CHECK(P(F, "t+1").pow(3) == P(F, "t^3+1"));
  // t^3+1 = (t+1)(t^2+2t+1), remainder 0.
  auto [q, r] = divmod(P(F, "t^3+1"), P(F, "t+1"));
  CHECK(q == P(F, "t^2+2t+1"));
  CHECK(r.is_zero());
  // gcd(t^2+2t+1, t+1) = t+1 since t^2+2t+1 = (t+1)^2.
  CHECK(gcd(P(F, "t^2+2t+1"), P(F, "t+1")) == P(F, "t+1"));
  CHECK_THROWS_AS(divmod(P(F, "t"), Poly::zero(F)), std::domain_error);
}

TEST_CASE("division and Bezout identities on random inputs") {
  std::mt19937_64 rng(20260822);
  for (const FieldSpec* F : {FieldSpec::get(3), FieldSpec::get(5), FieldSpec::get(2, 2)}) {
    for (int iter = 0; iter < 120; ++iter) {
      Poly a = random_poly(F, 7, rng);
      Poly b = random_poly(F, 5, rng);
      if (!b.is_zero()) {
        auto [q, r] = divmod(a, b);
        CHECK(q * b + r == a);
        CHECK((r.is_zero() || r.degree() < b.degree()));
      }
      if (a.is_zero() && b.is_zero()) continue;
      Poly g, s, t;
      xgcd(a, b, g, s, t);
      CHECK(s * a + t * b == g);
      CHECK(g == gcd(a, b));
      if (!a.is_zero()) CHECK((a % g).is_zero());
      if (!b.is_zero()) CHECK((b % g).is_zero());
    }
  }
}

TEST_CASE("derivative respects characteristic") {
  const FieldSpec* F = FieldSpec::get(3);
  CHECK(P(F, "t^3+t+1").derivative() == Poly::one(F));  // 3t^2 vanishes
  CHECK(P(F, "t^6+2").derivative().is_zero());
  CHECK(P(F, "t^2+t").derivative() == P(F, "2t+1"));
}

TEST_CASE("p-th roots") {
  const FieldSpec* F = FieldSpec::get(3);
  auto r = P(F, "t^3+1").pth_root();
  REQUIRE(r.has_value());
  CHECK(*r == P(F, "t+1"));
  CHECK(!P(F, "t^2+1").pth_root().has_value());
  CHECK(P(F, "t^6+2").pth_root().value() == P(F, "t^2+2"));
  // Coefficient roots go through the inverse Frobenius in extensions.
  const FieldSpec* F9 = FieldSpec::get(3, 2);
  Fq a = Fq::from_index(F9, 3);
  Poly f = (Poly::t(F9) + Poly::constant(a)).pow(3);
  auto root = f.pth_root();
  REQUIRE(root.has_value());
  CHECK(*root == Poly::t(F9) + Poly::constant(a));
}

TEST_CASE("squarefree decomposition handles p-th powers") {
  const FieldSpec* F = FieldSpec::get(3);
  // t^6+2 = ((t+1)(t+2))^3 and t^2+2 = (t+1)(t+2).
  auto sf = P(F, "t^6+2").squarefree_decomposition();
  REQUIRE(sf.size() == 1);
  CHECK(sf[0].first == P(F, "t^2+2"));
  CHECK(sf[0].second == 3);
  // t^2(t+1)^3 -> [(t+1), 3], [(t), 2]... sorted by (degree, lex): t before t+1.
  Poly f = Poly::t(F).pow(2) * P(F, "t+1").pow(3);
  sf = f.squarefree_decomposition();
  REQUIRE(sf.size() == 2);
  CHECK(sf[0].first == P(F, "t"));
  CHECK(sf[0].second == 2);
  CHECK(sf[1].first == P(F, "t+1"));
  CHECK(sf[1].second == 3);
  // Squarefree input comes back whole.
  sf = P(F, "t^2+1").squarefree_decomposition();
  REQUIRE(sf.size() == 1);
  CHECK(sf[0].first == P(F, "t^2+1"));
  CHECK(sf[0].second == 1);
}

TEST_CASE("squarefree decomposition reassembles on random inputs") {
  std::mt19937_64 rng(77001);
  for (const FieldSpec* F : {FieldSpec::get(3), FieldSpec::get(5)}) {
    for (int iter = 0; iter < 60; ++iter) {
      Poly f = random_poly(F, 3, rng);
      if (f.is_zero()) continue;
      Poly g = random_poly(F, 2, rng);
      if (!g.is_zero()) f = f * g.pow(3);
      Poly prod = Poly::constant(f.lc());
      for (const auto& [part, mult] : f.squarefree_decomposition()) {
        prod = prod * part.pow(mult);
        // Parts are squarefree: gcd with the derivative is 1.
        CHECK(gcd(part, part.derivative()) == Poly::one(F));
      }
      CHECK(prod == f);
    }
  }
}

TEST_CASE("irreducibility worked examples") {
  const FieldSpec* F3 = FieldSpec::get(3);
  const FieldSpec* F5 = FieldSpec::get(5);
  const FieldSpec* F2 = FieldSpec::get(2);
  CHECK(P(F3, "t^2+1").is_irreducible());
  CHECK(!P(F5, "t^2+1").is_irreducible());  // (t+2)(t+3) over F_5
  CHECK(P(F3, "t").is_irreducible());
  CHECK(P(F2, "t^3+t+1").is_irreducible());
  CHECK(!P(F3, "t^4+1").is_irreducible());  // (t^2+t+2)(t^2+2t+2)
  CHECK(!P(F3, "t^2+2t+1").is_irreducible());
  CHECK(!Poly::one(F3).is_irreducible());
  CHECK(!Poly::zero(F3).is_irreducible());
  CHECK(!P(F3, "2").is_irreducible());
}

TEST_CASE("factorization worked examples") {
  const FieldSpec* F = FieldSpec::get(3);
  auto fac = P(F, "t^6+2").factor();
  CHECK(fac.unit.is_one());
  REQUIRE(fac.factors.size() == 2);
  CHECK(fac.factors[0].first == P(F, "t+1"));
  CHECK(fac.factors[0].second == 3);
  CHECK(fac.factors[1].first == P(F, "t+2"));
  CHECK(fac.factors[1].second == 3);

  fac = P(F, "2t^2+2").factor();
  CHECK(fac.unit.index() == 2);
  REQUIRE(fac.factors.size() == 1);
  CHECK(fac.factors[0].first == P(F, "t^2+1"));
  CHECK(fac.factors[0].second == 1);

  fac = P(F, "2").factor();
  CHECK(fac.unit.index() == 2);
  CHECK(fac.factors.empty());

  CHECK_THROWS_AS(Poly::zero(F).factor(), std::domain_error);
}

TEST_CASE("factor matches trial division on random inputs") {
  std::mt19937_64 rng(555123);
  for (const FieldSpec* F :
       {FieldSpec::get(3), FieldSpec::get(5), FieldSpec::get(7), FieldSpec::get(2)}) {
    for (int iter = 0; iter < 40; ++iter) {
      Poly f = random_poly(F, 8, rng);
      if (f.is_zero() || f.is_constant()) continue;
      auto mine = f.factor();
      auto oracle = trial_division_factor(f);
      CHECK(same_factorization(mine, oracle));
      // Reassembly.
      Poly prod = Poly::constant(mine.unit);
      for (const auto& [irr, mult] : mine.factors) {
        CHECK(irr.is_irreducible());
        CHECK(irr.is_monic());
        prod = prod * irr.pow(mult);
      }
      CHECK(prod == f);
    }
  }
}

TEST_CASE("factor is deterministic") {
  const FieldSpec* F = FieldSpec::get(5);
  std::mt19937_64 rng(424242);
  for (int iter = 0; iter < 10; ++iter) {
    Poly f = random_poly(F, 12, rng);
    if (f.is_zero() || f.is_constant()) continue;
    auto a = f.factor();
    auto b = f.factor();
    CHECK(same_factorization(a, b));
  }
}

TEST_CASE("frobenius power of a polynomial maps coefficients and t") {
  // f^p = sum c_i^p t^{ip}: check over a genuine extension field.
  const FieldSpec* F9 = FieldSpec::get(3, 2);
  std::mt19937_64 rng(9099);
  for (int iter = 0; iter < 30; ++iter) {
    Poly f = random_poly(F9, 5, rng);
    Poly lhs = f.pow(3);
    Poly rhs = Poly::zero(F9);
    for (size_t i = 0; i < f.coeffs().size(); ++i)
      rhs = rhs + Poly::monomial(F9, static_cast<int64_t>(3 * i), f.coeffs()[i].frobenius());
    CHECK(lhs == rhs);
  }
}

TEST_CASE("enumerate_monic_irreducibles order and counts") {
  const FieldSpec* F3 = FieldSpec::get(3);
  auto deg1 = enumerate_monic_irreducibles(F3, 1);
  REQUIRE(deg1.size() == 3);
  CHECK(deg1[0] == P(F3, "t"));
  CHECK(deg1[1] == P(F3, "t+1"));
  CHECK(deg1[2] == P(F3, "t+2"));

  auto deg2 = enumerate_monic_irreducibles(F3, 2);
  REQUIRE(deg2.size() == 3);
  CHECK(deg2[0] == P(F3, "t^2+1"));
  CHECK(deg2[1] == P(F3, "t^2+t+2"));
  CHECK(deg2[2] == P(F3, "t^2+2t+2"));

  const FieldSpec* F2 = FieldSpec::get(2);
  auto deg3 = enumerate_monic_irreducibles(F2, 3);
  REQUIRE(deg3.size() == 2);
  CHECK(deg3[0] == P(F2, "t^3+t+1"));
  CHECK(deg3[1] == P(F2, "t^3+t^2+1"));

  // Necklace counts match the enumeration for q in {2,3,5}, d <= 6.
  for (const FieldSpec* F : {FieldSpec::get(2), FieldSpec::get(3), FieldSpec::get(5)}) {
    for (int64_t d = 1; d <= 6; ++d) {
      auto all = enumerate_monic_irreducibles(F, d);
      CHECK(static_cast<int64_t>(all.size()) == count_monic_irreducibles(F->q(), d));
      for (const Poly& f : all) CHECK(f.is_irreducible());
    }
  }
  // Spot values of the counting formula: (q^2-q)/2 and (q^3-q)/3.
  CHECK(count_monic_irreducibles(3, 2) == 3);
  CHECK(count_monic_irreducibles(3, 3) == 8);
  CHECK(count_monic_irreducibles(2, 6) == 9);
  CHECK(count_monic_irreducibles(13, 1) == 13);
}

TEST_CASE("poly_from_counter enumerates by base-q digits") {
  const FieldSpec* F = FieldSpec::get(3);
  CHECK(poly_from_counter(F, 0, 2).is_zero());
  CHECK(poly_from_counter(F, 1, 2) == Poly::one(F));
  CHECK(poly_from_counter(F, 3, 2) == Poly::t(F));
  CHECK(poly_from_counter(F, 5, 2) == P(F, "t+2"));
  CHECK(poly_from_counter(F, 9, 2) == P(F, "t^2"));
}
