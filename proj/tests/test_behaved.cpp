#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fqt/behaved.hpp"

using namespace fqt;

namespace {

RationalFunction RF(const FieldSpec* F, const std::string& s) {
  return RationalFunction::parse(F, s);
}

Poly P(const FieldSpec* F, const std::string& s) { return Poly::parse(F, s); }

Poly random_nonzero_poly(const FieldSpec* F, int64_t max_deg, std::mt19937_64& rng) {
  while (true) {
    std::vector<Fq> c;
    int64_t d = static_cast<int64_t>(rng() % static_cast<uint64_t>(max_deg + 1));
    for (int64_t i = 0; i <= d; ++i)
      c.push_back(Fq::from_index(F, static_cast<int64_t>(rng() % static_cast<uint64_t>(F->q()))));
    Poly f = Poly::from_coeffs(F, std::move(c));
    if (!f.is_zero()) return f;
  }
}

RationalFunction random_nonzero_rf(const FieldSpec* F, int64_t max_deg, std::mt19937_64& rng) {
  return RationalFunction(random_nonzero_poly(F, max_deg, rng),
                          random_nonzero_poly(F, max_deg, rng));
}

RationalFunction random_nonconstant_rf(const FieldSpec* F, int64_t max_deg,
                                       std::mt19937_64& rng) {
  while (true) {
    RationalFunction u = random_nonzero_rf(F, max_deg, rng);
    if (!u.is_constant()) return u;
  }
}

}  // namespace

TEST_CASE("t is 2-behaved over every small odd prime field") {
  for (int64_t p : {3, 5, 7, 11, 13}) {
    const FieldSpec* F = FieldSpec::get(p);
    BehavedReport rep = is_l_behaved(RationalFunction::t(F), 2);
    REQUIRE(rep.is_behaved);
    REQUIRE(rep.witnesses.size() == 1);
    CHECK(rep.witnesses[0].place == Place::finite(P(F, "t")));
    CHECK(rep.witnesses[0].k == 1);
    CHECK(rep.excluded.empty());
  }
}

TEST_CASE("behavedness worked examples and exclusion reasons") {
  const FieldSpec* F3 = FieldSpec::get(3);

  // t^2: only zero place (t) with v = 2, excluded by multiplicity.
  BehavedReport r1 = is_l_behaved(RF(F3, "t^2"), 2);
  CHECK_FALSE(r1.is_behaved);
  REQUIRE(r1.excluded.size() == 1);
  CHECK(r1.excluded[0].v == 2);
  CHECK(r1.excluded[0].reason == ExcludedReason::mult_div_l);

  // t^4+t^2 = t^2(t^2+1): (t) excluded by multiplicity, (t^2+1) by degree.
  BehavedReport r2 = is_l_behaved(RF(F3, "t^4+t^2"), 2);
  CHECK_FALSE(r2.is_behaved);
  REQUIRE(r2.excluded.size() == 2);
  CHECK(r2.excluded[0].place == Place::finite(P(F3, "t")));
  CHECK(r2.excluded[0].reason == ExcludedReason::mult_div_l);
  CHECK(r2.excluded[1].place == Place::finite(P(F3, "t^2+1")));
  CHECK(r2.excluded[1].v == 1);
  CHECK(r2.excluded[1].reason == ExcludedReason::degree_div_l);

  // t^4+2t^2+1 = (t^2+1)^2 fails both conditions at its only zero place;
  // the multiplicity reason takes priority.
  BehavedReport r3 = is_l_behaved(RF(F3, "t^4+2t^2+1"), 2);
  CHECK_FALSE(r3.is_behaved);
  REQUIRE(r3.excluded.size() == 1);
  CHECK(r3.excluded[0].v == 2);
  CHECK(r3.excluded[0].reason == ExcludedReason::mult_div_l);

  // Constants, including zero, are never behaved and never throw.
  CHECK_FALSE(is_l_behaved(RF(F3, "2"), 2).is_behaved);
  CHECK_FALSE(is_l_behaved(RationalFunction::zero(F3), 2).is_behaved);

  // The infinite place can be the witness: 1/t vanishes only at INF.
  BehavedReport r4 = is_l_behaved(RF(F3, "1/t"), 2);
  REQUIRE(r4.is_behaved);
  CHECK(r4.witnesses[0].place == Place::infinity(F3));
  CHECK(r4.witnesses[0].k == 1);

  // l must be prime.
  CHECK_THROWS_AS(is_l_behaved(RF(F3, "t"), 4), std::invalid_argument);
  CHECK_THROWS_AS(is_l_behaved(RF(F3, "t"), 1), std::invalid_argument);

  // l = p is permitted.
  CHECK(is_l_behaved(RF(F3, "t"), 3).is_behaved);
  CHECK_FALSE(is_l_behaved(RF(F3, "t^3"), 3).is_behaved);
}

TEST_CASE("witnesses and exclusions cover the zero divisor support") {
  std::mt19937_64 rng(60601);
  for (int64_t p : {3, 5}) {
    const FieldSpec* F = FieldSpec::get(p);
    for (int iter = 0; iter < 50; ++iter) {
      RationalFunction u = random_nonconstant_rf(F, 4, rng);
      for (int64_t l : {2, 3}) {
        BehavedReport rep = is_l_behaved(u, l);
        Divisor covered;
        for (const auto& w : rep.witnesses) covered.add(w.place, w.k);
        for (const auto& e : rep.excluded) covered.add(e.place, e.v);
        CHECK(covered == zero_divisor(u));
      }
    }
  }
}

TEST_CASE("behaved_factor worked examples") {
  const FieldSpec* F3 = FieldSpec::get(3);
  const FieldSpec* F5 = FieldSpec::get(5);

  Divisor d1 = behaved_factor(RF(F3, "t"), 2);
  CHECK(d1.size() == 1);
  CHECK(d1.mult(Place::finite(P(F3, "t"))) == 1);

  Divisor d2 = behaved_factor(RF(F5, "t^3"), 2);
  CHECK(d2.size() == 1);
  CHECK(d2.mult(Place::finite(P(F5, "t"))) == 3);

  CHECK(behaved_factor(RF(F3, "t^4+t^2"), 2).empty());
  CHECK(behaved_factor(RF(F3, "2"), 2).empty());
}

TEST_CASE("ord_rounded truncates toward zero") {
  const FieldSpec* F3 = FieldSpec::get(3);
  Place pt = Place::finite(P(F3, "t"));

  CHECK(ord_rounded(RF(F3, "t^5"), pt, 2) == 2);
  CHECK(ord_rounded(RF(F3, "1/t^5"), pt, 2) == -2);
  CHECK(ord_rounded(RF(F3, "t+1"), pt, 2) == 0);
  CHECK(ord_rounded(RF(F3, "1/t"), pt, 2) == 0);
  CHECK(ord_rounded(RF(F3, "t"), pt, 2) == 0);
  CHECK(ord_rounded(RF(F3, "1/t^4"), pt, 3) == -1);
  CHECK(ord_rounded(RF(F3, "t^4"), pt, 3) == 1);

  CHECK_THROWS_AS(ord_rounded(RationalFunction::zero(F3), pt, 2), std::domain_error);
  CHECK_THROWS_AS(ord_rounded(RF(F3, "t"), pt, 0), std::invalid_argument);
}

TEST_CASE("ints membership") {
  const FieldSpec* F3 = FieldSpec::get(3);
  RationalFunction t = RationalFunction::t(F3);

  for (int64_t k = 0; k <= 4; ++k) CHECK(ints_member(t.pow(k), t, 2));
  CHECK_FALSE(ints_member(t.reciprocal(), t, 2));
  CHECK(ints_member(RF(F3, "1/(t+1)"), t, 2));
  CHECK(ints_member(RationalFunction::zero(F3), t, 2));

  // u = t^3(t+1): witnesses (t) with k = 3 and (t+1) with k = 1.
  RationalFunction u = RF(F3, "t^4+t^3");
  CHECK(ints_member(RF(F3, "1/t^2"), u, 2));       // rounded order 0 at (t)
  CHECK_FALSE(ints_member(RF(F3, "1/t^3"), u, 2));  // rounded order -1
  CHECK_FALSE(ints_member(RF(F3, "1/(t+1)"), u, 2));

  CHECK_THROWS_AS(ints_member(t, RF(F3, "t^2"), 2), std::domain_error);
}

TEST_CASE("ord_at_zb worked examples") {
  const FieldSpec* F3 = FieldSpec::get(3);
  RationalFunction t = RationalFunction::t(F3);

  CHECK(ord_at_zb(t.pow(3), t, 2) == 3);
  CHECK(ord_at_zb(RF(F3, "t^3+t^2"), t, 2) == 2);  // t^2(t+1)
  CHECK(ord_at_zb(RF(F3, "t+1"), t, 2) == 0);
  CHECK(ord_at_zb(RF(F3, "1/t^4"), t, 2) == -4);

  // u = t^3: the interval at (t) with k = 3 has width 2, so w = t admits both
  // s = 0 and s = 1 -> undefined.
  CHECK_FALSE(ord_at_zb(t, RF(F3, "t^3"), 2).has_value());
  CHECK(ord_at_zb(RF(F3, "t^3"), RF(F3, "t^3"), 2) == 1);

  // u = t(t+1)... witnesses at (t) and (t+1) disagree for w = t/(t+1).
  RationalFunction u = RF(F3, "t^2+t");
  CHECK_FALSE(ord_at_zb(RF(F3, "t/(t+1)"), u, 2).has_value());
  CHECK(ord_at_zb(u.pow(2), u, 2) == 2);

  CHECK_THROWS_AS(ord_at_zb(RationalFunction::zero(F3), t, 2), std::domain_error);
  CHECK_THROWS_AS(ord_at_zb(t, RF(F3, "t^2"), 2), std::domain_error);
}

TEST_CASE("ord_at_zb agrees with the two-sided ints condition") {
  std::mt19937_64 rng(112358);
  const FieldSpec* F = FieldSpec::get(3);
  std::vector<RationalFunction> us = {RF(F, "t"), RF(F, "t^4+t^3"), RF(F, "t^2+t"),
                                      RF(F, "1/t")};
  for (const RationalFunction& u : us) {
    BehavedReport rep = is_l_behaved(u, 2);
    REQUIRE(rep.is_behaved);
    for (int iter = 0; iter < 30; ++iter) {
      RationalFunction w = random_nonzero_rf(F, 4, rng);
      auto s = ord_at_zb(w, u, 2);
      if (s) {
        CHECK(ints_member(w / u.pow(*s), rep.witnesses));
        CHECK(ints_member(u.pow(*s) / w, rep.witnesses));
        // Uniqueness: the neighbors fail one side.
        bool up = ints_member(w / u.pow(*s + 1), rep.witnesses) &&
                  ints_member(u.pow(*s + 1) / w, rep.witnesses);
        bool down = ints_member(w / u.pow(*s - 1), rep.witnesses) &&
                    ints_member(u.pow(*s - 1) / w, rep.witnesses);
        CHECK_FALSE(up);
        CHECK_FALSE(down);
      }
    }
  }
}

TEST_CASE("ord_at_zb is additive where defined") {
  std::mt19937_64 rng(271828);
  const FieldSpec* F = FieldSpec::get(5);
  RationalFunction u = RF(F, "t");
  for (int iter = 0; iter < 60; ++iter) {
    RationalFunction w1 = random_nonzero_rf(F, 3, rng);
    RationalFunction w2 = random_nonzero_rf(F, 3, rng);
    auto s1 = ord_at_zb(w1, u, 2);
    auto s2 = ord_at_zb(w2, u, 2);
    auto s12 = ord_at_zb(w1 * w2, u, 2);
    if (s1 && s2 && s12) CHECK(*s12 == *s1 + *s2);
  }
}

TEST_CASE("h_w worked examples") {
  const FieldSpec* F3 = FieldSpec::get(3);
  const FieldSpec* F5 = FieldSpec::get(5);

  RationalFunction t3 = RationalFunction::t(F3);
  CHECK(compute_h_w(RationalFunction::zero(F3), t3, 2) == RF(F3, "1/t^2"));
  CHECK(compute_h_w(t3, t3, 2) == RF(F3, "(t^3+1)/t^2"));
  CHECK(compute_h_w(RationalFunction::one(F5), RationalFunction::t(F5), 2) ==
        RF(F5, "(t+1)/t^2"));

  CHECK_THROWS_AS(compute_h_w(t3, RationalFunction::zero(F3), 2), std::domain_error);
}

TEST_CASE("h_w identity checks on worked examples") {
  const FieldSpec* F3 = FieldSpec::get(3);
  const FieldSpec* F5 = FieldSpec::get(5);
  RationalFunction t3 = RationalFunction::t(F3);

  // w = 1/t: negative case at (t); h_w = (t+1)/t^3 has rounded order -3, odd.
  HwIdentityReport r1 = check_hw_identities(RF(F3, "1/t"), t3, 2);
  REQUIRE(r1.rows.size() == 1);
  CHECK(r1.rows[0].negative_case);
  CHECK(r1.rows[0].ord_hw == -3);
  CHECK(r1.rows[0].pass);
  CHECK(r1.all_pass);

  // w = t: nonnegative case; h_w = (t^3+1)/t^2 has rounded order -2, even.
  HwIdentityReport r2 = check_hw_identities(t3, t3, 2);
  REQUIRE(r2.rows.size() == 1);
  CHECK_FALSE(r2.rows[0].negative_case);
  CHECK(r2.rows[0].ord_hw == -2);
  CHECK(r2.all_pass);

  // w = 1 over F_5: nonnegative case; h_w = (t+1)/t^2.
  HwIdentityReport r3 =
      check_hw_identities(RationalFunction::one(F5), RationalFunction::t(F5), 2);
  CHECK(r3.all_pass);

  // w = 0 takes the nonnegative branch.
  CHECK(check_hw_identities(RationalFunction::zero(F3), t3, 2).all_pass);

  CHECK_THROWS_AS(check_hw_identities(t3, RF(F3, "t^2"), 2), std::domain_error);
}

TEST_CASE("h_w checker reports the deep-pole anomaly at composite multiplicity") {
  // u = t^3 with l = 2 has the witness (t) with k = 3.  For w = 1/t^5 the
  // rounded order of w is -2 < 0, and h_w = (t^7+1)/t^13 has rounded order
  // ceil(-13/3) = -4, which is 0 mod 2: the negative-branch identity fails
  // and the checker must say so rather than hide it.
  const FieldSpec* F3 = FieldSpec::get(3);
  HwIdentityReport r = check_hw_identities(RF(F3, "1/t^5"), RF(F3, "t^3"), 2);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].negative_case);
  CHECK(r.rows[0].ord_hw == -4);
  CHECK_FALSE(r.rows[0].pass);
  CHECK_FALSE(r.all_pass);
}

TEST_CASE("h_w identities hold on random inputs of bounded degree") {
  // With num/den degrees <= 4 on both u and w, every witness multiplicity k
  // and every |v_P(w)| stay <= 4, and in that range both branches of the
  // identity are theorems (the anomaly above needs |v_P(w)| >= 5).
  std::mt19937_64 rng(161803);
  for (int64_t p : {3, 5}) {
    const FieldSpec* F = FieldSpec::get(p);
    for (int64_t l : {2, 3}) {
      int done = 0;
      while (done < 60) {
        RationalFunction u = random_nonconstant_rf(F, 4, rng);
        if (!is_l_behaved(u, l).is_behaved) continue;
        RationalFunction w = random_nonzero_rf(F, 4, rng);
        HwIdentityReport rep = check_hw_identities(w, u, l);
        CHECK(rep.all_pass);
        for (const auto& row : rep.rows)
          if (!row.negative_case) CHECK(row.ord_hw == -l);
        ++done;
      }
    }
  }
}

TEST_CASE("behavedness is invariant under coprime power maps") {
  std::mt19937_64 rng(141421);
  for (int64_t p : {3, 5}) {
    const FieldSpec* F = FieldSpec::get(p);
    for (int iter = 0; iter < 150; ++iter) {
      RationalFunction u = random_nonconstant_rf(F, 4, rng);
      for (int64_t l : {2, 3, 5, 7}) {
        if (l == p) continue;
        CHECK(is_l_behaved(u, l).is_behaved == is_l_behaved(u.pow(p), l).is_behaved);
        CHECK(is_l_behaved(u, p).is_behaved == is_l_behaved(u.pow(l), p).is_behaved);
      }
    }
  }
}

TEST_CASE("behavedness is invariant under substitution by field automorphisms") {
  std::mt19937_64 rng(173205);
  for (int64_t p : {3, 5}) {
    const FieldSpec* F = FieldSpec::get(p);
    RationalFunction t = RationalFunction::t(F);
    for (int iter = 0; iter < 60; ++iter) {
      RationalFunction u = random_nonconstant_rf(F, 4, rng);
      MobiusMap m = [&] {
        while (true) {
          try {
            return MobiusMap(Fq::from_index(F, static_cast<int64_t>(rng() % p)),
                             Fq::from_index(F, static_cast<int64_t>(rng() % p)),
                             Fq::from_index(F, static_cast<int64_t>(rng() % p)),
                             Fq::from_index(F, static_cast<int64_t>(rng() % p)));
          } catch (const std::invalid_argument&) {
          }
        }
      }();
      RationalFunction s = m.apply(t);  // (at+b)/(ct+d), an automorphism of the field
      for (int64_t l : {2, 3}) {
        CHECK(is_l_behaved(u, l).is_behaved ==
              is_l_behaved(substitute(u, s), l).is_behaved);
      }
    }
  }
}

TEST_CASE("field index coprime to l forces behavedness") {
  std::mt19937_64 rng(223606);
  for (int64_t p : {3, 5}) {
    const FieldSpec* F = FieldSpec::get(p);
    for (int iter = 0; iter < 150; ++iter) {
      RationalFunction u = random_nonconstant_rf(F, 5, rng);
      int64_t idx = field_index(u);
      for (int64_t l : {2, 3, 5, 7, 11}) {
        if (idx % l != 0) CHECK(is_l_behaved(u, l).is_behaved);
      }
    }
  }
}

TEST_CASE("every prime beyond the field index is behaved") {
  const FieldSpec* F3 = FieldSpec::get(3);
  std::mt19937_64 rng(317811);
  std::vector<int64_t> primes;
  for (int64_t l = 2; l <= 50; ++l)
    if (detail::is_prime_int(l)) primes.push_back(l);
  for (int iter = 0; iter < 40; ++iter) {
    RationalFunction u = random_nonconstant_rf(F3, 5, rng);
    int64_t idx = field_index(u);
    for (int64_t l : primes)
      if (l > idx) CHECK(is_l_behaved(u, l).is_behaved);
  }
}
