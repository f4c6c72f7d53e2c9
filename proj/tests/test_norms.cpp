#include "fqt/norms.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <set>
#include <string>
#include <vector>

using namespace fqt;

namespace {

RationalFunction RF(const Poly& f) { return RationalFunction(f); }

Poly mk(const FieldSpec* F, std::vector<int64_t> idx) {
  return Poly::from_indices(F, std::move(idx));
}

Poly random_poly(const FieldSpec* F, int64_t max_deg, detail::SplitMix64& rng) {
  int64_t d = static_cast<int64_t>(rng.next() % static_cast<uint64_t>(max_deg + 1));
  std::vector<int64_t> idx;
  for (int64_t i = 0; i <= d; ++i)
    idx.push_back(static_cast<int64_t>(rng.next() % static_cast<uint64_t>(F->q())));
  return Poly::from_indices(F, idx);
}

RationalFunction random_rf(const FieldSpec* F, int64_t max_deg, detail::SplitMix64& rng) {
  Poly num = random_poly(F, max_deg, rng);
  Poly den = Poly::zero(F);
  while (den.is_zero()) den = random_poly(F, max_deg, rng);
  return RationalFunction(num, den);
}

std::vector<Poly> all_monic_up_to(const FieldSpec* F, int64_t max_deg) {
  std::vector<Poly> out;
  for (const Poly& f : detail::polys_up_to(F, max_deg))
    if (f.is_monic()) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("MVPoly arithmetic, evaluation, rendering") {
  const FieldSpec* F = FieldSpec::get(13);
  MVPoly x0 = MVPoly::variable(F, 2, 0);
  MVPoly x1 = MVPoly::variable(F, 2, 1);
  MVPoly form = x0 * x0 + x1 * x1 * (-Fq::from_index(F, 2));
  CHECK(form.str() == "a_0^2 + 11*a_1^2");
  CHECK(form.total_degree() == 2);
  CHECK_FALSE(form.is_zero());

  // x0^2 - 2 x1^2 at (3, 1) = 9 - 2 = 7.
  CHECK(form.eval_const({Fq::from_index(F, 3), Fq::one(F)}) == Fq::from_index(F, 7));
  Poly t = Poly::t(F);
  CHECK(form.eval_poly({t, Poly::one(F)}) == t * t - Poly::constant(Fq::from_index(F, 2)));
  CHECK(form.eval({RF(t), RF(Poly::one(F))}) == RF(t * t - Poly::constant(Fq::from_index(F, 2))));

  MVPoly zero = MVPoly::constant(F, 2, Fq::zero(F));
  CHECK(zero.is_zero());
  CHECK(zero.str() == "0");
  CHECK(form + zero == form);
  CHECK(form * MVPoly::constant(F, 2, Fq::one(F)) == form);

  CHECK_THROWS_AS(MVPoly::variable(F, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(MVPoly::variable(F, 2, -1), std::invalid_argument);
  CHECK_THROWS_AS(form.eval_const({Fq::one(F)}), std::invalid_argument);
  MVPoly other_arity = MVPoly::variable(F, 3, 0);
  CHECK_THROWS_AS(form + other_arity, std::invalid_argument);
}

TEST_CASE("ExtensionSpec validation and defining polynomials") {
  const FieldSpec* F3 = FieldSpec::get(3);
  const FieldSpec* F5 = FieldSpec::get(5);

  ExtensionSpec k = ExtensionSpec::kummer(F3, 2, Fq::from_index(F3, 2));
  CHECK(k.kind() == ExtensionSpec::Kind::Kummer);
  CHECK(k.degree() == 2);
  CHECK(k.str() == "Kummer(l=2, a=2)");
  // X^2 - 2 = X^2 + 1 over F_3.
  CHECK(k.defining_poly() == mk(F3, {1, 0, 1}));

  ExtensionSpec as = ExtensionSpec::artin_schreier(F3, Fq::one(F3));
  CHECK(as.kind() == ExtensionSpec::Kind::ArtinSchreier);
  CHECK(as.degree() == 3);
  CHECK(as.str() == "ArtinSchreier(a=1)");
  // X^3 - X - 1 = X^3 + 2X + 2 over F_3.
  CHECK(as.defining_poly() == mk(F3, {2, 2, 0, 1}));

  // X^2 - 1 splits.
  CHECK_THROWS_AS(ExtensionSpec::kummer(F3, 2, Fq::one(F3)), std::invalid_argument);
  // l equal to the characteristic is the Artin-Schreier case, not Kummer.
  CHECK_THROWS_AS(ExtensionSpec::kummer(F3, 3, Fq::one(F3)), std::invalid_argument);
  // Non-prime degree.
  CHECK_THROWS_AS(ExtensionSpec::kummer(F3, 4, Fq::from_index(F3, 2)), std::invalid_argument);
  // Roots of unity missing: 3 does not divide 5 - 1.
  CHECK_THROWS_AS(ExtensionSpec::kummer(F5, 3, Fq::from_index(F5, 2)), std::invalid_argument);
  // Constant from the wrong field.
  CHECK_THROWS_AS(ExtensionSpec::kummer(F3, 2, Fq::from_index(F5, 2)), std::invalid_argument);
  // X^3 - X splits.
  CHECK_THROWS_AS(ExtensionSpec::artin_schreier(F3, Fq::zero(F3)), std::invalid_argument);
}

TEST_CASE("norm form: quadratic Kummer shapes") {
  const FieldSpec* F3 = FieldSpec::get(3);
  NormForm nf3 = build_norm_form(ExtensionSpec::kummer(F3, 2, Fq::from_index(F3, 2)));
  MVPoly x0 = MVPoly::variable(F3, 2, 0);
  MVPoly x1 = MVPoly::variable(F3, 2, 1);
  // a_0^2 - 2 a_1^2 = a_0^2 + a_1^2 over F_3.
  CHECK(nf3.P == x0 * x0 + x1 * x1);
  CHECK(nf3.P.str() == "a_0^2 + a_1^2");

  // Generic quadratic shape a_0^2 - a*a_1^2 over other fields.
  for (auto [p, a] : std::vector<std::pair<int64_t, int64_t>>{{5, 2}, {13, 2}, {7, 3}}) {
    const FieldSpec* F = FieldSpec::get(p);
    Fq av = Fq::from_index(F, a);
    NormForm nf = build_norm_form(ExtensionSpec::kummer(F, 2, av));
    MVPoly y0 = MVPoly::variable(F, 2, 0);
    MVPoly y1 = MVPoly::variable(F, 2, 1);
    CHECK(nf.P == y0 * y0 + y1 * y1 * (-av));
  }
}

TEST_CASE("norm form: Artin-Schreier expansion against conjugate products") {
  const FieldSpec* F3 = FieldSpec::get(3);
  ExtensionSpec spec = ExtensionSpec::artin_schreier(F3, Fq::one(F3));
  NormForm nf = build_norm_form(spec);
  CHECK(nf.P.total_degree() == 3);
  CHECK(nf.P.field() == F3);
  CHECK(nf.P.nvars() == 3);

  detail::SplitMix64 rng(424242u);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<RationalFunction> x{random_rf(F3, 2, rng), random_rf(F3, 2, rng),
                                    random_rf(F3, 2, rng)};
    // Product of the three conjugates, computed in coordinates.
    std::vector<RationalFunction> acc = conjugate_coords(x, spec, 0);
    for (int64_t j = 1; j < 3; ++j)
      acc = coordinate_mul(acc, conjugate_coords(x, spec, j), spec);
    CHECK(acc[0] == nf.P.eval(x));
    CHECK(acc[1].is_zero());
    CHECK(acc[2].is_zero());
  }
}

TEST_CASE("conjugates and coordinate multiplication") {
  const FieldSpec* F3 = FieldSpec::get(3);
  ExtensionSpec k = ExtensionSpec::kummer(F3, 2, Fq::from_index(F3, 2));
  Poly t = Poly::t(F3);

  // xi_2 = -1, so the nontrivial conjugate negates the alpha coordinate.
  std::vector<RationalFunction> x{RF(t), RF(Poly::one(F3))};
  std::vector<RationalFunction> cx = conjugate_coords(x, k, 1);
  CHECK(cx[0] == RF(t));
  CHECK(cx[1] == -RF(Poly::one(F3)));

  // alpha * alpha = a = 2.
  std::vector<RationalFunction> alpha{RationalFunction::zero(F3), RationalFunction::one(F3)};
  std::vector<RationalFunction> sq = coordinate_mul(alpha, alpha, k);
  CHECK(sq[0] == RF(Poly::constant(Fq::from_index(F3, 2))));
  CHECK(sq[1].is_zero());

  // Artin-Schreier with a = 1: alpha * alpha^2 = alpha^3 = alpha + 1.
  ExtensionSpec as = ExtensionSpec::artin_schreier(F3, Fq::one(F3));
  std::vector<RationalFunction> a1{RationalFunction::zero(F3), RationalFunction::one(F3),
                                   RationalFunction::zero(F3)};
  std::vector<RationalFunction> a2{RationalFunction::zero(F3), RationalFunction::zero(F3),
                                   RationalFunction::one(F3)};
  std::vector<RationalFunction> cube = coordinate_mul(a1, a2, as);
  CHECK(cube[0] == RationalFunction::one(F3));
  CHECK(cube[1] == RationalFunction::one(F3));
  CHECK(cube[2].is_zero());

  CHECK_THROWS_AS(conjugate_coords(x, k, 2), std::invalid_argument);
  CHECK_THROWS_AS(conjugate_coords(x, k, -1), std::invalid_argument);
  CHECK_THROWS_AS(conjugate_coords(a1, k, 0), std::invalid_argument);
  CHECK_THROWS_AS(coordinate_mul(x, a1, k), std::invalid_argument);
}

TEST_CASE("norm_of worked examples") {
  const FieldSpec* F3 = FieldSpec::get(3);
  ExtensionSpec k = ExtensionSpec::kummer(F3, 2, Fq::from_index(F3, 2));
  Poly t = Poly::t(F3);

  // Base elements map to their deg-th power.
  for (int64_t c = 0; c < 3; ++c) {
    RationalFunction cc = RF(Poly::constant(Fq::from_index(F3, c)));
    CHECK(norm_of({cc, RationalFunction::zero(F3)}, k) == cc * cc);
  }
  CHECK(norm_of({RF(t), RationalFunction::one(F3)}, k) == RF(t * t + Poly::one(F3)));
  CHECK(norm_of({RationalFunction::zero(F3), RationalFunction::one(F3)}, k) ==
        RationalFunction::one(F3));

  // Over F_9 the cube of a constant is a genuine Frobenius twist.
  const FieldSpec* F9 = FieldSpec::get(3, 2);
  ExtensionSpec as9 = ExtensionSpec::artin_schreier(F9, Fq::one(F9));
  Fq gen = Fq::from_index(F9, 3);
  RationalFunction g = RF(Poly::constant(gen));
  CHECK(norm_of({g, RationalFunction::zero(F9), RationalFunction::zero(F9)}, as9) ==
        RF(Poly::constant(gen * gen * gen)));

  CHECK_THROWS_AS(norm_of({RF(t)}, k), std::invalid_argument);
  const FieldSpec* F5 = FieldSpec::get(5);
  CHECK_THROWS_AS(
      norm_of({RationalFunction::one(F5), RationalFunction::zero(F5)}, k),
      std::invalid_argument);
}

TEST_CASE("is_norm decision and trace rows") {
  const FieldSpec* F3 = FieldSpec::get(3);
  ExtensionSpec k = ExtensionSpec::kummer(F3, 2, Fq::from_index(F3, 2));
  Poly t = Poly::t(F3);

  NormReport rt = is_norm_report(RF(t), k);
  CHECK_FALSE(rt.is_norm);
  REQUIRE(rt.rows.size() == 2);
  for (const NormConditionRow& row : rt.rows) {
    CHECK(row.place_degree == 1);
    CHECK(row.inert);
    CHECK_FALSE(row.satisfied);
    CHECK((row.valuation == 1 || row.valuation == -1));
  }

  CHECK(is_norm(RF(t * t), k));

  // t^2 + 1 is supported on a degree-2 (split) place; infinity is even.
  NormReport r2 = is_norm_report(RF(t * t + Poly::one(F3)), k);
  CHECK(r2.is_norm);
  REQUIRE(r2.rows.size() == 2);
  for (const NormConditionRow& row : r2.rows) {
    CHECK(row.satisfied);
    if (row.place_degree == 2) {
      CHECK_FALSE(row.inert);
      CHECK(row.valuation == 1);
    } else {
      CHECK(row.place_degree == 1);  // infinity
      CHECK(row.inert);
      CHECK(row.valuation == -2);
    }
  }

  CHECK_THROWS_AS(is_norm(RationalFunction::zero(F3), k), std::domain_error);
  const FieldSpec* F5 = FieldSpec::get(5);
  CHECK_THROWS_AS(is_norm(RationalFunction::one(F5), k), std::invalid_argument);

  // Norm conditions ignore constant factors.
  detail::SplitMix64 rng(90210u);
  for (int trial = 0; trial < 30; ++trial) {
    RationalFunction u = random_rf(F3, 3, rng);
    if (u.is_zero()) continue;
    bool base = is_norm(u, k);
    for (int64_t c = 1; c < 3; ++c)
      CHECK(is_norm(u * RF(Poly::constant(Fq::from_index(F3, c))), k) == base);
  }
}

TEST_CASE("norm witness search: quadratic fast path") {
  const FieldSpec* F3 = FieldSpec::get(3);
  ExtensionSpec k = ExtensionSpec::kummer(F3, 2, Fq::from_index(F3, 2));
  Poly t = Poly::t(F3);

  auto w = norm_witness_search(RF(t * t), k, 1);
  REQUIRE(w.has_value());
  CHECK((*w)[0] == RF(t));
  CHECK((*w)[1].is_zero());

  CHECK_FALSE(norm_witness_search(RF(t), k, 3).has_value());

  auto w2 = norm_witness_search(RF(t * t + Poly::one(F3)), k, 1);
  REQUIRE(w2.has_value());
  CHECK((*w2)[0] == RF(t));
  CHECK((*w2)[1] == RationalFunction::one(F3));
  CHECK(norm_of(*w2, k) == RF(t * t + Poly::one(F3)));

  // A rational target: (t^2+1)/(t+1)^2.
  Poly den = (t + Poly::one(F3)) * (t + Poly::one(F3));
  RationalFunction u(t * t + Poly::one(F3), den);
  auto w3 = norm_witness_search(u, k, 1);
  REQUIRE(w3.has_value());
  CHECK(norm_of(*w3, k) == u);
  CHECK((*w3)[0] == RationalFunction(t, t + Poly::one(F3)));
  CHECK((*w3)[1] == RationalFunction(Poly::one(F3), t + Poly::one(F3)));

  CHECK_THROWS_AS(norm_witness_search(RF(t), k, -1), std::invalid_argument);
}

TEST_CASE("norm witness search: general path") {
  const FieldSpec* F3 = FieldSpec::get(3);
  ExtensionSpec as = ExtensionSpec::artin_schreier(F3, Fq::one(F3));

  // Constants: the odometer finds (2, 0, 0) for u = 2 (cube of 2).
  RationalFunction two = RF(Poly::constant(Fq::from_index(F3, 2)));
  auto w = norm_witness_search(two, as, 0);
  REQUIRE(w.has_value());
  CHECK((*w)[0] == two);
  CHECK((*w)[1].is_zero());
  CHECK((*w)[2].is_zero());
  CHECK(norm_of(*w, as) == two);
}

TEST_CASE("norm witness exact oracle") {
  const FieldSpec* F3 = FieldSpec::get(3);
  ExtensionSpec k = ExtensionSpec::kummer(F3, 2, Fq::from_index(F3, 2));
  Poly t = Poly::t(F3);

  auto w = norm_witness_exact(RF(t * t), k);
  REQUIRE(w.has_value());
  CHECK((*w)[0] == RF(t));
  CHECK((*w)[1].is_zero());

  CHECK_FALSE(norm_witness_exact(RF(t), k).has_value());

  // Constant targets always have constant witnesses.
  RationalFunction two = RF(Poly::constant(Fq::from_index(F3, 2)));
  auto wc = norm_witness_exact(two, k);
  REQUIRE(wc.has_value());
  CHECK((*wc)[0] == RationalFunction::one(F3));
  CHECK((*wc)[1] == RationalFunction::one(F3));

  // Zero has the all-zero witness.
  auto wz = norm_witness_exact(RationalFunction::zero(F3), k);
  REQUIRE(wz.has_value());
  CHECK((*wz)[0].is_zero());
  CHECK((*wz)[1].is_zero());

  // Rational target, denominators cleared internally.
  Poly den = (t + Poly::one(F3)) * (t + Poly::one(F3));
  RationalFunction u(t * t + Poly::one(F3), den);
  auto wr = norm_witness_exact(u, k);
  REQUIRE(wr.has_value());
  CHECK(norm_of(*wr, k) == u);

  // Artin-Schreier polynomial target: t^3 is the norm of the base element t.
  ExtensionSpec as = ExtensionSpec::artin_schreier(F3, Fq::one(F3));
  auto wt = norm_witness_exact(RF(t * t * t), as);
  REQUIRE(wt.has_value());
  CHECK(norm_of(*wt, as) == RF(t * t * t));
}

TEST_CASE("norm multiplicativity on random coordinates") {
  const FieldSpec* F3 = FieldSpec::get(3);
  ExtensionSpec k = ExtensionSpec::kummer(F3, 2, Fq::from_index(F3, 2));
  ExtensionSpec as = ExtensionSpec::artin_schreier(F3, Fq::one(F3));
  detail::SplitMix64 rng(5150u);

  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RationalFunction> x{random_rf(F3, 2, rng), random_rf(F3, 2, rng)};
    std::vector<RationalFunction> y{random_rf(F3, 2, rng), random_rf(F3, 2, rng)};
    CHECK(norm_of(x, k) * norm_of(y, k) == norm_of(coordinate_mul(x, y, k), k));
  }
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RationalFunction> x{random_rf(F3, 1, rng), random_rf(F3, 1, rng),
                                    random_rf(F3, 1, rng)};
    std::vector<RationalFunction> y{random_rf(F3, 1, rng), random_rf(F3, 1, rng),
                                    random_rf(F3, 1, rng)};
    CHECK(norm_of(x, as) * norm_of(y, as) == norm_of(coordinate_mul(x, y, as), as));
  }
}

TEST_CASE("is_norm agrees with exhaustive search") {
  const FieldSpec* F3 = FieldSpec::get(3);
  ExtensionSpec k3 = ExtensionSpec::kummer(F3, 2, Fq::from_index(F3, 2));

  // The valuation rule versus the complete search oracle, and bounded-search
  // soundness in both directions.
  for (const Poly& u : all_monic_up_to(F3, 3)) {
    RationalFunction ru = RF(u);
    bool decided = is_norm(ru, k3);
    CHECK(decided == norm_witness_exact(ru, k3).has_value());
    auto found = norm_witness_search(ru, k3, 2);
    if (found) {
      CHECK(decided);
      CHECK(norm_of(*found, k3) == ru);
    }
    if (!decided) CHECK_FALSE(found.has_value());
  }

  const FieldSpec* F5 = FieldSpec::get(5);
  ExtensionSpec k5 = ExtensionSpec::kummer(F5, 2, Fq::from_index(F5, 2));
  for (const Poly& u : all_monic_up_to(F5, 2)) {
    RationalFunction ru = RF(u);
    bool decided = is_norm(ru, k5);
    CHECK(decided == norm_witness_exact(ru, k5).has_value());
    auto found = norm_witness_search(ru, k5, 1);
    if (found) {
      CHECK(decided);
      CHECK(norm_of(*found, k5) == ru);
    }
    if (!decided) CHECK_FALSE(found.has_value());
  }
}

TEST_CASE("behaved versus norm consistency") {
  const FieldSpec* F3 = FieldSpec::get(3);
  const FieldSpec* F5 = FieldSpec::get(5);
  ExtensionSpec k3 = ExtensionSpec::kummer(F3, 2, Fq::from_index(F3, 2));
  ExtensionSpec k5 = ExtensionSpec::kummer(F5, 2, Fq::from_index(F5, 2));
  ExtensionSpec as3 = ExtensionSpec::artin_schreier(F3, Fq::one(F3));
  Poly t = Poly::t(F3);

  Corollary36Report a = corollary36_check(t, 2, k3);
  CHECK(a.behaved.is_behaved);
  CHECK_FALSE(a.norm.is_norm);
  CHECK(a.consistent);

  Corollary36Report b = corollary36_check(t * t, 2, k3);
  CHECK_FALSE(b.behaved.is_behaved);
  CHECK(b.norm.is_norm);
  CHECK(b.consistent);

  // Exhaustive sweeps; collect any inconsistency instead of stopping at the
  // first.
  std::vector<std::string> bad;
  auto sweep = [&bad](const FieldSpec* F, int64_t l, const ExtensionSpec& spec,
                      int64_t max_deg) {
    for (const Poly& u : all_monic_up_to(F, max_deg)) {
      Corollary36Report r = corollary36_check(u, l, spec);
      if (!r.consistent)
        bad.push_back("p=" + std::to_string(F->p()) + " l=" + std::to_string(l) +
                      " u=" + u.str());
    }
  };
  sweep(F3, 2, k3, 4);
  sweep(F5, 2, k5, 4);
  sweep(F3, 3, as3, 4);
  INFO("inconsistent cases: " << bad.size());
  for (const std::string& s : bad) INFO(s);
  CHECK(bad.empty());

  CHECK_THROWS_AS(corollary36_check(Poly::zero(F3), 2, k3), std::domain_error);
  CHECK_THROWS_AS(corollary36_check(t, 3, k3), std::invalid_argument);
  CHECK_THROWS_AS(corollary36_check(Poly::t(F5), 2, k3), std::invalid_argument);
}

TEST_CASE("two squares decision and witnesses") {
  const FieldSpec* F3 = FieldSpec::get(3);
  Poly t = Poly::t(F3);
  Poly one = Poly::one(F3);

  auto w = two_squares(t * t + one);
  REQUIRE(w.has_value());
  CHECK(w->first == t);
  CHECK(w->second == one);

  CHECK_FALSE(two_squares(t).has_value());
  CHECK_FALSE(two_squares(t * (t + one) * (t + one)).has_value());

  auto wsq = two_squares(t * t * (t + one) * (t + one));
  REQUIRE(wsq.has_value());
  CHECK(wsq->first == t * t + t);
  CHECK(wsq->second.is_zero());

  auto wc = two_squares(Poly::constant(Fq::from_index(F3, 2)));
  REQUIRE(wc.has_value());
  CHECK(wc->first == one);
  CHECK(wc->second == one);

  auto wz = two_squares(Poly::zero(F3));
  REQUIRE(wz.has_value());
  CHECK(wz->first.is_zero());
  CHECK(wz->second.is_zero());

  CHECK_THROWS_AS(two_squares(Poly::t(FieldSpec::get(5))), std::invalid_argument);
  CHECK_THROWS_AS(two_squares(Poly::t(FieldSpec::get(3, 2))), std::invalid_argument);
}

TEST_CASE("two squares versus exhaustive sums") {
  const FieldSpec* F3 = FieldSpec::get(3);
  std::vector<Poly> all = detail::polys_up_to(F3, 4);
  std::set<std::string> sums;
  for (const Poly& a : all)
    for (const Poly& b : all) {
      Poly s = a * a + b * b;
      if (s.is_zero() || s.degree() <= 4) sums.insert(s.str());
    }
  for (const Poly& f : all) {
    bool expected = sums.count(f.str()) > 0;
    auto got = two_squares(f);
    CHECK(got.has_value() == expected);
    if (got) CHECK(got->first * got->first + got->second * got->second == f);
  }
}

TEST_CASE("psi_c predicate") {
  const FieldSpec* F3 = FieldSpec::get(3);
  Poly t = Poly::t(F3);

  PsiCResult neg = psi_c(RF(t));
  CHECK_FALSE(neg.holds);
  CHECK_FALSE(neg.witness.has_value());

  PsiCResult pos = psi_c(RF(t * t));
  CHECK(pos.holds);
  REQUIRE(pos.witness.has_value());
  CHECK((*pos.witness)[0] == RF(t));
  CHECK((*pos.witness)[1].is_zero());
  CHECK((*pos.witness)[2] == RationalFunction::one(F3));
  CHECK((*pos.witness)[3].is_zero());

  PsiCResult zero = psi_c(RationalFunction::zero(F3));
  CHECK(zero.holds);
  REQUIRE(zero.witness.has_value());
  CHECK((*zero.witness)[0].is_zero());
  CHECK((*zero.witness)[2] == RationalFunction::one(F3));

  const FieldSpec* F5 = FieldSpec::get(5);
  PsiCResult p5 = psi_c(RF(Poly::t(F5) * Poly::t(F5)));
  CHECK(p5.holds);
  REQUIRE(p5.witness.has_value());
  CHECK((*p5.witness)[0] == RF(Poly::t(F5)));

  CHECK_THROWS_AS(psi_c(RationalFunction::one(FieldSpec::get(2))), std::invalid_argument);
  CHECK_THROWS_AS(psi_c(RationalFunction::one(FieldSpec::get(2, 2))), std::invalid_argument);
}

TEST_CASE("psi_c sweep against the valuation rule") {
  const FieldSpec* F3 = FieldSpec::get(3);
  Fq alpha = nonsquare_constant(F3);
  ExtensionSpec spec = ExtensionSpec::kummer(F3, 2, alpha);
  RationalFunction alpha_rf = RF(Poly::constant(alpha));

  for (const Poly& u : all_monic_up_to(F3, 4)) {
    // Direct re-derivation: all odd-degree places (including infinity, which
    // has degree 1 and valuation -deg u) must carry even valuation.
    bool expected = u.degree() % 2 == 0;
    for (const auto& [fi, e] : u.factor().factors)
      if (fi.degree() % 2 == 1 && e % 2 == 1) expected = false;

    PsiCResult r = psi_c(RF(u));
    CHECK(r.holds == expected);
    if (r.holds) {
      const auto& w = *r.witness;
      CHECK(w[0] * w[0] + (-alpha_rf) * w[1] * w[1] == RF(u));
      CHECK(w[2] == RationalFunction::one(F3));
      CHECK(w[3].is_zero());
    } else if (u.degree() <= 2) {
      CHECK_FALSE(norm_witness_search(RF(u), spec, 2).has_value());
    } else {
      CHECK_FALSE(norm_witness_search(RF(u), spec, 1).has_value());
    }
  }
}
