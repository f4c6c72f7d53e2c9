#include "fqt/eval.hpp"
#include "fqt/reduction.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <string>
#include <vector>

using namespace fqt;

namespace {

RationalFunction tRF(const FieldSpec* F) { return RationalFunction(Poly::t(F)); }

std::string tr(const std::string& sentence, TranslateMode mode, ParameterPolicy policy) {
  return print_ring(translate(parse_arith(sentence), mode, 0, policy));
}

RingEvalOutcome ev(const std::string& formula, const FieldSpec* F, int64_t bound,
                   int64_t l = 2) {
  return eval_ring(parse_ring(formula), tRF(F), l, EvalBudget{bound, F});
}

// True positive-existential sentences whose natural-number witnesses are
// small, paired with the three standard false ones below.
const std::vector<std::string> kTrueSuite = {
    "1 = 1",
    "1 + 1 = 1 + 1",
    "E a. a + a = 1 + 1",
    "E a. a + a = 1 + 1 + 1 + 1",
    "E a. a = 0",
    "E a. E b. a + 1 = b & a <= b",
    "E a. E b. a = 1 & a divp b & a + 1 <= b",
    "E a. a divp a",
    "E a. E b. E c. a = 1 & b = 1 & a + b = c",
    "E a. E b. a <= b & b <= a & a = 1",
    "E a. 0 <= a & a <= 1",
};

const std::vector<std::string> kFalseSuite = {
    "E a. a + a = 1",
    "E a. E b. a + b = a & b = 1",
    "E a. a + 1 + 1 = a + 1",
};

}  // namespace

TEST_CASE("translation of the core atoms") {
  CHECK(tr("E a. a + a = 1 + 1", TranslateMode::AbstractPredicates,
           ParameterPolicy::FreeU) == "(E z_a (= (* z_a z_a) (* u u)))");
  CHECK(tr("E a. a + a = 1 + 1", TranslateMode::AbstractPredicates,
           ParameterPolicy::FixedT) == "(E z_a (= (* z_a z_a) (* t t)))");
  CHECK(tr("E a. a + a = 1 + 1", TranslateMode::AbstractPredicates,
           ParameterPolicy::QuantifiedBl) ==
        "(E u (and (B u) (E z_a (= (* z_a z_a) (* u u)))))");

  // Order: a <= b turns into integrality of z_b / z_a.
  CHECK(tr("E a. E b. a <= b", TranslateMode::AbstractPredicates,
           ParameterPolicy::FreeU) ==
        "(E z_a (E z_b (E w_1 (and (= z_b (* w_1 z_a)) (Ints w_1 u)))))");

  // The empty sum translates to the multiplicative unit.
  CHECK(tr("E a. a = 0", TranslateMode::AbstractPredicates, ParameterPolicy::FreeU) ==
        "(E z_a (= z_a 1))");

  // p-divisibility: Frobenius iterate sandwiched by two integrality tests.
  CHECK(tr("E a. E b. a divp b", TranslateMode::AbstractPredicates,
           ParameterPolicy::FreeU) ==
        "(E z_a (E z_b (E w_1 (and (and (Denp w_1 z_a) "
        "(E w_2 (and (= w_1 (* w_2 z_b)) (Ints w_2 u)))) "
        "(E w_3 (and (= z_b (* w_3 w_1)) (Ints w_3 u)))))))");
}

TEST_CASE("translation details and round trips") {
  // Strict divisibility compiles exactly like its macro expansion.
  std::string direct = tr("E a. E b. a sdivp b", TranslateMode::AbstractPredicates,
                          ParameterPolicy::FreeU);
  std::string expanded = print_ring(
      translate(derive_strict_div(parse_arith("E a. E b. a sdivp b")),
                TranslateMode::AbstractPredicates, 0, ParameterPolicy::FreeU));
  CHECK(direct == expanded);

  // Determinism: repeated translation gives identical bytes, and the output
  // parses back to an equal AST.
  for (const std::string& s : kTrueSuite) {
    ArithFormulaPtr ast = parse_arith(s);
    RingFormulaPtr once = translate(ast, TranslateMode::AbstractPredicates, 0,
                                    ParameterPolicy::FixedT);
    RingFormulaPtr again = translate(ast, TranslateMode::AbstractPredicates, 0,
                                     ParameterPolicy::FixedT);
    CHECK(print_ring(once) == print_ring(again));
    CHECK(ring_equal(parse_ring(print_ring(once)), once));
  }

  // Expanding the Frobenius predicate splices the characteristic-split
  // formula: no abstract atom remains and the output stays q-free.
  std::string exp = tr("E a. E b. a divp b", TranslateMode::ExpandDenp,
                       ParameterPolicy::FreeU);
  CHECK(exp.find("Denp") == std::string::npos);
  CHECK(exp.find("(charne 2)") != std::string::npos);
  CHECK(exp.find("(chareq 3)") != std::string::npos);
  CHECK(ring_equal(parse_ring(exp),
                   translate(parse_arith("E a. E b. a divp b"),
                             TranslateMode::ExpandDenp, 0, ParameterPolicy::FreeU)));

  CHECK_THROWS_AS(translate(nullptr, TranslateMode::AbstractPredicates, 0,
                            ParameterPolicy::FreeU),
                  std::invalid_argument);

  CHECK(wrap_universal_guard("(F x)") == "(A u (or (psiC u) (F x)))");
}

TEST_CASE("ring atom evaluation") {
  const FieldSpec* F3 = FieldSpec::get(3);
  const FieldSpec* F5 = FieldSpec::get(5);

  CHECK(ev("(= (+ 1 2) 0)", F3, 2).verdict == EvalResult::True);
  CHECK(ev("(= (+ 1 2) 0)", F5, 2).verdict == EvalResult::FalseAtBound);
  CHECK(ev("(F t)", F3, 2).verdict == EvalResult::True);
  CHECK(ev("(F 1)", F3, 2).verdict == EvalResult::FalseAtBound);
  CHECK(ev("(B t)", F3, 2).verdict == EvalResult::True);
  CHECK(ev("(B (* t t))", F3, 2).verdict == EvalResult::FalseAtBound);
  CHECK(ev("(Sq (* t t))", F3, 2).verdict == EvalResult::True);
  CHECK(ev("(Sq t)", F3, 2).verdict == EvalResult::FalseAtBound);
  CHECK(ev("(Ints (* u u) u)", F3, 2).verdict == EvalResult::True);
  CHECK(ev("(Denp (* (* t t) t) t)", F3, 2).verdict == EvalResult::True);
  CHECK(ev("(Denp (* t t) t)", F3, 2).verdict == EvalResult::FalseAtBound);
  CHECK(ev("(Denp t t)", F3, 2).verdict == EvalResult::True);
  CHECK(ev("(charne 5)", F3, 2).verdict == EvalResult::True);
  CHECK(ev("(chareq 3)", F3, 2).verdict == EvalResult::True);
  CHECK(ev("(chareq 5)", F3, 2).verdict == EvalResult::FalseAtBound);

  CHECK_THROWS_AS(ev("(= x 1)", F3, 2), std::invalid_argument);
  CHECK_THROWS_AS(eval_ring(parse_ring("(F t)"), tRF(F3), 2, EvalBudget{-1, F3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(eval_ring(parse_ring("(F t)"), tRF(F5), 2, EvalBudget{2, F3}),
                  std::invalid_argument);
}

TEST_CASE("existential solvers") {
  const FieldSpec* F3 = FieldSpec::get(3);
  Poly t = Poly::t(F3);

  RingEvalOutcome sq = ev("(E z (= (* z z) (* t t)))", F3, 4);
  REQUIRE(sq.verdict == EvalResult::True);
  CHECK(sq.witnesses.at("z") == tRF(F3));

  // Division reaches witnesses far outside the enumeration cone.
  RingEvalOutcome div = ev("(E z (= (* z (+ t 1)) (* t t)))", F3, 4);
  REQUIRE(div.verdict == EvalResult::True);
  CHECK(div.witnesses.at("z") == RationalFunction(t * t, t + Poly::one(F3)));

  RingEvalOutcome orb = ev("(E z (and (Denp z t) (= z (* (* t t) t))))", F3, 4);
  REQUIRE(orb.verdict == EvalResult::True);
  CHECK(orb.witnesses.at("z") == tRF(F3).pow(3));

  // Backward orbit: the cube root of t^3 is found exactly.
  RingEvalOutcome back = ev("(E z (and (Denp z (* (* t t) t)) (= z t)))", F3, 4);
  CHECK(back.verdict == EvalResult::True);

  CHECK(ev("(E z (and (= z t) (F 1)))", F3, 4).verdict == EvalResult::FalseAtBound);
  CHECK(ev("(E z (= (* z 0) 1))", F3, 4).verdict == EvalResult::FalseAtBound);
  RingEvalOutcome un = ev("(E z (= (* z 0) 0))", F3, 4);
  REQUIRE(un.verdict == EvalResult::True);
  CHECK(un.witnesses.at("z") == RationalFunction::one(F3));

  // Cone enumeration: constants fail the nonconstancy guard, t succeeds.
  RingEvalOutcome cone = ev("(E z (and (F z) (Sq (* z z))))", F3, 4);
  REQUIRE(cone.verdict == EvalResult::True);
  CHECK(cone.witnesses.at("z") == tRF(F3));

  // A ratio witness must still pass its integrality test.
  CHECK(ev("(E w (and (= (* w t) 1) (Ints w u)))", F3, 4).verdict ==
        EvalResult::FalseAtBound);
}

TEST_CASE("evaluating emitted Frobenius formulas") {
  const FieldSpec* F3 = FieldSpec::get(3);
  RationalFunction t = tRF(F3);
  EvalBudget b{4, F3};

  RingTermPtr tt = term_t();
  RingTermPtr cube = term_mul(term_mul(term_t(), term_t()), term_t());
  CHECK(eval_ring(detail::phi_at(0, 3, tt, tt), t, 2, b).verdict == EvalResult::True);
  CHECK(eval_ring(detail::phi_at(0, 3, cube, tt), t, 2, b).verdict == EvalResult::True);
  CHECK(eval_ring(detail::phi_at(0, 3, term_mul(term_t(), term_t()), tt), t, 2, b)
            .verdict == EvalResult::FalseAtBound);

  // The uniform variant lifts constants by a nonconstant multiplier.
  RingEvalOutcome uni =
      eval_ring(detail::phi_uniform_at(0, term_lit(1), term_lit(1), "uu", "vv"), t, 2, b);
  REQUIRE(uni.verdict == EvalResult::True);
  CHECK(uni.witnesses.at("uu") == t);
  CHECK(uni.witnesses.at("vv") == t);
}

TEST_CASE("reduction end to end") {
  for (int64_t p : {3, 5}) {
    const FieldSpec* F = FieldSpec::get(p);
    for (const std::string& s : kTrueSuite) {
      INFO("p = " << p << ", sentence: " << s);
      ArithFormulaPtr ast = parse_arith(s);
      CHECK(eval_arith(ast, 10, p) == EvalResult::True);
      for (ParameterPolicy policy : {ParameterPolicy::FixedT, ParameterPolicy::FreeU}) {
        RingFormulaPtr ring =
            translate(ast, TranslateMode::AbstractPredicates, 0, policy);
        CHECK(eval_ring(ring, tRF(F), 2, EvalBudget{9, F}).verdict == EvalResult::True);
      }
    }
    for (const std::string& s : kFalseSuite) {
      INFO("p = " << p << ", sentence: " << s);
      ArithFormulaPtr ast = parse_arith(s);
      CHECK(eval_arith(ast, 10, p) == EvalResult::FalseAtBound);
      RingFormulaPtr ring = translate(ast, TranslateMode::AbstractPredicates, 0,
                                      ParameterPolicy::FixedT);
      CHECK(eval_ring(ring, tRF(F), 2, EvalBudget{6, F}).verdict ==
            EvalResult::FalseAtBound);
    }
  }
}

TEST_CASE("translation is independent of the characteristic") {
  // The compiler never consults p or q: the bytes coincide with themselves
  // across contexts and contain no characteristic-specific material in
  // abstract mode.
  for (const std::string& s : kTrueSuite) {
    std::string out = tr(s, TranslateMode::AbstractPredicates, ParameterPolicy::FixedT);
    CHECK(out.find("charne") == std::string::npos);
    CHECK(out.find("chareq") == std::string::npos);
  }
}

TEST_CASE("quantified parameter policy") {
  const FieldSpec* F3 = FieldSpec::get(3);
  ArithFormulaPtr ast = parse_arith("E a. a + a = 1 + 1");
  RingFormulaPtr ring =
      translate(ast, TranslateMode::AbstractPredicates, 0, ParameterPolicy::QuantifiedBl);
  RingEvalOutcome out = eval_ring(ring, tRF(F3), 2, EvalBudget{4, F3});
  REQUIRE(out.verdict == EvalResult::True);
  CHECK(out.witnesses.at("u") == tRF(F3));
  CHECK(out.witnesses.at("z_a") == tRF(F3));
}

TEST_CASE("raising the budget never loses a verdict") {
  const FieldSpec* F3 = FieldSpec::get(3);
  std::vector<std::string> formulas = {
      "(E z (= (* z z) (* t t)))",
      "(E z (and (F z) (Sq (* z z))))",
      "(E z (and (Denp z t) (= z (* (* t t) t))))",
  };
  for (const std::string& f : formulas) {
    CHECK(ev(f, F3, 3).verdict == EvalResult::True);
    CHECK(ev(f, F3, 6).verdict == EvalResult::True);
    CHECK(ev(f, F3, 9).verdict == EvalResult::True);
  }
  for (const std::string& s : kFalseSuite) {
    RingFormulaPtr ring = translate(parse_arith(s), TranslateMode::AbstractPredicates,
                                    0, ParameterPolicy::FixedT);
    CHECK(eval_ring(ring, tRF(F3), 2, EvalBudget{3, F3}).verdict ==
          EvalResult::FalseAtBound);
    CHECK(eval_ring(ring, tRF(F3), 2, EvalBudget{6, F3}).verdict ==
          EvalResult::FalseAtBound);
  }
}
