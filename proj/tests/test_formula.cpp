#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "fqt/formula.hpp"
#include "fqt/galois.hpp"

using namespace fqt;

TEST_CASE("ring term factories and printing") {
  // z_a = z_b * z_c
  RingFormulaPtr f = ring_eq(term_var("z_a"), term_mul(term_var("z_b"), term_var("z_c")));
  REQUIRE(print_ring(f) == "(= z_a (* z_b z_c))");

  REQUIRE(print_ring_term(term_lit(-3)) == "-3");
  REQUIRE(print_ring_term(term_add(term_t(), term_lit(1))) == "(+ t 1)");
  REQUIRE_THROWS_AS(term_var("t"), std::invalid_argument);
  REQUIRE_THROWS_AS(term_var(""), std::invalid_argument);
  REQUIRE_THROWS_AS(ring_exists("t", f), std::invalid_argument);
}

TEST_CASE("ring printing covers every node kind and reparses") {
  std::vector<RingFormulaPtr> cases = {
      ring_eq(term_var("x"), term_lit(0)),
      ring_F(term_var("x")),
      ring_B(term_add(term_var("x"), term_t())),
      ring_denp(term_var("x"), term_var("y")),
      ring_ints(term_var("w"), term_var("u")),
      ring_sq(term_mul(term_var("x"), term_var("y"))),
      ring_charne(7),
      ring_chareq(13),
      ring_and(ring_F(term_var("x")), ring_B(term_var("x"))),
      ring_or(ring_charne(2), ring_chareq(2)),
      ring_exists("z", ring_eq(term_mul(term_var("z"), term_var("z")), term_var("x"))),
  };
  for (const RingFormulaPtr& f : cases) {
    std::string s = print_ring(f);
    CAPTURE(s);
    RingFormulaPtr g = parse_ring(s);
    REQUIRE(ring_equal(f, g));
    REQUIRE(print_ring(g) == s);
  }
}

TEST_CASE("ring structural equality distinguishes each slot") {
  REQUIRE(ring_equal(ring_charne(5), ring_charne(5)));
  REQUIRE_FALSE(ring_equal(ring_charne(5), ring_charne(7)));
  REQUIRE_FALSE(ring_equal(ring_charne(5), ring_chareq(5)));
  REQUIRE_FALSE(ring_equal(ring_eq(term_var("x"), term_lit(1)),
                           ring_eq(term_var("y"), term_lit(1))));
  REQUIRE_FALSE(ring_equal(ring_exists("x", ring_charne(3)),
                           ring_exists("y", ring_charne(3))));
  REQUIRE_FALSE(term_equal(term_add(term_var("x"), term_var("y")),
                           term_add(term_var("y"), term_var("x"))));
  REQUIRE(term_equal(term_t(), term_t()));
  REQUIRE_FALSE(term_equal(term_t(), term_var("u")));
}

TEST_CASE("ring fold helpers build left-nested chains") {
  std::vector<RingFormulaPtr> fs = {ring_charne(2), ring_charne(3), ring_charne(5)};
  REQUIRE(print_ring(ring_and_all(fs)) ==
          "(and (and (charne 2) (charne 3)) (charne 5))");
  REQUIRE(print_ring(ring_or_all(fs)) == "(or (or (charne 2) (charne 3)) (charne 5))");
  REQUIRE(print_ring(ring_and_all({ring_chareq(3)})) == "(chareq 3)");
  REQUIRE_THROWS_AS(ring_and_all({}), std::invalid_argument);
  REQUIRE_THROWS_AS(ring_or_all({}), std::invalid_argument);
}

namespace {

RingTermPtr random_term(fqt::detail::SplitMix64& rng, int depth) {
  uint64_t r = rng.next() % (depth > 0 ? 5 : 3);
  switch (r) {
    case 0: return term_lit(static_cast<int64_t>(rng.next() % 21) - 10);
    case 1: {
      static const char* names[] = {"x", "y", "z_a", "u1", "_w"};
      return term_var(names[rng.next() % 5]);
    }
    case 2: return term_t();
    case 3: return term_add(random_term(rng, depth - 1), random_term(rng, depth - 1));
    default: return term_mul(random_term(rng, depth - 1), random_term(rng, depth - 1));
  }
}

RingFormulaPtr random_formula(fqt::detail::SplitMix64& rng, int depth) {
  uint64_t r = rng.next() % (depth > 0 ? 11 : 8);
  switch (r) {
    case 0: return ring_eq(random_term(rng, 2), random_term(rng, 2));
    case 1: return ring_F(random_term(rng, 1));
    case 2: return ring_B(random_term(rng, 1));
    case 3: return ring_denp(random_term(rng, 1), random_term(rng, 1));
    case 4: return ring_ints(random_term(rng, 1), random_term(rng, 1));
    case 5: return ring_sq(random_term(rng, 2));
    case 6: return ring_charne(2 + static_cast<int64_t>(rng.next() % 97));
    case 7: return ring_chareq(2 + static_cast<int64_t>(rng.next() % 97));
    case 8: return ring_and(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 9: return ring_or(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    default: {
      static const char* names[] = {"a", "b", "c"};
      return ring_exists(names[rng.next() % 3], random_formula(rng, depth - 1));
    }
  }
}

}  // namespace

TEST_CASE("ring random round trip") {
  fqt::detail::SplitMix64 rng(987654321);
  for (int i = 0; i < 400; ++i) {
    RingFormulaPtr f = random_formula(rng, 4);
    std::string s = print_ring(f);
    CAPTURE(s);
    RingFormulaPtr g = parse_ring(s);
    REQUIRE(ring_equal(f, g));
    REQUIRE(print_ring(g) == s);
  }
}

TEST_CASE("ring parse errors") {
  REQUIRE_THROWS_AS(parse_ring("(= x"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_ring("(= x 1) junk"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_ring("(nope x 1)"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_ring("(and (charne 2))"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_ring("(= 3x 1)"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_ring("(E t (charne 2))"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_ring("(E 3 (charne 2))"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_ring("(charne x)"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_ring("(^ x y)"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_ring(""), std::invalid_argument);
  // Error messages carry the offset of the problem.
  try {
    parse_ring("(= x 1) junk");
    FAIL("expected throw");
  } catch (const std::invalid_argument& e) {
    REQUIRE(std::string(e.what()).find("at 8") != std::string::npos);
  }
}

TEST_CASE("arith parsing worked examples") {
  ArithFormulaPtr f = parse_arith("E x. x + x = 1 + 1");
  REQUIRE(f->kind == ArithFormula::Kind::Exists);
  REQUIRE(f->var == "x");
  REQUIRE(f->f1->kind == ArithFormula::Kind::Eq);
  REQUIRE(f->f1->t1.summands.size() == 2);
  REQUIRE(f->f1->t1.summands[0].kind == ArithSummand::Kind::Var);
  REQUIRE(f->f1->t2.summands[1].kind == ArithSummand::Kind::One);

  ArithFormulaPtr g = parse_arith("E x. E y. x divp y & x <= y");
  REQUIRE(g->kind == ArithFormula::Kind::Exists);
  REQUIRE(g->f1->kind == ArithFormula::Kind::Exists);
  REQUIRE(g->f1->f1->kind == ArithFormula::Kind::And);
  REQUIRE(g->f1->f1->f1->kind == ArithFormula::Kind::Divp);
  REQUIRE(g->f1->f1->f2->kind == ArithFormula::Kind::Le);

  // '&' binds tighter than '|'.
  ArithFormulaPtr h = parse_arith("E x. x = 0 & x = 1 | x = 1 & x = 0");
  REQUIRE(h->f1->kind == ArithFormula::Kind::Or);
  REQUIRE(h->f1->f1->kind == ArithFormula::Kind::And);
  REQUIRE(h->f1->f2->kind == ArithFormula::Kind::And);

  REQUIRE(parse_arith("0 = 0")->kind == ArithFormula::Kind::Eq);
  REQUIRE(parse_arith("E s. s sdivp 1")->f1->kind == ArithFormula::Kind::SDivp);
}

TEST_CASE("arith parse errors") {
  // Every variable occurrence must be under a quantifier.
  REQUIRE_THROWS_AS(parse_arith("x = 1"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_arith("E x. x + y = 1"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_arith("E x x = 1"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_arith("E x. x"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_arith("E x. x < 1"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_arith("E x. x = 2"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_arith("E divp. divp = 1"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_arith("E x. x = 1 extra"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_arith(""), std::invalid_argument);
  try {
    parse_arith("E x. x + y = 1");
    FAIL("expected throw");
  } catch (const std::invalid_argument& e) {
    REQUIRE(std::string(e.what()).find("unbound variable 'y'") != std::string::npos);
  }
}

TEST_CASE("arith printing round trips through the parser") {
  std::vector<std::string> sentences = {
      "E x. x + x = 1 + 1",
      "E x. E y. x divp y & x <= y",
      "E x. x = 0 & x = 1 | x = 1 & x = 0",
      "E s. s sdivp 1 + 1",
      "0 + 1 <= 1",
      "E a. E b. a + b = a & b = 1",
  };
  for (const std::string& s : sentences) {
    ArithFormulaPtr f = parse_arith(s);
    std::string printed = print_arith(f);
    CAPTURE(s, printed);
    REQUIRE(arith_equal(parse_arith(printed), f));
  }

  // Shapes outside the grammar (quantifier below a connective) are rejected.
  ArithFormulaPtr atom = parse_arith("0 = 0");
  REQUIRE_THROWS_AS(print_arith(arith_and(arith_exists("x", atom), atom)),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(print_arith(arith_or(atom, arith_exists("x", atom))),
                    std::invalid_argument);
  // And an Or below an And has no unparenthesized rendering either.
  REQUIRE_THROWS_AS(print_arith(arith_and(arith_or(atom, atom), atom)),
                    std::invalid_argument);
}

TEST_CASE("strict divisibility expands to divisibility plus comparison") {
  ArithFormulaPtr f = parse_arith("E x. E y. x sdivp y");
  ArithFormulaPtr expanded = derive_strict_div(f);
  REQUIRE(arith_equal(expanded, parse_arith("E x. E y. x divp y & x <= y")));

  // Non-macro structure passes through untouched, including nesting.
  ArithFormulaPtr g = parse_arith("E x. x = 1 | x sdivp 1 & x divp 1");
  ArithFormulaPtr ge = derive_strict_div(g);
  REQUIRE(arith_equal(ge, parse_arith("E x. x = 1 | x divp 1 & x <= 1 & x divp 1")));
  ArithFormulaPtr plain = parse_arith("E x. x divp 1");
  REQUIRE(arith_equal(derive_strict_div(plain), plain));
}

TEST_CASE("p-divisibility predicate against a direct orbit oracle") {
  // a |_p b holds exactly when b lies in {a p^s} or a lies in {b p^s}.
  for (int64_t p : {2, 3, 5, 13}) {
    for (int64_t a = 0; a <= 120; ++a) {
      for (int64_t b = 0; b <= 120; ++b) {
        bool oracle = false;
        for (int64_t x = a; x <= 2000 && !oracle; x *= p) {
          if (x == b) oracle = true;
          if (x == 0) break;
        }
        for (int64_t x = b; x <= 2000 && !oracle; x *= p) {
          if (x == a) oracle = true;
          if (x == 0) break;
        }
        CAPTURE(p, a, b);
        REQUIRE(fqt::detail::divp_holds(a, b, p) == oracle);
        // One-sided strict form agrees with divp plus <=.
        REQUIRE(fqt::detail::sdivp_holds(a, b, p) ==
                (fqt::detail::divp_holds(a, b, p) && a <= b));
      }
    }
  }
}

TEST_CASE("bounded evaluation worked examples") {
  REQUIRE(eval_arith(parse_arith("E x. x + x = 1 + 1"), 5, 3) == EvalResult::True);
  REQUIRE(eval_arith(parse_arith("E x. x + x = 1 + 1"), 0, 3) ==
          EvalResult::FalseAtBound);

  // The three standard false sentences.
  REQUIRE(eval_arith(parse_arith("E a. a + a = 1"), 50, 5) == EvalResult::FalseAtBound);
  REQUIRE(eval_arith(parse_arith("E a. E b. a + b = a & b = 1"), 20, 3) ==
          EvalResult::FalseAtBound);
  REQUIRE(eval_arith(parse_arith("E a. a + 1 + 1 = a + 1"), 20, 3) ==
          EvalResult::FalseAtBound);

  // Two-sided divisibility: 3 |_3 1 via 3 = 3^1 * 1.
  ArithFormulaPtr f = parse_arith("E x. x divp 1 & 1 + 1 <= x");
  REQUIRE(eval_arith(f, 3, 3) == EvalResult::True);
  REQUIRE(eval_arith(f, 2, 3) == EvalResult::FalseAtBound);

  // Strict form is one-sided: no x >= 2 with x |^3 1.
  ArithFormulaPtr g = parse_arith("E x. x sdivp 1 & 1 + 1 <= x");
  REQUIRE(eval_arith(g, 100, 3) == EvalResult::FalseAtBound);
  // ...but 1 |^3 x has solutions 1, 3, 9, ...
  ArithFormulaPtr h = parse_arith("E x. 1 sdivp x & 1 + 1 <= x");
  REQUIRE(eval_arith(h, 3, 3) == EvalResult::True);
  REQUIRE(eval_arith(h, 2, 3) == EvalResult::FalseAtBound);

  // Disjunction and bound edge: x = 7 first reachable at bound 7.
  ArithFormulaPtr d =
      parse_arith("E x. x = 1 + 1 + 1 + 1 + 1 + 1 + 1 & 1 sdivp x | x sdivp 0");
  REQUIRE(eval_arith(d, 0, 2) == EvalResult::True);  // x = 0 satisfies x sdivp 0

  REQUIRE_THROWS_AS(eval_arith(f, -1, 3), std::invalid_argument);
  REQUIRE_THROWS_AS(eval_arith(f, 5, 1), std::invalid_argument);
}

TEST_CASE("evaluation commutes with macro expansion") {
  fqt::detail::SplitMix64 rng(24601);
  std::vector<std::string> sentences = {
      "E x. E y. x sdivp y & 1 <= x",
      "E x. x sdivp 1 | 1 sdivp x",
      "E x. E y. x sdivp y & y sdivp x & 1 <= y",
      "E x. E y. E z. x sdivp y & y sdivp z & x + 1 <= z",
  };
  for (const std::string& s : sentences) {
    ArithFormulaPtr f = parse_arith(s);
    ArithFormulaPtr fe = derive_strict_div(f);
    for (int64_t p : {2, 3, 5}) {
      for (int64_t bound : {0, 1, 4, 9}) {
        CAPTURE(s, p, bound);
        REQUIRE(eval_arith(f, bound, p) == eval_arith(fe, bound, p));
      }
    }
  }
  (void)rng;
}
