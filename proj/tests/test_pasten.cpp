#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fqt/pasten.hpp"

using namespace fqt;

namespace {

RationalFunction RF(const FieldSpec* F, const std::string& s) {
  return RationalFunction::parse(F, s);
}

Poly random_poly(fqt::detail::SplitMix64& rng, const FieldSpec* F, int64_t max_deg,
                 bool nonzero) {
  for (;;) {
    int64_t d = static_cast<int64_t>(rng.next() % (max_deg + 1));
    std::vector<int64_t> idx(d + 1);
    for (auto& v : idx) v = static_cast<int64_t>(rng.next() % F->q());
    Poly f = Poly::from_indices(F, idx);
    if (!nonzero || !f.is_zero()) return f;
  }
}

RationalFunction random_nonconstant(fqt::detail::SplitMix64& rng, const FieldSpec* F,
                                    int64_t max_deg) {
  for (;;) {
    RationalFunction w(random_poly(rng, F, max_deg, true),
                       random_poly(rng, F, max_deg, true));
    if (!w.is_constant()) return w;
  }
}

}  // namespace

TEST_CASE("den_p worked examples") {
  const FieldSpec* F3 = FieldSpec::get(3);
  REQUIRE(den_p(RF(F3, "t^9"), RF(F3, "t")) == 2);
  REQUIRE(den_p(RF(F3, "t^3+1"), RF(F3, "t+1")) == 1);  // Frobenius cubes
  REQUIRE_FALSE(den_p(RF(F3, "t^2"), RF(F3, "t")).has_value());
  REQUIRE(den_p(RF(F3, "t"), RF(F3, "t")) == 0);
  REQUIRE_FALSE(den_p(RF(F3, "t"), RF(F3, "t+1")).has_value());

  // Negative exponents peel exact p-th roots.
  REQUIRE(den_p(RF(F3, "t"), RF(F3, "t^9")) == -2);
  REQUIRE(den_p(RF(F3, "t+1"), RF(F3, "t^3+1")) == -1);
  REQUIRE_FALSE(den_p(RF(F3, "t"), RF(F3, "t^2")).has_value());

  // With denominators: ((t+1)/t)^9 = (t^9+1)/t^9 in characteristic 3.
  RationalFunction h = RF(F3, "(t+1)/t");
  REQUIRE(den_p(h.pow(9), h) == 2);
  REQUIRE(den_p(h, h.pow(9)) == -2);

  REQUIRE_THROWS_AS(den_p(RationalFunction::zero(F3), RF(F3, "t")),
                    std::domain_error);
  REQUIRE_THROWS_AS(den_p(RF(F3, "t"), RationalFunction::zero(F3)),
                    std::domain_error);
  const FieldSpec* F5 = FieldSpec::get(5);
  REQUIRE_THROWS_AS(den_p(RF(F3, "t"), RF(F5, "t")), std::invalid_argument);
}

TEST_CASE("den_p on constants walks the Frobenius orbit") {
  const FieldSpec* F3 = FieldSpec::get(3);
  REQUIRE(den_p(RF(F3, "1"), RF(F3, "1")) == 0);
  REQUIRE(den_p(RF(F3, "2"), RF(F3, "2")) == 0);
  REQUIRE_FALSE(den_p(RF(F3, "1"), RF(F3, "2")).has_value());

  // F_9 = F_3[x]/(x^2+1): the generator x (index 3) has x^3 = -x, a proper
  // orbit of size 2.
  const FieldSpec* F9 = FieldSpec::get(3, 2);
  Fq x = Fq::from_index(F9, 3);
  Fq x3 = x.pow(3);
  REQUIRE(x3 != x);
  RationalFunction cx(Poly::constant(x));
  RationalFunction cx3(Poly::constant(x3));
  REQUIRE(den_p(cx3, cx) == 1);
  REQUIRE(den_p(cx, cx3) == 1);  // the orbit closes: (x^3)^3 = x
  REQUIRE(den_p(cx, cx) == 0);
  // 1 is Frobenius-fixed; x is not reachable from it.
  REQUIRE_FALSE(den_p(cx, RationalFunction::one(F9)).has_value());

  // Constant versus nonconstant can never match.
  REQUIRE_FALSE(den_p(RF(F3, "2"), RF(F3, "t")).has_value());
  REQUIRE_FALSE(den_p(RF(F3, "t"), RF(F3, "2")).has_value());
}

TEST_CASE("den_p symmetry on nonconstant inputs") {
  fqt::detail::SplitMix64 rng(555888);
  for (const FieldSpec* F : {FieldSpec::get(3), FieldSpec::get(5)}) {
    int64_t p = F->p();
    for (int trial = 0; trial < 60; ++trial) {
      RationalFunction h = random_nonconstant(rng, F, 3);
      int64_t s = static_cast<int64_t>(rng.next() % 3);
      int64_t e = 1;
      for (int64_t i = 0; i < s; ++i) e *= p;
      RationalFunction f = h.pow(e);
      CAPTURE(F->p(), h.str(), s);
      REQUIRE(den_p(f, h) == s);
      REQUIRE(den_p(h, f) == -s);

      // Unrelated pairs: agree in both directions about nonexistence.
      RationalFunction g = random_nonconstant(rng, F, 3);
      bool fwd = den_p(g, h).has_value();
      bool bwd = den_p(h, g).has_value();
      REQUIRE(fwd == bwd);
      if (fwd) REQUIRE(*den_p(g, h) == -*den_p(h, g));
    }
  }
}

TEST_CASE("is_square worked examples") {
  const FieldSpec* F3 = FieldSpec::get(3);
  auto w1 = is_square(RF(F3, "t^2+2t+1"));
  REQUIRE(w1.has_value());
  REQUIRE(w1->str() == "t+1");
  REQUIRE_FALSE(is_square(RF(F3, "t")).has_value());
  // 2 is not a square in F_3, so 2(t+1)^2 is not a square.
  REQUIRE_FALSE(is_square(RF(F3, "2t^2+4t+2")).has_value());
  REQUIRE(is_square(RationalFunction::zero(F3)) == RationalFunction::zero(F3));

  auto w2 = is_square(RF(F3, "(t^2+2t+1)/t^2"));
  REQUIRE(w2.has_value());
  REQUIRE(*w2 * *w2 == RF(F3, "(t^2+2t+1)/t^2"));

  const FieldSpec* F7 = FieldSpec::get(7);
  auto w3 = is_square(RF(F7, "4"));
  REQUIRE(w3.has_value());
  REQUIRE(w3->str() == "2");  // deterministic least-index constant root
  REQUIRE_FALSE(is_square(RF(F7, "3")).has_value());  // 3 is a nonsquare mod 7

  // Characteristic 2: constants are all squares, but t still is not.
  const FieldSpec* F4 = FieldSpec::get(2, 2);
  REQUIRE_FALSE(is_square(RationalFunction::t(F4)).has_value());
  auto w4 = is_square(RF(F4, "t^2+1"));  // (t+1)^2
  REQUIRE(w4.has_value());
  REQUIRE(w4->str() == "t+1");
  Fq gen = Fq::from_index(F4, 2);
  auto w5 = is_square(RationalFunction(Poly::constant(gen)));
  REQUIRE(w5.has_value());
  REQUIRE(*w5 * *w5 == RationalFunction(Poly::constant(gen)));
}

TEST_CASE("is_square against exhaustive squaring") {
  // Over F_3 and F_5, compare with the full set of squares of rational
  // functions in the same degree box.
  for (const FieldSpec* F : {FieldSpec::get(3), FieldSpec::get(5)}) {
    int64_t q = F->q();
    std::vector<Poly> nums;  // all nonzero polynomials of degree <= 2
    std::vector<Poly> dens;  // all monic polynomials of degree <= 2
    for (int64_t c0 = 0; c0 < q; ++c0)
      for (int64_t c1 = 0; c1 < q; ++c1)
        for (int64_t c2 = 0; c2 < q; ++c2) {
          Poly f = Poly::from_indices(F, {c0, c1, c2});
          if (!f.is_zero()) nums.push_back(f);
          if (!f.is_zero() && f.is_monic()) dens.push_back(f);
        }
    std::set<std::string> squares;
    for (const Poly& a : nums)
      for (const Poly& b : dens) {
        RationalFunction z(a, b);
        squares.insert((z * z).str());
      }
    squares.insert(RationalFunction::zero(F).str());
    int64_t positives = 0;
    for (const Poly& a : nums)
      for (const Poly& b : dens) {
        RationalFunction w(a, b);
        auto root = is_square(w);
        CAPTURE(F->p(), w.str());
        REQUIRE(root.has_value() == (squares.count(w.str()) > 0));
        if (root.has_value()) {
          REQUIRE(*root * *root == w);
          ++positives;
        }
      }
    REQUIRE(positives > 0);
  }
}

TEST_CASE("m_of evaluates the ceiling formula") {
  REQUIRE(m_of(0, 1, 13) == 12);   // empty sum: ceil(4*0+12)
  REQUIRE(m_of(2, 1, 101) == 20);  // empty sum: 4*2+12
  // d = 3: the sum runs to ceil((3-1)/2) = 1, so M = ceil((12 + 8*3)/3).
  REQUIRE(m_of(0, 3, 3) == 12);
  REQUIRE(m_of(0, 2, 3) == 18);   // ceil((12 + 24)/2)
  REQUIRE(m_of(0, 6, 3) == 54);   // sum to 3: 3+9+27 = 39; (12+312)/6
  REQUIRE(m_of(0, 4, 5) == 63);   // sum to 2: 5+25 = 30; (12+240)/4
  REQUIRE(m_of(0, 4, 7) == 115);  // sum to 2: 7+49 = 56; (12+448)/4
  REQUIRE(m_of(0, 3, 11) == 34);  // sum to 1: 11; ceil(100/3)
  REQUIRE(m_of(1, 1, 17) == 16);

  REQUIRE_THROWS_AS(m_of(-1, 1, 13), std::invalid_argument);
  REQUIRE_THROWS_AS(m_of(0, 0, 13), std::invalid_argument);
  REQUIRE_THROWS_AS(m_of(0, 1, 2), std::invalid_argument);
  REQUIRE_THROWS_AS(m_of(0, 1, 9), std::invalid_argument);
}

TEST_CASE("choose_params worked examples") {
  PastenParams a = choose_params(0, 13);
  REQUIRE(a.d == 1);
  REQUIRE(a.M == 12);
  REQUIRE(a.F_list.size() == 12);
  const FieldSpec* F13 = FieldSpec::get(13);
  REQUIRE(a.F_list.front() == Poly::parse(F13, "t+12"));  // X - 1
  REQUIRE(a.F_list.back() == Poly::parse(F13, "t+1"));    // X - 12
  for (const Poly& f : a.F_list) {
    REQUIRE(f.degree() == 1);
    REQUIRE(f.is_monic());
  }

  PastenParams b = choose_params(1, 101);
  REQUIRE(b.d == 1);
  REQUIRE(b.M == 16);

  // Small characteristics force higher degree.
  PastenParams c = choose_params(0, 3);
  REQUIRE(c.d == 6);
  REQUIRE(c.M == 54);
  REQUIRE(c.F_list.size() == 54);
  std::set<std::string> seen;
  for (const Poly& f : c.F_list) {
    REQUIRE(f.degree() == 6);
    REQUIRE(f.is_monic());
    REQUIRE(f.is_irreducible());
    seen.insert(f.str());
  }
  REQUIRE(seen.size() == 54);
  // Enough irreducibles exist at that degree, as the selection rule demands.
  REQUIRE(count_monic_irreducibles(3, 6) == 116);
  // Deterministic prefix of the enumeration.
  std::vector<Poly> all = enumerate_monic_irreducibles(FieldSpec::get(3), 6);
  for (size_t i = 0; i < c.F_list.size(); ++i) REQUIRE(c.F_list[i] == all[i]);

  REQUIRE(choose_params(0, 5).d == 4);
  REQUIRE(choose_params(0, 5).M == 63);
  REQUIRE(choose_params(0, 7).d == 4);
  REQUIRE(choose_params(0, 7).M == 115);
  REQUIRE(choose_params(0, 11).d == 3);
  REQUIRE(choose_params(0, 11).M == 34);

  REQUIRE_THROWS_AS(choose_params(0, 2), std::invalid_argument);
  REQUIRE_THROWS_AS(choose_params(0, 9), std::invalid_argument);
  REQUIRE_THROWS_AS(choose_params(-1, 13), std::invalid_argument);
}

TEST_CASE("pasten_criterion worked examples") {
  const FieldSpec* F13 = FieldSpec::get(13);
  PastenParams P = choose_params(0, 13);
  REQUIRE(pasten_criterion(RF(F13, "t"), RF(F13, "t"), P));
  REQUIRE_FALSE(pasten_criterion(RF(F13, "t"), RF(F13, "t+1"), P));
  REQUIRE(pasten_criterion(RF(F13, "t^13"), RF(F13, "t"), P));
  REQUIRE(pasten_criterion(RF(F13, "t"), RF(F13, "t^13"), P));

  REQUIRE_THROWS_AS(pasten_criterion(RF(F13, "2"), RF(F13, "t"), P),
                    std::domain_error);
  REQUIRE_THROWS_AS(pasten_criterion(RF(F13, "t"), RF(F13, "2"), P),
                    std::domain_error);
  REQUIRE_THROWS_AS(
      pasten_criterion(RationalFunction::zero(F13), RF(F13, "t"), P),
      std::domain_error);
  const FieldSpec* F5 = FieldSpec::get(5);
  REQUIRE_THROWS_AS(pasten_criterion(RF(F5, "t"), RF(F5, "t"), P),
                    std::invalid_argument);
}

TEST_CASE("pasten_criterion over an extension of the prime field") {
  // Coefficients of the F_i live in F_3; the inputs live in F_9(t).
  const FieldSpec* F9 = FieldSpec::get(3, 2);
  PastenParams P = choose_params(0, 3);
  RationalFunction h = RationalFunction::t(F9);
  REQUIRE(pasten_criterion(h.pow(9), h, P));
  REQUIRE(pasten_criterion(h, h, P));
  Fq gen = Fq::from_index(F9, 3);
  RationalFunction g(Poly::from_coeffs(F9, {Fq::one(F9), gen}));  // 1 + gen*t
  REQUIRE(pasten_criterion(g.pow(3), g, P));
}

TEST_CASE("criterion agrees with ground truth over F_13") {
  const FieldSpec* F13 = FieldSpec::get(13);
  PastenParams P = choose_params(0, 13);
  fqt::detail::SplitMix64 rng(13131313);

  // Random pairs: exact agreement with den_p, no tolerance.
  for (int trial = 0; trial < 200; ++trial) {
    RationalFunction f = random_nonconstant(rng, F13, 3);
    RationalFunction h = random_nonconstant(rng, F13, 3);
    CAPTURE(f.str(), h.str());
    REQUIRE(pasten_criterion(f, h, P) == den_p(f, h).has_value());
  }

  // Constructed towers f = h^{p^s}: always accepted, and den_p recovers s.
  for (int trial = 0; trial < 50; ++trial) {
    RationalFunction h = random_nonconstant(rng, F13, 2);
    int64_t s = static_cast<int64_t>(rng.next() % 3);
    int64_t e = 1;
    for (int64_t i = 0; i < s; ++i) e *= 13;
    RationalFunction f = h.pow(e);
    CAPTURE(h.str(), s);
    REQUIRE(pasten_criterion(f, h, P));
    REQUIRE(den_p(f, h) == s);
  }
}

namespace {

// Reference evaluation of a ring term over F_q(t): integer literals reduce
// into the prime field, t is the generator, +/* are field operations.
RationalFunction eval_term_ref(const RingTermPtr& tm, const FieldSpec* F,
                               const std::map<std::string, RationalFunction>& env) {
  switch (tm->kind) {
    case RingTerm::Kind::IntLit:
      return RationalFunction(Poly::constant(Fq::from_index(F, ((tm->value % F->p()) + F->p()) % F->p())));
    case RingTerm::Kind::Var: {
      auto it = env.find(tm->name);
      REQUIRE(it != env.end());
      return it->second;
    }
    case RingTerm::Kind::TConst:
      return RationalFunction::t(F);
    case RingTerm::Kind::Add:
      return eval_term_ref(tm->a, F, env) + eval_term_ref(tm->b, F, env);
    case RingTerm::Kind::Mul:
      return eval_term_ref(tm->a, F, env) * eval_term_ref(tm->b, F, env);
  }
  throw std::logic_error("eval_term_ref: bad kind");
}

// Interprets phi structurally: every conjunct must be E z (lhs = z*z), and
// the whole formula holds iff each lhs evaluates to a square.
bool eval_phi_ref(const RingFormulaPtr& f, const FieldSpec* F,
                  const std::map<std::string, RationalFunction>& env) {
  if (f->kind == RingFormula::Kind::And)
    return eval_phi_ref(f->f1, F, env) && eval_phi_ref(f->f2, F, env);
  REQUIRE(f->kind == RingFormula::Kind::Exists);
  const RingFormulaPtr& body = f->f1;
  REQUIRE(body->kind == RingFormula::Kind::Eq);
  REQUIRE(body->t2->kind == RingTerm::Kind::Mul);
  REQUIRE(body->t2->a->kind == RingTerm::Kind::Var);
  REQUIRE(body->t2->a->name == f->var);
  REQUIRE(term_equal(body->t2->a, body->t2->b));
  return is_square(eval_term_ref(body->t1, F, env)).has_value();
}

}  // namespace

TEST_CASE("emitted phi formula means what the criterion computes") {
  const FieldSpec* F13 = FieldSpec::get(13);
  PastenParams P = choose_params(0, 13);
  RingFormulaPtr phi = build_phi(0, 13);
  fqt::detail::SplitMix64 rng(777000);
  for (int trial = 0; trial < 20; ++trial) {
    RationalFunction f = random_nonconstant(rng, F13, 2);
    RationalFunction h =
        (trial % 2 == 0) ? f.pow(13) : random_nonconstant(rng, F13, 2);
    std::map<std::string, RationalFunction> env = {{"x", f}, {"y", h}};
    CAPTURE(f.str(), h.str());
    REQUIRE(eval_phi_ref(phi, F13, env) == pasten_criterion(f, h, P));
  }
}

TEST_CASE("build_phi structure") {
  RingFormulaPtr phi = build_phi(0, 13);
  std::string s = print_ring(phi);
  // Twelve square atoms, one per F_i.
  size_t count = 0;
  for (size_t pos = 0; (pos = s.find("(E z ", pos)) != std::string::npos; ++pos)
    ++count;
  REQUIRE(count == 12);
  // X - 1 lifts to t + 12 and X - 12 to t + 1, applied at both variables.
  REQUIRE(s.find("(+ x 12)") != std::string::npos);
  REQUIRE(s.find("(+ y 12)") != std::string::npos);
  REQUIRE(s.find("(+ x 1)") != std::string::npos);
  REQUIRE(s.find("(= (* (+ x 12) (+ y 12)) (* z z))") != std::string::npos);
  // No negative literals in a fixed-characteristic instance.
  REQUIRE(s.find('-') == std::string::npos);
  REQUIRE(ring_equal(parse_ring(s), phi));

  // Atom count grows with M: g = 1 at p = 101 gives 16.
  std::string s2 = print_ring(build_phi(1, 101));
  size_t count2 = 0;
  for (size_t pos = 0; (pos = s2.find("(E z ", pos)) != std::string::npos; ++pos)
    ++count2;
  REQUIRE(count2 == 16);

  // Higher-degree F_i: Horner lift with coefficients in [0, p).
  std::string s3 = print_ring(build_phi(0, 11));
  REQUIRE(s3.find("(E z ") != std::string::npos);
  REQUIRE(ring_equal(parse_ring(s3), build_phi(0, 11)));

  REQUIRE_THROWS_AS(build_phi(0, 2), std::invalid_argument);
}

TEST_CASE("build_chi structure") {
  RingFormulaPtr chi = build_chi(0);
  std::string s = print_ring(chi);
  for (const char* g : {"(charne 2)", "(charne 3)", "(charne 5)", "(charne 7)",
                        "(charne 11)"})
    REQUIRE(s.find(g) != std::string::npos);
  REQUIRE(s.find("(charne 13)") == std::string::npos);
  for (const char* g : {"(chareq 3)", "(chareq 5)", "(chareq 7)", "(chareq 11)"})
    REQUIRE(s.find(g) != std::string::npos);
  // No square-product instance exists at characteristic 2; it is excluded
  // from the case split and only ruled out by the first disjunct's guard.
  REQUIRE(s.find("(chareq 2)") == std::string::npos);
  // The characteristic-free template uses plain negative literals.
  REQUIRE(s.find("(+ x -1)") != std::string::npos);
  REQUIRE(s.find("(+ y -12)") != std::string::npos);
  REQUIRE(ring_equal(parse_ring(s), chi));

  REQUIRE(chi->kind == RingFormula::Kind::Or);
}

TEST_CASE("build_phi_uniform structure") {
  RingFormulaPtr phi = build_phi_uniform(0);
  REQUIRE(phi->kind == RingFormula::Kind::Or);
  // First disjunct: F(x) and F(y) and chi.
  const RingFormulaPtr& d1 = phi->f1;
  REQUIRE(d1->kind == RingFormula::Kind::And);
  REQUIRE(d1->f1->kind == RingFormula::Kind::And);
  REQUIRE(d1->f1->f1->kind == RingFormula::Kind::PredF);
  REQUIRE(print_ring_term(d1->f1->f1->t1) == "x");
  // Second disjunct: E u E v [...].
  const RingFormulaPtr& d2 = phi->f2;
  REQUIRE(d2->kind == RingFormula::Kind::Exists);
  REQUIRE(d2->var == "u");
  REQUIRE(d2->f1->kind == RingFormula::Kind::Exists);
  REQUIRE(d2->f1->var == "v");

  std::string s = print_ring(phi);
  REQUIRE(s.find("(F u)") != std::string::npos);
  REQUIRE(s.find("(F v)") != std::string::npos);
  REQUIRE(s.find("(* u x)") != std::string::npos);
  REQUIRE(s.find("(* v y)") != std::string::npos);
  REQUIRE(ring_equal(parse_ring(s), phi));
}
