#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "fqt/galois.hpp"

using namespace fqt;

TEST_CASE("FieldSpec interning and parsing") {
  const FieldSpec* F3 = FieldSpec::get(3);
  CHECK(F3->p() == 3);
  CHECK(F3->n() == 1);
  CHECK(F3->q() == 3);
  CHECK(F3 == FieldSpec::get(3));
  CHECK(F3 == FieldSpec::parse("3"));
  CHECK(F3->str() == "3");

  const FieldSpec* F9 = FieldSpec::parse("3^2");
  CHECK(F9->p() == 3);
  CHECK(F9->n() == 2);
  CHECK(F9->q() == 9);
  CHECK(F9 == FieldSpec::get(3, 2));
  CHECK(F9->str() == "3^2");

  CHECK_THROWS_AS(FieldSpec::get(4), std::invalid_argument);
  CHECK_THROWS_AS(FieldSpec::get(1), std::invalid_argument);
  CHECK_THROWS_AS(FieldSpec::parse("banana"), std::invalid_argument);
}

TEST_CASE("canonical modulus is the least lexicographic monic irreducible") {
  // Degree 2 over F_3: x^2 (red), x^2+1 (irr) -> modulus x^2+1.
  const FieldSpec* F9 = FieldSpec::get(3, 2);
  CHECK(F9->modulus() == std::vector<int64_t>{1, 0, 1});

  // Degree 2 over F_2: x^2, x^2+1=(x+1)^2, x^2+x all reducible; x^2+x+1 irr.
  const FieldSpec* F4 = FieldSpec::get(2, 2);
  CHECK(F4->modulus() == std::vector<int64_t>{1, 1, 1});

  // Explicit modulus must be monic irreducible: x^2+2 = (x+1)(x+2) over F_3.
  CHECK_THROWS_AS(FieldSpec::get(3, 2, {2, 0, 1}), std::invalid_argument);
  CHECK(FieldSpec::get(3, 2, {1, 0, 1}) == F9);
}

TEST_CASE("prime field arithmetic") {
  const FieldSpec* F = FieldSpec::get(3);
  Fq two = Fq::from_index(F, 2);
  CHECK((two + two).index() == 1);   // 2+2 = 4 = 1
  CHECK((two * two).index() == 1);   // 2*2 = 4 = 1
  CHECK(two.inv().index() == 2);     // 2*2 = 1
  CHECK((-two).index() == 1);
  CHECK((two - two).is_zero());
  CHECK(two.pow(-1) == two.inv());
  CHECK(Fq::from_index(F, 5).index() == 2);   // reduced mod q
  CHECK(Fq::from_index(F, -1).index() == 2);  // -1 = 2
  CHECK_THROWS_AS(Fq::zero(F).inv(), std::domain_error);
}

TEST_CASE("extension field arithmetic in F_9") {
  const FieldSpec* F = FieldSpec::get(3, 2);
  // Generator a = x with a^2 = -1 = 2 (modulus x^2+1).
  Fq a = Fq::from_index(F, 3);
  CHECK(a.coords() == std::vector<int64_t>{0, 1});
  CHECK((a * a).index() == 2);
  // a^3 = a * a^2 = 2a, index 6.
  CHECK(a.pow(3).index() == 6);
  CHECK(a.frobenius().index() == 6);
  CHECK(a.frobenius().pth_root() == a);
  // Index encoding round trip and field-wide inverse check.
  for (int64_t k = 0; k < 9; ++k) {
    Fq e = Fq::from_index(F, k);
    CHECK(e.index() == k);
    CHECK(Fq::from_coords(F, e.coords()) == e);
    if (!e.is_zero()) CHECK((e * e.inv()).is_one());
  }
  CHECK_THROWS_AS(a + Fq::one(FieldSpec::get(3)), std::invalid_argument);
}

TEST_CASE("frobenius is a field automorphism fixing F_p") {
  const FieldSpec* F = FieldSpec::get(5, 2);
  for (int64_t i = 0; i < 25; ++i) {
    for (int64_t j = 0; j < 25; ++j) {
      Fq x = Fq::from_index(F, i), y = Fq::from_index(F, j);
      CHECK((x + y).frobenius() == x.frobenius() + y.frobenius());
      CHECK((x * y).frobenius() == x.frobenius() * y.frobenius());
    }
    Fq x = Fq::from_index(F, i);
    CHECK(x.frobenius().pth_root() == x);
    CHECK(x.pth_root().frobenius() == x);
  }
  for (int64_t c = 0; c < 5; ++c) {
    Fq e = Fq::from_index(F, c);
    CHECK(e.frobenius() == e);
  }
}

TEST_CASE("is_square agrees with exhaustive squaring") {
  for (const FieldSpec* F : {FieldSpec::get(7), FieldSpec::get(3, 2), FieldSpec::get(13)}) {
    std::set<int64_t> squares;
    for (int64_t k = 0; k < F->q(); ++k) {
      Fq e = Fq::from_index(F, k);
      squares.insert((e * e).index());
    }
    for (int64_t k = 0; k < F->q(); ++k) {
      Fq e = Fq::from_index(F, k);
      CHECK(e.is_square() == (squares.count(k) > 0));
      auto r = e.sqrt();
      if (squares.count(k)) {
        REQUIRE(r.has_value());
        CHECK((*r) * (*r) == e);
      } else {
        CHECK(!r.has_value());
      }
    }
  }
}

TEST_CASE("every element of a char-2 field is a square") {
  const FieldSpec* F4 = FieldSpec::get(2, 2);
  for (int64_t k = 0; k < 4; ++k) {
    Fq e = Fq::from_index(F4, k);
    CHECK(e.is_square());
    auto r = e.sqrt();
    REQUIRE(r.has_value());
    CHECK((*r) * (*r) == e);
  }
}

TEST_CASE("nonsquare_constant picks the least nonsquare") {
  CHECK(nonsquare_constant(FieldSpec::get(3)).index() == 2);
  CHECK(nonsquare_constant(FieldSpec::get(5)).index() == 2);
  // Squares mod 7 are {0,1,2,4}, so the least nonsquare is 3.
  CHECK(nonsquare_constant(FieldSpec::get(7)).index() == 3);
  // F_9: constants and the modulus root are squares; first nonsquare is 1+x.
  CHECK(nonsquare_constant(FieldSpec::get(3, 2)).index() == 4);
  CHECK_THROWS_AS(nonsquare_constant(FieldSpec::get(2)), std::domain_error);
  CHECK_THROWS_AS(nonsquare_constant(FieldSpec::get(2, 2)), std::domain_error);
}

TEST_CASE("root_of_unity finds an element of exact order l") {
  // 2^3 = 8 = 1 mod 7 and 2 has order 3.
  Fq z = root_of_unity(FieldSpec::get(7), 3);
  CHECK(z.index() == 2);
  CHECK(z.pow(3).is_one());
  CHECK(!z.is_one());
  // l = 2 always gives -1.
  CHECK(root_of_unity(FieldSpec::get(5), 2).index() == 4);
  CHECK_THROWS_AS(root_of_unity(FieldSpec::get(7), 5), std::domain_error);
}
