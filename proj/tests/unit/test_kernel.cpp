#include <random>

#include "doctest.h"
#include "gen.hpp"

#include "braid/errors.hpp"
#include "braid/poly.hpp"

using namespace braid;

namespace {
Ring Q = Ring::rational();
Scalar sc(Ring r, const char* s) { return parse_scalar(s, r); }
const std::vector<std::string> XY = {"x", "y"};
}  // namespace

TEST_CASE("rational arithmetic") {
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(-4, -6) == Rational(2, 3));
  CHECK(Rational::parse("-10/4").str() == "-5/2");
  CHECK_THROWS_AS(Rational(0).inverse(), Error);
}

TEST_CASE("rational promotes to big integers without losing exactness") {
  Rational big(1);
  for (int i = 0; i < 40; ++i) big *= Rational(1000003);
  Rational back = big;
  for (int i = 0; i < 40; ++i) back /= Rational(1000003);
  CHECK(back == Rational(1));
  CHECK(big.str().size() > 200);
  Rational tiny = big.inverse();
  CHECK(tiny * big == Rational(1));
  CHECK(Rational(1) < big);
  CHECK(tiny < Rational(1));
}

TEST_CASE("scalar examples") {
  Ring n2 = Ring::series(2), n3 = Ring::series(3);
  CHECK(sc(n2, "1 + h") * sc(n2, "1 - h") == Scalar(n2, Rational(1)));
  CHECK((Scalar(Q, Rational(2, 3)) * Scalar(Q, Rational(3, 4))).str() == "1/2");

  // Oracle: (1+h)^{-1} = sum_k (-h)^k, coefficient (-1)^k term by term.
  Scalar inv = sc(n3, "1 + h").inverse();
  for (int k = 0; k < 3; ++k) CHECK(inv.coeff(k) == Rational(k % 2 ? -1 : 1));
  CHECK(inv.str() == "1 - h + h^2");

  CHECK_THROWS_AS(sc(n3, "h").inverse(), Error);
  CHECK_THROWS_AS(Scalar(Q).inverse(), Error);
  try {
    (void)(Scalar(Q, 1) + Scalar(n2, 1));
    FAIL("expected RingMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RingMismatch);
  }
}

TEST_CASE("scalar ring laws on random values") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1200; ++trial) {
    Ring r = trial % 3 == 0 ? Q : Ring::series(1 + trial % 5);
    Scalar a = gen::scalar(rng, r), b = gen::scalar(rng, r), c = gen::scalar(rng, r);
    Scalar one(r, Rational(1)), zero(r);
    REQUIRE((a + b) + c == a + (b + c));
    REQUIRE((a * b) * c == a * (b * c));
    REQUIRE(a * b == b * a);
    REQUIRE(a * (b + c) == a * b + a * c);
    REQUIRE(a * one == a);
    REQUIRE(a + zero == a);
    REQUIRE(a - a == zero);
    if (!a.coeff(0).is_zero()) REQUIRE(a * a.inverse() == one);
    // Truncation is a ring homomorphism.
    int n = r.width() > 1 ? 1 + trial % (r.width() - 1) : 1;
    REQUIRE((a * b).truncated(n) == (a.truncated(n) * b.truncated(n)).truncated(n));
    REQUIRE((a + b).truncated(n) == a.truncated(n) + b.truncated(n));
  }
}

TEST_CASE("polynomial examples") {
  Poly x = Poly::parse("x", XY, Q), y = Poly::parse("y", XY, Q);
  CHECK((x * y).str(XY) == "x y");
  CHECK((x + y) * (x - y) == Poly::parse("x^2 - y^2", XY, Q));
  Ring n2 = Ring::series(2);
  Poly a = Poly::parse("(1 + h) x", XY, n2), b = Poly::parse("x", XY, n2);
  CHECK((a * b).str(XY) == "(1 + h) x^2");
  CHECK(Poly::parse("3/2 x^2 y - y/2 + 1", XY, Q).str(XY) == "1 - 1/2 y + 3/2 x^2 y");
  CHECK(Poly::parse("x", XY, Q).derivative(0) == Poly::parse("1", XY, Q));
  CHECK_THROWS_AS(Poly::parse("z", XY, Q), Error);
  CHECK_THROWS_AS(x * Poly::parse("x", {"x"}, Q), Error);
}

TEST_CASE("polynomial ring laws on random values") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 1000; ++trial) {
    Ring r = trial % 2 ? Q : Ring::series(3);
    Poly a = gen::poly(rng, 2, r), b = gen::poly(rng, 2, r), c = gen::poly(rng, 2, r);
    Poly one = Poly::constant(2, Scalar(r, Rational(1)));
    REQUIRE((a * b) * c == a * (b * c));
    REQUIRE(a * b == b * a);
    REQUIRE(a * (b + c) == a * b + a * c);
    REQUIRE(a * one == a);
    REQUIRE((a - a).is_zero());
    // Leibniz rule for the raw partial derivative.
    REQUIRE((a * b).derivative(1) == a.derivative(1) * b + a * b.derivative(1));
    REQUIRE(Poly::parse(a.str(XY), XY, r) == a);
    if (r.is_series()) REQUIRE((a * b).truncated(2) == (a.truncated(2) * b.truncated(2)).truncated(2));
  }
}
