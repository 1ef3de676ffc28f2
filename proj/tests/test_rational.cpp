#include "core/rational.hpp"

#include <doctest.h>

using betaforms::Rational;

TEST_CASE("construction and canonical form") {
    CHECK(Rational(4, 8) == Rational(1, 2));
    CHECK(Rational(-4, 8) == Rational(1, -2));
    CHECK(Rational(0, 7).is_zero());
    CHECK(Rational(3).str() == "3");
    CHECK(Rational(-3, 9).str() == "-1/3");
}

TEST_CASE("parse") {
    CHECK(Rational::parse("5/15") == Rational(1, 3));
    CHECK(Rational::parse("-7") == Rational(-7));
    CHECK_THROWS(Rational::parse("abc"));
    CHECK_THROWS(Rational::parse(""));
}

TEST_CASE("field operations") {
    Rational a(3, 4), b(-1, 6);
    CHECK(a + b == Rational(7, 12));
    CHECK(a * b == Rational(-1, 8));
    CHECK(a / b == Rational(-9, 2));
    CHECK((a - a).is_zero());
    CHECK(a.inv() == Rational(4, 3));
    CHECK_THROWS(Rational(0).inv());
    CHECK(Rational(2, 3).pow(-2) == Rational(9, 4));
}

TEST_CASE("big values stay exact") {
    Rational x(1);
    for (int i = 0; i < 40; ++i) x *= Rational(10);
    Rational y = x + Rational(1);
    CHECK(y != x);
    CHECK((y - x) == Rational(1));
}
