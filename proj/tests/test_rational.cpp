#include <doctest.h>

#include "tl/error.hpp"
#include "tl/rational.hpp"

using tl::Rational;

TEST_CASE("rational basics") {
    Rational a(1, 2), b(1, 3);
    CHECK((a + b) == Rational(5, 6));
    CHECK((a - b) == Rational(1, 6));
    CHECK((a * b) == Rational(1, 6));
    CHECK((a / b) == Rational(3, 2));
    CHECK((-a) == Rational(-1, 2));
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(7, 2).pow(3) == Rational(343, 8));
    CHECK(Rational(-3).pow(2) == Rational(9));
    CHECK(Rational(5).pow(0) == Rational(1));
}

TEST_CASE("rational ordering") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1) < Rational(0));
    CHECK(Rational(7, 3) > Rational(2));
    CHECK(Rational(2, 6) <= Rational(1, 3));
}

TEST_CASE("rational parsing") {
    CHECK(Rational::parse("3") == Rational(3));
    CHECK(Rational::parse("-4") == Rational(-4));
    CHECK(Rational::parse("3/2") == Rational(3, 2));
    CHECK(Rational::parse("-3/2") == Rational(-3, 2));
    CHECK(Rational::parse("0.5") == Rational(1, 2));
    CHECK(Rational::parse("0.25") == Rational(1, 4));
    CHECK(Rational::parse("3.14") == Rational(157, 50));
    CHECK(Rational::parse("2.5e-3") == Rational(1, 400));
    CHECK(Rational::parse("1e2") == Rational(100));
    CHECK_THROWS_AS(Rational::parse("1/0"), tl::Error);
    CHECK_THROWS_AS(Rational::parse("abc"), tl::Error);
    CHECK_THROWS_AS(Rational::parse(""), tl::Error);
}

TEST_CASE("rational string form") {
    CHECK(Rational(3, 2).str() == "3/2");
    CHECK(Rational(-3, 2).str() == "-3/2");
    CHECK(Rational(4, 2).str() == "2");
    CHECK(Rational(0).str() == "0");
    CHECK(Rational(1, 2).to_double() == doctest::Approx(0.5));
}

TEST_CASE("overflow raises instead of degrading") {
    Rational big = Rational(10).pow(37);
    CHECK_THROWS_AS(big * big, tl::Error);
    CHECK_NOTHROW(Rational(10).pow(30) * Rational(10).pow(7));
}

TEST_CASE("division by zero") {
    CHECK_THROWS_AS(Rational(1) / Rational(0), tl::Error);
}
