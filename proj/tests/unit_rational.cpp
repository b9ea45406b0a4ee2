#include <catch2/catch_amalgamated.hpp>

#include "ultralab/padic.hpp"
#include "ultralab/rational.hpp"

using namespace ultralab;

TEST_CASE("rational arithmetic is exact and canonical") {
    Rational a(6, 8);
    CHECK(a.numerator() == 3);
    CHECK(a.denominator() == 4);
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK((Rational(2, 3) * Rational(9, 4)) == Rational(3, 2));
    CHECK((Rational(1) / Rational(3)).str() == "1/3");
    CHECK(Rational(-4, -6) == Rational(2, 3));
    CHECK(Rational(4, -6) == Rational(-2, 3));
    CHECK(Rational(0, 7).str() == "0");
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(abs(Rational(-5, 7)) == Rational(5, 7));
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("rational parsing round-trips the serialized forms") {
    CHECK(Rational::parse("7") == Rational(7));
    CHECK(Rational::parse("-3/9") == Rational(-1, 3));
    CHECK(Rational::parse("22/7").str() == "22/7");
    CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("x"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
}

TEST_CASE("extended values order below infinity") {
    Extended inf = Extended::infinity();
    CHECK(Extended(Rational(5)) < inf);
    CHECK(inf == Extended::infinity());
    CHECK(inf.str() == "inf");
    CHECK_THROWS_AS(inf.finite(), std::domain_error);
    CHECK(Extended(Rational(1, 2)).finite() == Rational(1, 2));
}

TEST_CASE("p-adic absolute value") {
    PAdicAbs abs3(3);
    // |p|_p = 1/p
    CHECK(abs3.abs(Rational(3)) == Rational(1, 3));
    CHECK(PAdicAbs(5).abs(Rational(0)) == Rational(0));
    // v_3(9/2) = 2 by direct factorization
    CHECK(abs3.abs(Rational(9, 2)) == Rational(1, 9));
    CHECK(abs3.valuation(Rational(9, 2)) == 2);
    CHECK(abs3.abs(Rational(1, 27)) == Rational(27));
    CHECK(abs3.power(-2) == Rational(1, 9));
    CHECK_THROWS_AS(PAdicAbs(4), std::invalid_argument);
    CHECK_THROWS_AS(abs3.valuation(Rational(0)), std::domain_error);
    // strong triangle of the absolute value on a few values
    Rational x(7, 9), y(5, 3);
    CHECK(abs3.abs(x + y) <= max(abs3.abs(x), abs3.abs(y)));
}
