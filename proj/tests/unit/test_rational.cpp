#include <doctest.h>

#include "varjet/rational.hpp"

using varjet::Rational;

TEST_SUITE_BEGIN("rational");

TEST_CASE("reduction and sign normalization") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(0, -7).den() == 1);
}

TEST_CASE("field operations") {
    const Rational a(3, 4), b(-5, 6);
    CHECK(a + b == Rational(-1, 12));
    CHECK(a - b == Rational(19, 12));
    CHECK(a * b == Rational(-5, 8));
    CHECK(a / b == Rational(-9, 10));
    CHECK(-a == Rational(-3, 4));
    CHECK(a.reciprocal() == Rational(4, 3));
    CHECK(Rational(-2, 3).reciprocal() == Rational(-3, 2));
}

TEST_CASE("powers") {
    CHECK(Rational(2, 3).pow(3) == Rational(8, 27));
    CHECK(Rational(2, 3).pow(0) == Rational(1));
    CHECK(Rational(2, 3).pow(-2) == Rational(9, 4));
}

TEST_CASE("ordering and printing") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
    CHECK(Rational(7).str() == "7");
    CHECK(Rational(-7, 2).str() == "-7/2");
}

TEST_CASE("overflow is detected, not wrapped") {
    const long long big = 4611686018427387904LL;  // 2^62
    CHECK_THROWS_AS(Rational(big) * Rational(big), std::overflow_error);
    CHECK_THROWS_AS(Rational(big, 1) + Rational(big, 1), std::overflow_error);
}

TEST_CASE("division by zero") {
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_SUITE_END();
