#include <doctest.h>

#include "toricstab/errors.hpp"
#include "toricstab/rational.hpp"

using namespace toricstab;

TEST_CASE("parse and format rationals") {
    CHECK(parse_rational("3") == 3);
    CHECK(parse_rational("-4/6") == Rational(-2, 3));
    CHECK(format_rational(Rational(-4, 6)) == "-2/3");
    CHECK(format_rational(Rational(10, 5)) == "2");
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("abc"), Error);
    CHECK_THROWS_AS(parse_rational(""), Error);
    CHECK_THROWS_AS(parse_rational("1.5"), Error);
}

TEST_CASE("from_double is exact") {
    CHECK(from_double(0.5) == Rational(1, 2));
    CHECK(from_double(-3.0) == -3);
    CHECK(to_double(from_double(0.1)) == 0.1);
    CHECK(from_double(0.1) != Rational(1, 10));
}

TEST_CASE("exact linear algebra") {
    RationalMatrix m{{Rational(1), Rational(2)}, {Rational(3), Rational(4)}};
    CHECK(determinant(m) == -2);
    CHECK(rank(m) == 2);
    CHECK(rank({{Rational(1), Rational(2)}, {Rational(2), Rational(4)}}) == 1);
    auto x = solve(m, {Rational(5), Rational(6)});
    REQUIRE(x);
    CHECK((*x)[0] == -4);
    CHECK((*x)[1] == Rational(9, 2));
    CHECK_FALSE(solve({{Rational(1), Rational(2)}, {Rational(2), Rational(4)}}, {Rational(1), Rational(1)}));
}

TEST_CASE("exact_sqrt and gcd") {
    CHECK(*exact_sqrt(Rational(9, 4)) == Rational(3, 2));
    CHECK_FALSE(exact_sqrt(Rational(2)));
    CHECK(gcd_of({4, -6, 8}) == 2);
    CHECK(gcd_of({1, 0}) == 1);
}
