#include <doctest.h>

#include <random>

#include "support/generators.hpp"
#include "varjet/parser.hpp"

using namespace varjet;
using testsupport::GenOptions;
using testsupport::random_polynomial;

namespace {

BundleSpec scalar1d() { return BundleSpec(1, {{"u", FieldKind::scalar}}); }

} // namespace

TEST_SUITE_BEGIN("parser");

TEST_CASE("grammar basics") {
    const BundleSpec b = scalar1d();
    const Expression half_ux2 = parse_expression("u[;1]^2 / 2", b);
    CHECK((half_ux2 - parse_expression("1/2*u[;1]*u[;1]", b)).is_zero());

    const BundleSpec b2 = BundleSpec(2, {{"g", FieldKind::symmetric2}});
    CHECK((parse_expression("det(g)", b2) -
           parse_expression("g[1,1]*g[2,2] - g[1,2]^2", b2))
              .is_zero());

    const BundleSpec b1 = BundleSpec(1, {{"g", FieldKind::symmetric2}});
    const Expression r = parse_expression("sqrtdet(g)^-1", b1);
    // semantically the reciprocal square root: r * sqrtdet = 1
    CHECK((r * Expression::from_atom(b1.root_atom(0)) -
           Expression::constant(Rational(1)))
              .is_zero());
}

TEST_CASE("symmetric components normalize to a <= b") {
    const BundleSpec b = BundleSpec(2, {{"g", FieldKind::symmetric2}});
    CHECK((parse_expression("g[2,1]", b) - parse_expression("g[1,2]", b)).is_zero());
    CHECK((parse_expression("g[2,1;2,1]", b) - parse_expression("g[1,2;1,2]", b)).is_zero());
}

TEST_CASE("derivative order is irrelevant in the written multi-index") {
    const BundleSpec b = BundleSpec(2, {{"u", FieldKind::scalar}});
    CHECK((parse_expression("u[;2,1]", b) - parse_expression("u[;1,2]", b)).is_zero());
}

TEST_CASE("unary minus and precedence") {
    const BundleSpec b = scalar1d();
    CHECK((parse_expression("-u[] + 2*u[]", b) - parse_expression("u[]", b)).is_zero());
    CHECK((parse_expression("2*u[]^2", b) -
           parse_expression("2*(u[]^2)", b)).is_zero());
    CHECK((parse_expression("(u[] + 1)^2", b) -
           parse_expression("u[]^2 + 2*u[] + 1", b)).is_zero());
}

TEST_CASE("division by monomials and determinants") {
    const BundleSpec b = BundleSpec(2, {{"g", FieldKind::symmetric2}});
    const Expression a = parse_expression("g[1,1;1] / (2*g[1,1])", b);
    CHECK((a * parse_expression("2*g[1,1]", b) - parse_expression("g[1,1;1]", b)).is_zero());

    const Expression d = parse_expression("g[2,2] / det(g)", b);
    CHECK((d - parse_expression("g[2,2]*sqrtdet(g)^-2", b)).is_zero());

    CHECK_THROWS_AS(parse_expression("1 / (g[1,1] + g[2,2])", b), ParseError);
    CHECK_THROWS_AS(parse_expression("1 / 0", b), ParseError);
}

TEST_CASE("signed and half-integral det powers") {
    const BundleSpec b = BundleSpec(2, {{"g", FieldKind::symmetric2}});
    CHECK((parse_expression("det(g)^(1/2)", b) - parse_expression("sqrtdet(g)", b)).is_zero());
    CHECK((parse_expression("det(g)^(-1) * det(g)", b) - parse_expression("1", b)).is_zero());
    CHECK((parse_expression("sqrtdet(g)^-2 * det(g)", b) - parse_expression("1", b)).is_zero());
    CHECK_THROWS_AS(parse_expression("sqrtdet(g)^(1/2)", b), ParseError);
}

TEST_CASE("inv expands through the adjugate") {
    const BundleSpec b = BundleSpec(2, {{"g", FieldKind::symmetric2}});
    CHECK((parse_expression("inv(g)[1,1]", b) -
           parse_expression("g[2,2]/det(g)", b)).is_zero());
    CHECK((parse_expression("inv(g)[1,2]", b) -
           parse_expression("-g[1,2]/det(g)", b)).is_zero());
}

TEST_CASE("errors carry positions and causes") {
    const BundleSpec b = scalar1d();
    CHECK_THROWS_AS(parse_expression("w[]", b), ParseError);
    CHECK_THROWS_AS(parse_expression("u[2]", b), ParseError);
    CHECK_THROWS_AS(parse_expression("u[;3]", b), ParseError);
    CHECK_THROWS_AS(parse_expression("u[;0]", b), ParseError);
    CHECK_THROWS_AS(parse_expression("u[;1", b), ParseError);
    CHECK_THROWS_AS(parse_expression("u[] +", b), ParseError);
    CHECK_THROWS_AS(parse_expression("u[]^-2", b), ParseError);
    CHECK_THROWS_AS(parse_expression("sqrtdet(u)", b), ParseError);

    try {
        parse_expression("u[] + w[]", b);
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.position() == 6);
    }
}

TEST_CASE("parse-print roundtrip on random expressions") {
    std::mt19937 rng(4242);
    const BundleSpec b = BundleSpec(
        2, {{"u", FieldKind::scalar}, {"A", FieldKind::covector}, {"g", FieldKind::symmetric2}});
    for (int k = 0; k < 120; ++k) {
        Expression e = random_polynomial(rng, b, GenOptions{2, 3, 5, 2});
        if (k % 3 == 0) e = e * Expression::from_atom(b.root_atom(2), -1);
        if (k % 7 == 0) e = e * parse_expression("inv(g)[1,2]", b);
        const Expression back = parse_expression(to_string(e, b), b);
        CHECK((back - e).is_zero());
    }
}

TEST_CASE("printing is deterministic and canonical") {
    const BundleSpec b = scalar1d();
    CHECK(to_string(parse_expression("u[;1]*2/4", b), b) == "1/2*u[;1]");
    CHECK(to_string(parse_expression("-u[;1,1]", b), b) == "-u[;1,1]");
    CHECK(to_string(Expression::zero(), b) == "0");
    CHECK(to_string(parse_expression("u[] - u[]", b), b) == "0");
}

TEST_SUITE_END();
