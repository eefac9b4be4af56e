#include <catch2/catch_amalgamated.hpp>

#include "crnkit/polynomial.hpp"

using namespace crnkit;

TEST_CASE("rate expressions from the command line") {
    auto b = parse_polynomial("x^4");
    CHECK(b(3.0) == 81.0);
    auto d = parse_polynomial("x^2*(x-1)^2");
    CHECK(d(3.0) == 36.0);
    CHECK(d(1.0) == 0.0);
    auto c = parse_polynomial("2");
    CHECK(c(100.0) == 2.0);
    auto mixed = parse_polynomial("x*(x-1) + 3*x - 2");
    CHECK(mixed(4.0) == 4.0 * 3.0 + 12.0 - 2.0);
}

TEST_CASE("negation and nesting") {
    CHECK(parse_polynomial("-x + x")(5.0) == 0.0);
    CHECK(parse_polynomial("(x - 1)^3")(3.0) == 8.0);
    CHECK(parse_polynomial("((x))")(7.0) == 7.0);
}

TEST_CASE("degree and coefficients are exact") {
    auto p = parse_polynomial("x^2*(x-1)^2");  // x^4 - 2x^3 + x^2
    CHECK(p.degree() == 4);
    CHECK(p.coefficients() == std::vector<std::int64_t>{0, 0, 1, -2, 1});
}

TEST_CASE("malformed expressions are rejected") {
    CHECK_THROWS_AS(parse_polynomial(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_polynomial("x^"), std::invalid_argument);
    CHECK_THROWS_AS(parse_polynomial("x +"), std::invalid_argument);
    CHECK_THROWS_AS(parse_polynomial("(x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_polynomial("x y"), std::invalid_argument);
    CHECK_THROWS_AS(parse_polynomial("x^-2"), std::invalid_argument);
}
