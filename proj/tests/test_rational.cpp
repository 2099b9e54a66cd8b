#include <doctest.h>

#include "kreeb/errors.hpp"
#include "kreeb/rational.hpp"

using namespace kreeb;

TEST_CASE("parse_rational accepts exact forms") {
    CHECK(parse_rational("3/2") == make_rat(3, 2));
    CHECK(parse_rational("-3/2") == make_rat(-3, 2));
    CHECK(parse_rational("7") == Rat(7));
    CHECK(parse_rational("+4/6") == make_rat(2, 3));
    CHECK(rat_str(parse_rational("4/6")) == "2/3");
    CHECK(rat_str(parse_rational("-8/2")) == "-4");
}

TEST_CASE("parse_rational rejects malformed input") {
    CHECK_THROWS_AS(parse_rational("1/0"), SchemaError);
    CHECK_THROWS_AS(parse_rational("1.5"), SchemaError);
    CHECK_THROWS_AS(parse_rational(""), SchemaError);
    CHECK_THROWS_AS(parse_rational("a/b"), SchemaError);
    CHECK_THROWS_AS(parse_rational("1/"), SchemaError);
    CHECK_THROWS_AS(parse_rational("--2"), SchemaError);
    CHECK_THROWS_AS(parse_rational("1/-2"), SchemaError);
}

TEST_CASE("mod1 reduces into [0,1)") {
    CHECK(mod1(make_rat(3, 2)) == make_rat(1, 2));
    CHECK(mod1(make_rat(-1, 4)) == make_rat(3, 4));
    CHECK(mod1(Rat(5)) == Rat(0));
    CHECK(mod1(make_rat(-7, 3)) == make_rat(2, 3));
    CHECK(mod1(make_rat(1, 2) + make_rat(1, 2)) == Rat(0));
}

TEST_CASE("denominator lcm") {
    CHECK(denominator_lcm({}) == 1);
    CHECK(denominator_lcm({make_rat(1, 2), make_rat(1, 3)}) == 6);
    CHECK(denominator_lcm({Rat(2), make_rat(5, 4), make_rat(1, 6)}) == 12);
}
