#include <doctest.h>

#include "cubetower/rational.hpp"

using namespace cubetower;

TEST_CASE("rational wire format round trip") {
    CHECK(rat_to_string(Rat(1, 2)) == "1/2");
    CHECK(rat_to_string(Rat(3)) == "3");
    CHECK(rat_to_string(Rat(-5, 10)) == "-1/2");
    CHECK(rat_from_string("7/25") == Rat(7, 25));
    CHECK(rat_from_string("-4") == Rat(-4));
    CHECK_THROWS_AS(rat_from_string("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(rat_from_string("abc"), std::invalid_argument);
}

TEST_CASE("powers and sides") {
    CHECK(cell_side(5, 0) == Rat(1));
    CHECK(cell_side(5, 3) == Rat(1, 125));
    CHECK(rat_pow(Rat(2, 3), -2) == Rat(9, 4));
}
