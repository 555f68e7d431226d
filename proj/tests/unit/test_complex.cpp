#include <doctest.h>

#include "cubetower/complex.hpp"

using namespace cubetower;

TEST_CASE("unit cube") {
    CubeComplex x = new_unit_cube(2, 5);
    x.validate();
    CHECK(x.cell_count() == 1);
    CHECK(x.face_count() == 4);
    CHECK(x.total_measure() == Rat(1));
    CHECK(link_bound(x) == 1);
    auto conn = check_gallery_connected(x);
    CHECK(conn.connected);
    CHECK(conn.diameter == 0);

    CubeComplex c3 = new_unit_cube(3, 5);
    CHECK(c3.cell_count() == 1);
    CHECK(c3.face_count() == 6);
    CHECK(c3.total_measure() == Rat(1));

    CHECK_THROWS_AS(new_unit_cube(1, 5), std::invalid_argument);
    CHECK_THROWS_AS(new_unit_cube(2, 1), std::invalid_argument);
}

TEST_CASE("subdivision partitions the volume") {
    CubeComplex x = new_unit_cube(2, 5);
    CubeComplex y = subdivide(x, 1);
    y.validate();
    CHECK(y.cell_count() == 25);
    for (CellId c = 0; c < 25; ++c) CHECK(y.cell(c).weight == Rat(1));
    CHECK(y.total_measure() == Rat(1));
    CHECK(link_bound(y) == 4);
    auto conn = check_gallery_connected(y);
    CHECK(conn.connected);
    CHECK(conn.diameter == 8);  // Manhattan across the 5x5 dual grid
}

TEST_CASE("iterated subdivision equals one-shot subdivision") {
    CubeComplex x = new_unit_cube(2, 5);
    CubeComplex two_steps = subdivide(subdivide(x, 1), 1);
    CubeComplex one_shot = subdivide(x, 2);
    CHECK(two_steps.structurally_equal(one_shot));
    CHECK(one_shot.total_measure() == Rat(1));
}

TEST_CASE("subdivision in three dimensions conserves measure") {
    CubeComplex x = new_unit_cube(3, 5);
    CubeComplex y = subdivide(x, 1);
    y.validate();
    CHECK(y.cell_count() == 125);
    CHECK(y.total_measure() == Rat(1));
}

TEST_CASE("disconnected dual graph is reported") {
    // two cells with no shared face
    CubeComplex x(2, 5, 1);
    std::vector<std::int32_t> a0 = {0, 0}, a1 = {2, 2};
    auto s = x.intern_sheet("");
    CellId c0 = x.add_cell(a0, Rat(1), 1, s);
    CellId c1 = x.add_cell(a1, Rat(1), 1, s);
    for (int axis = 0; axis < 2; ++axis)
        for (CellId c : {c0, c1}) {
            x.add_face(axis, {FacetRef{c, Side::Low}});
            x.add_face(axis, {FacetRef{c, Side::High}});
        }
    x.finalize();
    CHECK_FALSE(check_gallery_connected(x).connected);
}

TEST_CASE("find_cell by anchor and sheet") {
    CubeComplex y = subdivide(new_unit_cube(2, 5), 1);
    std::vector<std::int32_t> a = {3, 4};
    CellId c = y.find_cell(a, "");
    REQUIRE(c >= 0);
    CHECK(std::equal(y.anchor(c).begin(), y.anchor(c).end(), a.begin()));
    std::vector<std::int32_t> bad = {9, 9};
    CHECK(y.find_cell(bad, "") == -1);
    CHECK(y.find_cell(a, "zz") == -1);
}
