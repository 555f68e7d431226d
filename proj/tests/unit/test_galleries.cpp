#include <doctest.h>

#include "cubetower/galleries.hpp"

using namespace cubetower;

TEST_CASE("unit square has one maximal gallery per axis") {
    CubeComplex x = new_unit_cube(2, 5);
    for (int axis = 0; axis < 2; ++axis) {
        GallerySet gs = maximal_galleries(x, axis);
        CHECK(gs.galleries.size() == 1);
        CHECK(gs.galleries[0].cells.size() == 1);
    }
}

TEST_CASE("subdivided square has one gallery per row") {
    CubeComplex y = subdivide(new_unit_cube(2, 5), 1);
    GallerySet gs = maximal_galleries(y, 0);
    CHECK(gs.galleries.size() == 5);
    for (const Gallery& g : gs.galleries) CHECK(g.cells.size() == 5);
}

TEST_CASE("positive boundary sets on the level-1 branched complex") {
    std::vector<BuildStep> schedule = {BuildStep{PlanePair{1, 2}}};
    InverseSystem s = InverseSystem::build(new_unit_cube(2, 5), schedule);
    const CubeComplex& x1 = s.level(1);
    // grid interior, unbranched: single successor
    std::vector<std::int32_t> a = {0, 2};
    CellId left = x1.find_cell(a, ".");
    REQUIRE(left >= 0);
    auto succ = positive_boundary(x1, left, 0);
    // entering the ring row through the branch face: two successors
    CHECK(succ.size() == 2);
    Rat total(0);
    for (CellId c : succ) total += x1.cell(c).weight;
    CHECK(total == Rat(1));  // two halves
    // a cell whose high face is the domain boundary has no successors
    std::vector<std::int32_t> b = {4, 0};
    CellId last = x1.find_cell(b, ".");
    REQUIRE(last >= 0);
    CHECK(positive_boundary(x1, last, 0).empty());
    CHECK(negative_boundary(x1, last, 0).size() == 1);
}

TEST_CASE("level-1 gallery census and flow values") {
    std::vector<BuildStep> schedule = {BuildStep{PlanePair{1, 2}}};
    InverseSystem s = InverseSystem::build(new_unit_cube(2, 5), schedule);
    for (int axis = 0; axis < 2; ++axis) {
        GalleryLevel gl = gallery_measure(s, 1, axis);
        // rows 0,4: one gallery; rows 1,3: two sheet galleries; row 2: four
        CHECK(gl.set.galleries.size() == 10);
        std::map<std::string, int> histogram;
        for (const Rat& q : gl.q) ++histogram[rat_to_string(q)];
        CHECK(histogram["1"] == 2);
        CHECK(histogram["1/2"] == 4);
        CHECK(histogram["1/4"] == 4);
        CHECK(verify_decomposition(gl).pass);
    }
}

TEST_CASE("decomposition and pushforward hold exactly through level 2") {
    std::vector<BuildStep> schedule(2, BuildStep{PlanePair{1, 2}});
    InverseSystem s = InverseSystem::build(new_unit_cube(2, 5), schedule);
    for (int axis = 0; axis < 2; ++axis) {
        GalleryLevel g1 = gallery_measure(s, 1, axis);
        GalleryLevel g2 = gallery_measure(s, 2, axis);
        CHECK(verify_decomposition(g1).pass);
        CHECK(verify_decomposition(g2).pass);
        GalleryLevel fine = refine_gallery_measure(g1, s.subdivided_level(1));
        CHECK(verify_decomposition(fine).pass);
        GalleryPushforwardReport pf = check_pushforward_measure(g2, s.projection(1), fine);
        CHECK(pf.pass);
    }
}

TEST_CASE("corrupting one flow value is localized") {
    std::vector<BuildStep> schedule = {BuildStep{PlanePair{1, 2}}};
    InverseSystem s = InverseSystem::build(new_unit_cube(2, 5), schedule);
    GalleryLevel gl = gallery_measure(s, 1, 0);
    gl.q[3] += Rat(1, 9);
    DecompositionReport rep = verify_decomposition(gl);
    CHECK_FALSE(rep.pass);
    CHECK(rep.first_violation.has_value());
}

TEST_CASE("refinement inherits flow and commutes") {
    CubeComplex x = new_unit_cube(2, 5);
    GalleryLevel base = base_gallery_measure(x, 0);
    CHECK(base.set.galleries.size() == 1);
    CHECK(base.q[0] == Rat(1));

    CubeComplex x1 = subdivide(x, 1);
    CubeComplex x2 = subdivide(x, 2);
    GalleryLevel r1 = refine_gallery_measure(base, x1);
    CHECK(r1.set.galleries.size() == 5);
    for (const Rat& q : r1.q) CHECK(q == Rat(1));
    GalleryLevel r12 = refine_gallery_measure(r1, x2);
    GalleryLevel r2 = refine_gallery_measure(base, x2);
    CHECK(r12.set.galleries.size() == r2.set.galleries.size());
    r2.set.build_index();
    for (std::size_t i = 0; i < r12.set.galleries.size(); ++i) {
        int j = r2.set.find(r12.set.galleries[i].cells);
        REQUIRE(j >= 0);
        CHECK(r12.q[i] == r2.q[j]);
    }
}

TEST_CASE("galleries project to maximal galleries") {
    std::vector<BuildStep> schedule(2, BuildStep{PlanePair{1, 2}});
    InverseSystem s = InverseSystem::build(new_unit_cube(2, 5), schedule);
    GallerySet up = maximal_galleries(s.level(2), 1);
    GallerySet down = maximal_galleries(s.subdivided_level(1), 1);
    const CellMap& pi = s.projection(1);
    for (const Gallery& g : up.galleries) {
        std::vector<CellId> image;
        for (CellId c : g.cells) image.push_back(pi.assign[c]);
        CHECK(down.find(image) >= 0);
    }
}

TEST_CASE("enumeration overflow guard") {
    std::vector<BuildStep> schedule(2, BuildStep{PlanePair{1, 2}});
    InverseSystem s = InverseSystem::build(new_unit_cube(2, 5), schedule);
    CHECK_THROWS_AS(static_cast<void>(maximal_galleries(s.level(2), 0, 100)), std::overflow_error);
}
