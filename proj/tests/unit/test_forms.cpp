#include <doctest.h>

#include <cmath>

#include "cubetower/forms.hpp"

using namespace cubetower;

TEST_CASE("volume form on the unit square") {
    CubeComplex x = new_unit_cube(2, 5);
    FormPack fp = coordinate_forms(x);
    CubicalChain t = fundamental_chain(x);
    CHECK(evaluate_on_form(t, fp, 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("f0 = x_1 against the volume form integrates to one half") {
    CubeComplex x = new_unit_cube(2, 5);
    FormPack fp = coordinate_forms(x);
    // replace f0 by the first coordinate
    fp.values[0] = fp.values[1];
    CubicalChain t = fundamental_chain(x);
    CHECK(evaluate_on_form(t, fp, 2) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("evaluation is invariant under subdivision refinement") {
    CubeComplex x = new_unit_cube(2, 5);
    CubeComplex y = subdivide(x, 1);
    FormPack fp = random_forms(x, 99);
    CubicalChain tx = fundamental_chain(x);
    CubicalChain ty = fundamental_chain(y);
    double vx = evaluate_on_form(tx, fp, 3);
    double vy = evaluate_on_form(ty, fp, 3, [&](CellId c) { return y.parent_cell(c); });
    CHECK(std::abs(vx - vy) <= 1e-12);
}

TEST_CASE("pullback compatibility through the branched projections") {
    std::vector<BuildStep> schedule(2, BuildStep{PlanePair{1, 2}});
    InverseSystem s = InverseSystem::build(new_unit_cube(2, 5), schedule);
    for (auto [k, i] : std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}}) {
        for (int trial = 0; trial < 5; ++trial) {
            FormPack fp = random_forms(s.level(k), 1000 + 17 * trial + k);
            CubicalChain nk = fundamental_chain(s.level(k));
            CubicalChain ni = fundamental_chain(s.level(i));
            double vk = evaluate_on_form(nk, fp, 3);
            double vi = evaluate_on_form(ni, fp, 3,
                                         [&](CellId c) { return s.ancestor_cell(i, c, k); });
            CHECK(std::abs(vk - vi) <= 1e-10);
        }
    }
}

TEST_CASE("host mismatch is rejected") {
    CubeComplex x = new_unit_cube(2, 5);
    CubeComplex y = subdivide(x, 1);
    FormPack fp = coordinate_forms(x);
    CubicalChain ty = fundamental_chain(y);
    CHECK_THROWS_AS(evaluate_on_form(ty, fp, 2), std::invalid_argument);
}
