#include <doctest.h>

#include "cubetower/branched.hpp"
#include "cubetower/cellmap.hpp"

using namespace cubetower;

namespace {

CellMap identity_map(const CubeComplex& x) {
    CellMap p;
    p.source = &x;
    p.target = &x;
    p.assign.resize(x.cell_count());
    for (CellId c = 0; c < static_cast<CellId>(x.cell_count()); ++c) p.assign[c] = c;
    return p;
}

}  // namespace

TEST_CASE("identity map is valid with trivial witnesses") {
    CubeComplex y = subdivide(new_unit_cube(2, 5), 1);
    CellMap p = identity_map(y);
    check_valid(p);
    CHECK(fiber_gallery_bound(p) == 1);
    MeasureReport mr = check_measures(p);
    CHECK(mr.pushforward_exact);
    CHECK(mr.c_mu_source == Rat(1));
}

TEST_CASE("branched projection: measures push forward exactly") {
    CubeComplex x0 = new_unit_cube(2, 5);
    BranchedCoverResult r = branched_cover(x0, PlanePair{1, 2});
    check_valid(r.projection);
    MeasureReport mr = check_measures(r.projection);
    CHECK(mr.pushforward_exact);
    CHECK(mr.c_mu_source == Rat(2));  // halved ring next to unit-density cells
    CHECK(fiber_gallery_bound(r.projection) == 2);

    SUBCASE("perturbing one weight breaks the pushforward") {
        for (CellId c = 0; c < static_cast<CellId>(r.cover->cell_count()); ++c) {
            if (r.cover->sheet_label(c) == "a") {
                r.cover->cell_mut(c).weight += Rat(1, 7);
                break;
            }
        }
        MeasureReport bad = check_measures(r.projection);
        CHECK_FALSE(bad.pushforward_exact);
        CHECK(bad.first_violation.has_value());
    }
}

namespace {

// a 1 x len row of unit cells
CubeComplex row_complex(int len) {
    CubeComplex x(2, 5, 1);
    auto s = x.intern_sheet("");
    for (int i = 0; i < len; ++i) {
        std::vector<std::int32_t> a = {i, 0};
        x.add_cell(a, Rat(1), 1, s);
    }
    x.add_face(0, {FacetRef{0, Side::Low}});
    for (int i = 0; i + 1 < len; ++i)
        x.add_face(0, {FacetRef{i, Side::High}, FacetRef{i + 1, Side::Low}});
    x.add_face(0, {FacetRef{len - 1, Side::High}});
    for (int i = 0; i < len; ++i) {
        x.add_face(1, {FacetRef{i, Side::Low}});
        x.add_face(1, {FacetRef{i, Side::High}});
    }
    x.finalize();
    return x;
}

}  // namespace

TEST_CASE("disconnected fiber is rejected") {
    // fiber {cells 0, 2} of a 3-row: separated by cell 1, dual-disconnected
    CubeComplex src = row_complex(3);
    CubeComplex tgt = row_complex(2);
    CellMap p;
    p.source = &src;
    p.target = &tgt;
    p.assign = {0, 1, 0};
    CHECK_THROWS_WITH_AS(static_cast<void>(fiber_gallery_bound(p)),
                         doctest::Contains("dual-disconnected"), std::runtime_error);
}
