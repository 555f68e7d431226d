#include <doctest.h>

#include <set>

#include "cubetower/branched.hpp"
#include "cubetower/chains.hpp"

using namespace cubetower;

TEST_CASE("plane classification partitions the 5x5 grid") {
    int center = 0, ring = 0, outer = 0;
    for (int u = 0; u < 5; ++u)
        for (int v = 0; v < 5; ++v) {
            switch (classify_plane_cell(u, v)) {
                case PlaneClass::Center: ++center; break;
                case PlaneClass::Ring: ++ring; break;
                case PlaneClass::Outer: ++outer; break;
            }
        }
    CHECK(center == 1);
    CHECK(ring == 8);
    CHECK(outer == 16);
    CHECK(center + ring + outer == 25);
    CHECK(classify_plane_cell(2, 2) == PlaneClass::Center);
}

TEST_CASE("ring cycle is a counterclockwise 8-cycle from (1,1)") {
    const auto& cyc = ring_cycle();
    CHECK(cyc[0] == std::make_pair(1, 1));
    CHECK(cyc[7] == std::make_pair(1, 2));
    for (int i = 0; i < 8; ++i) {
        auto [u0, v0] = cyc[i];
        auto [u1, v1] = cyc[(i + 1) % 8];
        CHECK(std::abs(u0 - u1) + std::abs(v0 - v1) == 1);  // grid-adjacent
        CHECK(classify_plane_cell(u0, v0) == PlaneClass::Ring);
        CHECK(ring_index(u0, v0) == i);
    }
}

TEST_CASE("ring double cover is a connected 16-cycle with nontrivial monodromy") {
    RingDoubleCover rdc;
    int node = 0;
    std::set<int> seen;
    for (int step = 0; step < 16; ++step) {
        CHECK(seen.insert(node).second);
        node = rdc.next(node);
    }
    CHECK(node == 0);           // closes after 16 steps
    CHECK(seen.size() == 16);   // connected single cycle
    // covering map is 2-to-1 and a within-sheet walk returns on the other sheet
    int half = 0;
    for (int step = 0; step < 8; ++step) half = rdc.next(half);
    CHECK(RingDoubleCover{}.project(half) == 0);
    CHECK(half != 0);  // no 8-cycle section
}

TEST_CASE("branched cover of the unit square") {
    CubeComplex x0 = new_unit_cube(2, 5);
    BranchedCoverResult r = branched_cover(x0, PlanePair{1, 2});
    r.cover->validate();
    CHECK(r.cover->cell_count() == 33);  // 25 + 8
    CHECK(r.cover->total_measure() == Rat(1));
    check_valid(r.projection);
    CHECK(check_measures(r.projection).pushforward_exact);

    // ring lifts carry half the parent density
    int halved = 0;
    for (CellId c = 0; c < 33; ++c)
        if (r.cover->cell(c).weight == Rat(1, 2)) ++halved;
    CHECK(halved == 16);

    // branch faces carry one unbranched facet plus the two sheet lifts
    int branch_faces = 0;
    for (FaceId f = 0; f < static_cast<FaceId>(r.cover->face_count()); ++f)
        if (r.cover->face(f).incident.size() == 3) ++branch_faces;
    CHECK(branch_faces == 16);  // 4 inner + 12 outer circle edges

    CHECK(link_bound(*r.cover) <= 8);  // at most doubled
    CHECK(check_gallery_connected(*r.cover).connected);
}

TEST_CASE("branched cover in three dimensions") {
    CubeComplex x0 = new_unit_cube(3, 5);
    BranchedCoverResult r = branched_cover(x0, PlanePair{1, 2});
    r.cover->validate();
    CHECK(r.cover->cell_count() == 165);  // 5^3 + 8*5
    CHECK(r.cover->total_measure() == Rat(1));
    CHECK(check_measures(r.projection).pushforward_exact);
    CHECK(mass(boundary(fundamental_chain(*r.cover))) == Rat(6));
}

TEST_CASE("system growth and witnesses") {
    std::vector<BuildStep> schedule(3, BuildStep{PlanePair{1, 2}});
    InverseSystem s = InverseSystem::build(new_unit_cube(2, 5), schedule);
    CHECK(s.level(0).cell_count() == 1);
    CHECK(s.level(1).cell_count() == 33);
    CHECK(s.level(2).cell_count() == 1089);
    CHECK(s.level(3).cell_count() == 35937);
    for (int i = 0; i <= 3; ++i) CHECK(s.level(i).total_measure() == Rat(1));

    // fibers of each projection have size 1 or 2, doubled exactly over the
    // scheduled ring cells
    for (int i = 0; i < 3; ++i) {
        auto fibers = s.projection(i).fibers();
        long doubled = 0;
        for (const auto& f : fibers) {
            CHECK(f.size() >= 1);
            CHECK(f.size() <= 2);
            if (f.size() == 2) ++doubled;
        }
        CHECK(doubled == static_cast<long>(8 * s.level(i).cell_count()));
    }
}

TEST_CASE("composite maps act as the identity on anchors") {
    std::vector<BuildStep> schedule(2, BuildStep{PlanePair{1, 2}});
    InverseSystem s = InverseSystem::build(new_unit_cube(2, 5), schedule);
    for (int i = 1; i <= 2; ++i) {
        const CellMap& comp = s.composite(i, 0);
        for (CellId c = 0; c < static_cast<CellId>(s.level(i).cell_count()); ++c) {
            auto a = s.level(i).anchor(c);
            auto b = comp.target->anchor(comp.assign[c]);
            CHECK(std::equal(a.begin(), a.end(), b.begin()));
        }
    }
    // composite through chained single steps agrees with the index lookup
    const CellMap& pi1 = s.projection(1);  // X2 -> X1^(1)
    const CubeComplex& x1s = s.subdivided_level(1);
    const CellMap& comp20 = s.composite(2, 0);
    for (CellId c = 0; c < static_cast<CellId>(s.level(2).cell_count()); ++c) {
        CellId via = pi1.assign[c];
        // X1^(1) cell -> its X1 parent -> through pi_0 into X0^(1) -> anchor match
        CellId x1_parent = x1s.parent_cell(via);
        CHECK(s.ancestor_cell(2, c, 0) == 0);
        CHECK(s.ancestor_cell(2, c, 1) == x1_parent);
        (void)comp20;
    }
}

TEST_CASE("verify_wais passes on the construction and localizes corruption") {
    std::vector<BuildStep> schedule(2, BuildStep{PlanePair{1, 2}});
    InverseSystem s = InverseSystem::build(new_unit_cube(2, 5), schedule);
    WaisReport rep = verify_wais(s);
    CHECK(rep.pass);
    CHECK(rep.first_failure().empty());

    InverseSystem bad = InverseSystem::build(new_unit_cube(2, 5), schedule);
    bad.corrupt_ring_weight(1);
    WaisReport brep = verify_wais(bad);
    CHECK_FALSE(brep.pass);
    bool meas_or_flux = false;
    for (const auto& c : brep.checks)
        if (!c.pass && (c.axiom == "IMeas" || c.axiom == "IFlux")) meas_or_flux = true;
    CHECK(meas_or_flux);
}

TEST_CASE("identity system of pure subdivisions is a WAIS") {
    std::vector<BuildStep> schedule(2);  // no planes: subdivision-only
    InverseSystem s = InverseSystem::build(new_unit_cube(2, 5), schedule);
    CHECK(s.level(2).cell_count() == 625);
    WaisReport rep = verify_wais(s);
    CHECK(rep.pass);
}

TEST_CASE("mixed schedule with a transverse plane in three dimensions") {
    std::vector<BuildStep> schedule = {BuildStep{PlanePair{1, 2}}, BuildStep{PlanePair{1, 3}}};
    InverseSystem s = InverseSystem::build(new_unit_cube(3, 5), schedule);
    CHECK(s.level(1).cell_count() == 165);
    CHECK(s.level(2).cell_count() == 165 * 165);
    WaisReport rep = verify_wais(s);
    CHECK(rep.pass);
}
