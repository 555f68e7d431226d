#include <doctest.h>

#include <cmath>

#include "cubetower/metric.hpp"

using namespace cubetower;

TEST_CASE("unit square sampled at depth 0") {
    CubeComplex x = new_unit_cube(2, 5);
    FiniteMetricSpace fms = sample_metric(x, 0);
    CHECK(fms.points() == 4);
    auto m = fms.full_matrix();
    int ones = 0, diags = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            double d = m[a][b];
            if (std::abs(d - 1.0) < 1e-6) ++ones;
            if (std::abs(d - std::sqrt(2.0)) < 1e-6) ++diags;
        }
    CHECK(ones == 4);
    CHECK(diags == 2);
    // triangle inequality, exhaustively
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) CHECK(m[a][c] <= m[a][b] + m[b][c] + 1e-9);
}

TEST_CASE("distances are nonincreasing in sampling depth") {
    std::vector<BuildStep> schedule = {BuildStep{PlanePair{1, 2}}};
    InverseSystem s = InverseSystem::build(new_unit_cube(2, 5), schedule);
    const CubeComplex& x1 = s.level(1);
    ExplicitVertexGraph g0 = build_vertex_graph(x1, 0);
    ExplicitVertexGraph g1 = build_vertex_graph(x1, 1);
    ExplicitVertexGraph g2 = build_vertex_graph(x1, 2);
    // compare distances between coarse vertices under refinement
    auto lift = [&](const ExplicitVertexGraph& from, const ExplicitVertexGraph& to,
                    std::int32_t node) {
        CellId c;
        Local local;
        from.unpack(from.rep_point[node], c, local);
        long r = to.g / from.g;
        std::vector<std::int32_t> l2(from.host->n());
        for (int i = 0; i < from.host->n(); ++i) l2[i] = static_cast<std::int32_t>(local[i] * r);
        return to.node_at(c, l2);
    };
    std::vector<float> d0, d1, d2;
    g0.dijkstra(0, d0);
    g1.dijkstra(lift(g0, g1, 0), d1);
    g2.dijkstra(lift(g0, g2, 0), d2);
    for (std::int32_t v = 0; v < static_cast<std::int32_t>(g0.node_count()); ++v) {
        CHECK(d1[lift(g0, g1, v)] <= d0[v] + 1e-6);
        CHECK(d2[lift(g0, g2, v)] <= d1[lift(g0, g1, v)] + 1e-6);
    }
}

TEST_CASE("opposite corners of the square stay near sqrt(2) at depth >= 1") {
    CubeComplex y = subdivide(new_unit_cube(2, 5), 1);
    ExplicitVertexGraph g = build_vertex_graph(y, 1);
    std::vector<std::int32_t> lo = {0, 0}, hi(2, static_cast<std::int32_t>(g.g));
    std::vector<std::int32_t> lo_local = {0, 0};
    CellId corner_lo = 0, corner_hi = 24;  // (0,0) and (4,4) cells
    std::vector<float> dist;
    g.dijkstra(g.node_at(corner_lo, lo_local), dist);
    double d = dist[g.node_at(corner_hi, hi)];
    CHECK(d >= std::sqrt(2.0) - 1e-9);
    CHECK(d <= std::sqrt(2.0) * 1.09);  // king-move overshoot is below 9 percent
}

TEST_CASE("identity map has zero distortion") {
    std::vector<BuildStep> schedule = {BuildStep{}};
    InverseSystem s = InverseSystem::build(new_unit_cube(2, 5), schedule);
    DistortionReport rep = distortion(s.projection(0), 1);
    CHECK(rep.sup_diff == 0.0);
    DistortionReport ex = distortion_exact(s.projection(0), 1);
    CHECK(ex.sup_diff <= 1e-7);
}

TEST_CASE("sampled distortion matches the exhaustive oracle at level 1") {
    std::vector<BuildStep> schedule = {BuildStep{PlanePair{1, 2}}};
    InverseSystem s = InverseSystem::build(new_unit_cube(2, 5), schedule);
    DistortionOptions opts;
    opts.max_fiber_pairs = 600;
    opts.max_near_pairs = 50;
    DistortionReport sampled = distortion(s.projection(0), 1, opts);
    DistortionReport exact = distortion_exact(s.projection(0), 1);
    CHECK_FALSE(sampled.truncated);
    CHECK(sampled.sup_diff <= exact.sup_diff + 1e-6);
    CHECK(sampled.sup_diff >= exact.sup_diff * 0.999);  // structured sweep hits the extremizers
    // the doubled band is one fifth of the cell: distortion = 2 * half-band
    CHECK(exact.sup_diff == doctest::Approx(0.2).epsilon(0.05));
}

TEST_CASE("distortion decays by the subdivision factor across levels") {
    std::vector<BuildStep> schedule(2, BuildStep{PlanePair{1, 2}});
    InverseSystem s = InverseSystem::build(new_unit_cube(2, 5), schedule);
    DistortionReport d0 = distortion(s.projection(0), 1);
    DistortionReport d1 = distortion(s.projection(1), 1);
    CHECK(d1.sup_diff < d0.sup_diff / 4.0);
    CHECK(d0.ratio == doctest::Approx(d1.ratio).epsilon(0.25));
}

TEST_CASE("tap tower: exact factorization and decaying column") {
    std::vector<BuildStep> schedule(2, BuildStep{PlanePair{1, 2}});
    InverseSystem s = InverseSystem::build(new_unit_cube(2, 5), schedule);
    TapReport rep = tap_check(s, 2, 24, 32, 7);
    CHECK(rep.factorization_pass);
    CHECK(rep.rows.size() == 3);
    CHECK(rep.monotone);
    CHECK(rep.rows[2].distortion <= 1e-9);  // F_top is the identity
}

TEST_CASE("vertex graph guard") {
    CubeComplex y = subdivide(new_unit_cube(2, 5), 1);
    CHECK_THROWS_AS(static_cast<void>(build_vertex_graph(y, 3, 1000)), std::length_error);
}
