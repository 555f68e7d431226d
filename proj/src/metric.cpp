#include "cubetower/metric.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cubetower {

FiniteMetricSpace::FiniteMetricSpace(std::shared_ptr<const ExplicitVertexGraph> graph)
    : graph_(std::move(graph)) {}

std::vector<float> FiniteMetricSpace::row(std::int32_t p) const {
    std::vector<float> dist;
    graph_->dijkstra(p, dist);
    return dist;
}

double FiniteMetricSpace::distance(std::int32_t a, std::int32_t b) const { return row(a)[b]; }

std::vector<std::vector<float>> FiniteMetricSpace::full_matrix(std::size_t max_points) const {
    if (points() > max_points)
        throw std::length_error("distance matrix guard: " + std::to_string(points()) + " points");
    std::vector<std::vector<float>> m(points());
    std::vector<std::int32_t> all(points());
    for (std::size_t i = 0; i < points(); ++i) all[i] = static_cast<std::int32_t>(i);
    graph_->dijkstra_batch(all, default_exec(),
                           [&](std::int64_t i, const std::vector<float>& dist) { m[i] = dist; });
    return m;
}

std::string FiniteMetricSpace::label(std::int32_t p) const {
    CellId c;
    Local local;
    graph_->unpack(graph_->rep_point[p], c, local);
    std::ostringstream os;
    std::vector<std::int64_t> fc;
    graph_->fine_coords(p, fc);
    for (std::size_t i = 0; i < fc.size(); ++i) os << (i ? "," : "") << fc[i];
    os << "/" << graph_->host->sheet_label(c);
    return os.str();
}

FiniteMetricSpace sample_metric(const CubeComplex& x, int depth, std::size_t max_points) {
    auto graph = std::make_shared<ExplicitVertexGraph>(build_vertex_graph(x, depth, max_points));
    return FiniteMetricSpace(std::move(graph));
}

namespace {

std::vector<std::pair<CellId, CellId>> doubled_fibers(const CellMap& pi) {
    std::vector<std::vector<CellId>> fib = pi.fibers();
    std::vector<std::pair<CellId, CellId>> out;
    for (const auto& f : fib)
        for (std::size_t i = 0; i + 1 < f.size(); ++i)
            for (std::size_t j = i + 1; j < f.size(); ++j) out.emplace_back(f[i], f[j]);
    return out;
}

}  // namespace

DistortionReport distortion(const CellMap& pi, int depth, const DistortionOptions& opts) {
    const CubeComplex& src = *pi.source;
    const CubeComplex& tgt = *pi.target;
    const int n = src.n();
    ImplicitVertexGraph gs = make_implicit_graph(src, depth);
    ImplicitVertexGraph gt = make_implicit_graph(tgt, depth);
    const long g = gs.g;
    const double side = rat_to_double(src.side_length());
    const double radius = opts.radius_factor * side;

    DistortionReport rep;
    rep.scale = side * src.m();  // m^-(level-1)

    auto fiber_pairs = doubled_fibers(pi);
    std::mt19937_64 rng(opts.seed);
    std::vector<std::int32_t> local(n);

    auto run_fiber_pair = [&](CellId a, CellId b, std::span<const std::int32_t> loc) {
        std::uint64_t u = gs.canonical(a, loc);
        std::uint64_t v = gs.canonical(b, loc);
        if (u == v) return;
        bool settled = false;
        double d = gs.truncated_distance(u, v, radius, settled);
        if (!settled) rep.truncated = true;
        rep.sup_diff = std::max(rep.sup_diff, d);  // image vertices coincide: d_tgt = 0
        ++rep.pairs_checked;
    };

    if (!fiber_pairs.empty()) {
        // structured sweep: grid mid-lines of the first few doubled pairs hit
        // the extremal positions (farthest from the branch circles)
        std::size_t structured = std::min<std::size_t>(fiber_pairs.size(), 4);
        for (std::size_t p = 0; p < structured; ++p) {
            auto [a, b] = fiber_pairs[p];
            for (int axis = 0; axis < std::min(n, 2); ++axis) {
                for (long j = 0; j <= g; ++j) {
                    std::fill(local.begin(), local.end(), static_cast<std::int32_t>(g / 2));
                    local[axis] = static_cast<std::int32_t>(j);
                    run_fiber_pair(a, b, local);
                }
            }
        }
        for (std::size_t s = 0; s < opts.max_fiber_pairs; ++s) {
            auto [a, b] = fiber_pairs[rng() % fiber_pairs.size()];
            for (int i = 0; i < n; ++i) local[i] = static_cast<std::int32_t>(rng() % (g + 1));
            run_fiber_pair(a, b, local);
        }
    }

    // near pairs across distinct cells: d_src - d_tgt, both truncated searches
    const double radius2 = 2 * radius;
    for (std::size_t s = 0; s < opts.max_near_pairs; ++s) {
        CellId c1 = static_cast<CellId>(rng() % src.cell_count());
        auto nb = src.neighbors(c1);
        CellId c2 = nb.empty() ? c1 : nb[rng() % nb.size()];
        std::vector<std::int32_t> l1(n), l2(n);
        for (int i = 0; i < n; ++i) {
            l1[i] = static_cast<std::int32_t>(rng() % (g + 1));
            l2[i] = static_cast<std::int32_t>(rng() % (g + 1));
        }
        std::uint64_t u = gs.canonical(c1, l1), v = gs.canonical(c2, l2);
        if (u == v) continue;
        bool s1 = false, s2 = false;
        double ds = gs.truncated_distance(u, v, radius2, s1);
        CellId uc, vc;
        Local ul, vl;
        gs.unpack(u, uc, ul);
        gs.unpack(v, vc, vl);
        std::uint64_t iu = gt.canonical(pi.assign[uc], std::span<const std::int32_t>(ul.data(), n));
        std::uint64_t iv = gt.canonical(pi.assign[vc], std::span<const std::int32_t>(vl.data(), n));
        double dt = iu == iv ? 0.0 : gt.truncated_distance(iu, iv, radius2, s2);
        if (!s1 || (iu != iv && !s2)) continue;  // outside the window, skip
        rep.sup_diff = std::max(rep.sup_diff, ds - dt);
        ++rep.pairs_checked;
    }
    rep.ratio = rep.scale > 0 ? rep.sup_diff / rep.scale : 0.0;
    return rep;
}

DistortionReport distortion_exact(const CellMap& pi, int depth, std::size_t max_points) {
    const CubeComplex& src = *pi.source;
    const CubeComplex& tgt = *pi.target;
    ExplicitVertexGraph gs = build_vertex_graph(src, depth, max_points);
    ExplicitVertexGraph gt = build_vertex_graph(tgt, depth, max_points);
    const int n = src.n();
    std::vector<std::int32_t> image(gs.node_count());
    for (std::size_t u = 0; u < gs.node_count(); ++u) {
        CellId c;
        Local local;
        gs.unpack(gs.rep_point[u], c, local);
        image[u] = gt.node_at(pi.assign[c], std::span<const std::int32_t>(local.data(), n));
    }
    DistortionReport rep;
    rep.scale = rat_to_double(src.side_length()) * src.m();
    std::vector<double> sup_per(gs.node_count(), 0.0);
    std::vector<std::int32_t> all(gs.node_count());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::int32_t>(i);
    parallel_for(static_cast<std::int64_t>(gs.node_count()), [&](std::int64_t u) {
        thread_local std::vector<float> ds, dt;
        gs.dijkstra(static_cast<std::int32_t>(u), ds);
        gt.dijkstra(image[u], dt);
        double best = 0.0;
        for (std::size_t v = 0; v < gs.node_count(); ++v)
            best = std::max(best, static_cast<double>(ds[v]) - dt[image[v]]);
        sup_per[u] = best;
    });
    for (double v : sup_per) rep.sup_diff = std::max(rep.sup_diff, v);
    rep.pairs_checked = static_cast<long>(gs.node_count() * gs.node_count());
    rep.ratio = rep.sup_diff / rep.scale;
    return rep;
}

TapReport tap_check(const InverseSystem& s, int i_top, std::size_t sources,
                    std::size_t targets_per_source, std::uint64_t seed) {
    TapReport rep;
    const CubeComplex& top = s.level(i_top);
    ExplicitVertexGraph gtop = build_vertex_graph(top, 0);
    const int n = top.n();

    std::mt19937_64 rng(seed);
    std::vector<std::int32_t> srcs;
    for (std::size_t i = 0; i < sources; ++i)
        srcs.push_back(static_cast<std::int32_t>(rng() % gtop.node_count()));
    std::vector<std::vector<std::int32_t>> tgts(srcs.size());
    for (auto& v : tgts)
        for (std::size_t i = 0; i < targets_per_source; ++i)
            v.push_back(static_cast<std::int32_t>(rng() % gtop.node_count()));

    std::vector<std::vector<float>> top_rows(srcs.size());
    gtop.dijkstra_batch(srcs, default_exec(),
                        [&](std::int64_t i, const std::vector<float>& d) { top_rows[i] = d; });

    for (int lvl = 0; lvl <= i_top; ++lvl) {
        TapRow row;
        row.level = lvl;
        row.scale = rat_to_double(cell_side(top.m(), lvl));
        const int k = i_top - lvl;
        const CubeComplex& xn = s.level(lvl);
        ExplicitVertexGraph gn = build_vertex_graph(xn, k);
        long g = gn.g;
        // map top vertices through F_n = pi_{i_top, n}
        const CellMap* comp = lvl < i_top ? &s.composite(i_top, lvl) : nullptr;
        auto map_node = [&](std::int32_t u) -> std::int32_t {
            CellId c;
            Local local;
            gtop.unpack(gtop.rep_point[u], c, local);
            CellId base;
            std::vector<std::int32_t> ln(n);
            if (lvl == i_top) {
                base = c;
                for (int i = 0; i < n; ++i) ln[i] = local[i];
            } else {
                CellId t = comp->assign[c];
                base = comp->target->parent_cell(t);
                auto at = top.anchor(c);
                auto ab = xn.anchor(base);
                for (int i = 0; i < n; ++i)
                    ln[i] = static_cast<std::int32_t>(at[i] - ab[i] * g + local[i]);
            }
            return gn.node_at(base, ln);
        };
        double sup = 0.0;
        for (std::size_t si = 0; si < srcs.size(); ++si) {
            std::vector<float> dn;
            gn.dijkstra(map_node(srcs[si]), dn);
            for (std::int32_t v : tgts[si]) {
                double dtop = top_rows[si][v];
                double dlow = dn[map_node(v)];
                sup = std::max(sup, std::abs(dtop - dlow));
            }
        }
        row.distortion = sup;
        // exact commuting factorization on cells: F_n = pi_n o F_{n+1}
        row.factorization_exact = true;
        if (lvl < i_top) {
            for (CellId c = 0; c < static_cast<CellId>(top.cell_count()); ++c) {
                CellId p1 = s.ancestor_cell(i_top, c, lvl);
                CellId b2 = s.ancestor_cell(i_top, c, lvl + 1);
                CellId q2 = s.subdivided_level(lvl).parent_cell(s.projection(lvl).assign[b2]);
                if (p1 != q2) {
                    row.factorization_exact = false;
                    rep.factorization_pass = false;
                    break;
                }
            }
        }
        rep.rows.push_back(row);
    }
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        if (rep.rows[i].distortion > rep.rows[i - 1].distortion + 1e-9) rep.monotone = false;
    return rep;
}

}  // namespace cubetower
