#include "cubetower/cellmap.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace cubetower {

FaceId CellMap::face_image(FaceId f) const {
    const Face& face = source->face(f);
    const FacetRef& fr = face.incident.front();
    return target->facet_face(assign[fr.cell], face.axis, fr.side);
}

std::vector<std::vector<CellId>> CellMap::fibers() const {
    std::vector<std::vector<CellId>> out(target->cell_count());
    for (CellId c = 0; c < static_cast<CellId>(source->cell_count()); ++c)
        out[assign[c]].push_back(c);
    return out;
}

void check_valid(const CellMap& p) {
    const CubeComplex& src = *p.source;
    const CubeComplex& tgt = *p.target;
    if (p.assign.size() != src.cell_count()) throw std::runtime_error("assignment size mismatch");
    if (src.level() != tgt.level())
        throw std::runtime_error("cellular map requires equal cell side on both ends");
    std::vector<bool> hit(tgt.cell_count(), false);
    for (CellId c = 0; c < static_cast<CellId>(src.cell_count()); ++c) {
        CellId t = p.assign[c];
        if (t < 0 || t >= static_cast<CellId>(tgt.cell_count()))
            throw std::runtime_error("assignment out of range at cell " + std::to_string(c));
        hit[t] = true;
        auto a = src.anchor(c), b = tgt.anchor(t);
        if (!std::equal(a.begin(), a.end(), b.begin()))
            throw std::runtime_error("anchor incompatibility at cell " + std::to_string(c));
    }
    if (!std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }))
        throw std::runtime_error("map is not surjective onto target cells");
    // Face preservation: all facets of one source face land on one target face.
    for (FaceId f = 0; f < static_cast<FaceId>(src.face_count()); ++f) {
        const Face& face = src.face(f);
        FaceId t0 = tgt.facet_face(p.assign[face.incident.front().cell], face.axis,
                                   face.incident.front().side);
        for (const FacetRef& fr : face.incident) {
            if (tgt.facet_face(p.assign[fr.cell], face.axis, fr.side) != t0)
                throw std::runtime_error("face image inconsistent at source face " + std::to_string(f));
        }
    }
}

namespace {

Rat adjacency_ratio_witness(const CubeComplex& x) {
    Rat best(1);
    for (FaceId f = 0; f < static_cast<FaceId>(x.face_count()); ++f) {
        const auto& inc = x.face(f).incident;
        for (std::size_t i = 0; i < inc.size(); ++i)
            for (std::size_t j = 0; j < inc.size(); ++j) {
                if (i == j) continue;
                Rat r = x.measure(inc[i].cell) / x.measure(inc[j].cell);
                if (r > best) best = r;
            }
    }
    return best;
}

}  // namespace

MeasureReport check_measures(const CellMap& p) {
    MeasureReport rep;
    const CubeComplex& src = *p.source;
    const CubeComplex& tgt = *p.target;
    std::vector<Rat> pushed(tgt.cell_count(), Rat(0));
    for (CellId c = 0; c < static_cast<CellId>(src.cell_count()); ++c)
        pushed[p.assign[c]] += src.measure(c);
    rep.pushforward_exact = true;
    for (CellId t = 0; t < static_cast<CellId>(tgt.cell_count()); ++t) {
        if (pushed[t] != tgt.measure(t)) {
            rep.pushforward_exact = false;
            rep.first_violation = t;
            rep.detail = "pushforward mismatch at target cell " + std::to_string(t) + ": got " +
                         rat_to_string(pushed[t]) + ", expected " + rat_to_string(tgt.measure(t));
            break;
        }
    }
    rep.c_mu_source = adjacency_ratio_witness(src);
    rep.c_mu_target = adjacency_ratio_witness(tgt);
    return rep;
}

int fiber_gallery_bound(const CellMap& p) {
    const CubeComplex& src = *p.source;
    auto fibers = p.fibers();
    int bound = 0;
    std::vector<int> mark(src.cell_count(), -1);
    for (std::size_t t = 0; t < fibers.size(); ++t) {
        const auto& fib = fibers[t];
        if (fib.empty()) continue;
        for (CellId c : fib) mark[c] = static_cast<int>(t);
        // BFS within the fiber from each member (fibers are tiny).
        int diam = 0;
        for (CellId start : fib) {
            std::deque<std::pair<CellId, int>> queue{{start, 0}};
            std::vector<std::pair<CellId, int>> seen{{start, 0}};
            auto dist_of = [&](CellId c) -> int* {
                for (auto& pr : seen)
                    if (pr.first == c) return &pr.second;
                return nullptr;
            };
            std::size_t reached = 1;
            while (!queue.empty()) {
                auto [c, d] = queue.front();
                queue.pop_front();
                diam = std::max(diam, d);
                for (CellId nb : src.neighbors(c)) {
                    if (mark[nb] != static_cast<int>(t) || dist_of(nb)) continue;
                    seen.emplace_back(nb, d + 1);
                    queue.emplace_back(nb, d + 1);
                    ++reached;
                }
            }
            if (reached != fib.size())
                throw std::runtime_error("fiber over target cell " + std::to_string(t) +
                                         " is dual-disconnected (violates the gallery axiom)");
        }
        bound = std::max(bound, diam + 1);
        for (CellId c : fib) mark[c] = -1;
    }
    return bound;
}

CellMap subdivided_map(const CellMap& p, const CubeComplex& source_k, const CubeComplex& target_k) {
    if (!source_k.is_subdivision() || !target_k.is_subdivision())
        throw std::invalid_argument("subdivided_map needs subdivision complexes");
    CellMap out;
    out.source = &source_k;
    out.target = &target_k;
    out.assign.resize(source_k.cell_count());
    // subdivide() orders cells old-cell-major with lexicographic offsets, and
    // the induced map keeps local offsets, so the assignment is arithmetic.
    const long per = static_cast<long>(source_k.cell_count() / p.source->cell_count());
    for (CellId c = 0; c < static_cast<CellId>(source_k.cell_count()); ++c) {
        CellId base = source_k.parent_cell(c);
        long offset = c - static_cast<CellId>(base * per);
        out.assign[c] = static_cast<CellId>(p.assign[base] * per + offset);
    }
    return out;
}

CellMap compose(const CellMap& p, const CellMap& q) {
    if (p.target != q.source) throw std::invalid_argument("compose: p.target must equal q.source");
    CellMap out;
    out.source = p.source;
    out.target = q.target;
    out.assign.resize(p.assign.size());
    for (std::size_t c = 0; c < p.assign.size(); ++c) out.assign[c] = q.assign[p.assign[c]];
    return out;
}

}  // namespace cubetower
