#include "cubetower/galleries.hpp"

#include <algorithm>
#include <stdexcept>

#include "cubetower/chains.hpp"

namespace cubetower {

void GallerySet::build_index() const {
    if (!index_.empty() || galleries.empty()) return;
    for (std::size_t i = 0; i < galleries.size(); ++i)
        index_.emplace(galleries[i].cells, static_cast<int>(i));
}

int GallerySet::find(const std::vector<CellId>& cells) const {
    build_index();
    auto it = index_.find(cells);
    return it == index_.end() ? -1 : it->second;
}

namespace {

std::vector<CellId> boundary_cells(const CubeComplex& x, CellId c, int axis, Side side) {
    FaceId f = x.facet_face(c, axis, side);
    int own = facet_sign(axis, side, x.cell(c).orientation);
    std::vector<CellId> out;
    for (const FacetRef& fr : x.face(f).incident) {
        if (fr.cell == c && fr.side == side) continue;
        if (facet_sign(axis, fr.side, x.cell(fr.cell).orientation) == -own) out.push_back(fr.cell);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::vector<CellId> positive_boundary(const CubeComplex& x, CellId c, int axis) {
    return boundary_cells(x, c, axis, Side::High);
}

std::vector<CellId> negative_boundary(const CubeComplex& x, CellId c, int axis) {
    return boundary_cells(x, c, axis, Side::Low);
}

GallerySet maximal_galleries(const CubeComplex& x, int axis, std::size_t max_count) {
    GallerySet out;
    out.host = &x;
    out.axis = axis;
    std::vector<CellId> path;
    // iterative DFS over (cell, successor list, next index)
    struct Frame {
        std::vector<CellId> succ;
        std::size_t next = 0;
    };
    for (CellId start = 0; start < static_cast<CellId>(x.cell_count()); ++start) {
        if (!negative_boundary(x, start, axis).empty()) continue;
        std::vector<Frame> stack;
        path.clear();
        path.push_back(start);
        stack.push_back({positive_boundary(x, start, axis), 0});
        while (!stack.empty()) {
            Frame& top = stack.back();
            if (top.succ.empty()) {
                // maximal: no continuation
                if (out.galleries.size() >= max_count)
                    throw std::overflow_error("gallery enumeration exceeds limit (" +
                                              std::to_string(max_count) + ")");
                out.galleries.push_back({path});
                stack.pop_back();
                path.pop_back();
                continue;
            }
            if (top.next >= top.succ.size()) {
                stack.pop_back();
                path.pop_back();
                continue;
            }
            CellId nxt = top.succ[top.next++];
            path.push_back(nxt);
            stack.push_back({positive_boundary(x, nxt, axis), 0});
        }
    }
    return out;
}

GalleryLevel base_gallery_measure(const CubeComplex& x0, int axis) {
    GalleryLevel gl;
    gl.set = maximal_galleries(x0, axis);
    gl.q.assign(gl.set.galleries.size(), Rat(1));
    return gl;
}

GalleryLevel refine_gallery_measure(const GalleryLevel& coarse, const CubeComplex& fine) {
    const CubeComplex& cx = *coarse.set.host;
    int dl = fine.level() - cx.level();
    if (dl < 0) throw std::invalid_argument("refinement must be finer than the coarse host");
    if (dl == 0) return coarse;
    long scale = 1;
    for (int i = 0; i < dl; ++i) scale *= fine.m();

    GalleryLevel out;
    out.set = maximal_galleries(fine, coarse.set.axis);
    out.q.resize(out.set.galleries.size());
    coarse.set.build_index();
    std::vector<std::int32_t> a(cx.n());
    for (std::size_t gi = 0; gi < out.set.galleries.size(); ++gi) {
        // ancestor cells, consecutive runs collapsed
        std::vector<CellId> hat;
        for (CellId c : out.set.galleries[gi].cells) {
            auto fa = fine.anchor(c);
            for (int i = 0; i < cx.n(); ++i) a[i] = static_cast<std::int32_t>(fa[i] / scale);
            CellId anc = cx.find_cell(a, fine.sheet_label(c));
            if (anc < 0) throw std::runtime_error("refine: ancestor cell not found");
            if (hat.empty() || hat.back() != anc) hat.push_back(anc);
        }
        int idx = coarse.set.find(hat);
        if (idx < 0) throw std::runtime_error("refine: containing maximal gallery not found");
        out.q[gi] = coarse.q[idx];
    }
    return out;
}

GalleryLevel lift_gallery_measure(const GalleryLevel& fine_on_target, const CellMap& pi) {
    const CubeComplex& src = *pi.source;
    const CubeComplex& tgt = *pi.target;
    if (fine_on_target.set.host != &tgt)
        throw std::invalid_argument("gallery measure must live on the projection target");
    GalleryLevel out;
    out.set = maximal_galleries(src, fine_on_target.set.axis);
    out.q.resize(out.set.galleries.size());
    const int axis = fine_on_target.set.axis;
    for (std::size_t gi = 0; gi < out.set.galleries.size(); ++gi) {
        const auto& cells = out.set.galleries[gi].cells;
        std::vector<CellId> image;
        image.reserve(cells.size());
        for (CellId c : cells) image.push_back(pi.assign[c]);
        int idx = fine_on_target.set.find(image);
        if (idx < 0)
            throw std::runtime_error("projection of a maximal gallery is not maximal in the target");
        Rat q = fine_on_target.q[idx];
        q *= src.measure(cells.front()) / tgt.measure(image.front());
        for (std::size_t j = 1; j < cells.size(); ++j) {
            Rat denom(0);
            for (CellId b : positive_boundary(src, cells[j - 1], axis)) denom += src.measure(b);
            q *= src.measure(cells[j]) / denom;
        }
        out.q[gi] = std::move(q);
    }
    return out;
}

GalleryLevel gallery_measure(const InverseSystem& s, int level, int axis, std::size_t max_count) {
    GalleryLevel cur = base_gallery_measure(s.level(0), axis);
    if (cur.set.galleries.size() > max_count)
        throw std::overflow_error("gallery enumeration exceeds limit");
    for (int k = 0; k < level; ++k) {
        GalleryLevel fine = refine_gallery_measure(cur, s.subdivided_level(k));
        cur = lift_gallery_measure(fine, s.projection(k));
        if (cur.set.galleries.size() > max_count)
            throw std::overflow_error("gallery enumeration exceeds limit");
    }
    return cur;
}

DecompositionReport verify_decomposition(const GalleryLevel& gl) {
    DecompositionReport rep;
    const CubeComplex& x = *gl.set.host;
    std::vector<Rat> through(x.cell_count(), Rat(0));
    Rat global(0);
    Rat vol = x.cell_volume();
    for (std::size_t gi = 0; gi < gl.set.galleries.size(); ++gi) {
        for (CellId c : gl.set.galleries[gi].cells) through[c] += gl.q[gi];
        global += gl.q[gi] * Rat(static_cast<long>(gl.set.galleries[gi].cells.size())) * vol;
    }
    for (CellId c = 0; c < static_cast<CellId>(x.cell_count()); ++c) {
        // sum of Q over galleries through c equals m^{iN} mu_i(c), i.e. the weight
        if (through[c] != x.cell(c).weight) {
            rep.pass = false;
            rep.first_violation = c;
            rep.detail = "cell " + std::to_string(c) + ": flow " + rat_to_string(through[c]) +
                         " != weight " + rat_to_string(x.cell(c).weight);
            break;
        }
    }
    rep.global_flow = global;
    if (rep.pass && global != x.total_measure()) {
        rep.pass = false;
        rep.detail = "global flow " + rat_to_string(global) + " != total measure " +
                     rat_to_string(x.total_measure());
    }
    return rep;
}

GalleryPushforwardReport check_pushforward_measure(const GalleryLevel& upper, const CellMap& pi,
                                                   const GalleryLevel& fine_on_target) {
    GalleryPushforwardReport rep;
    std::vector<Rat> pushed(fine_on_target.set.galleries.size(), Rat(0));
    for (std::size_t gi = 0; gi < upper.set.galleries.size(); ++gi) {
        std::vector<CellId> image;
        for (CellId c : upper.set.galleries[gi].cells) image.push_back(pi.assign[c]);
        int idx = fine_on_target.set.find(image);
        if (idx < 0) {
            rep.pass = false;
            rep.detail = "image gallery missing";
            return rep;
        }
        pushed[idx] += upper.q[gi];
    }
    for (std::size_t t = 0; t < pushed.size(); ++t) {
        if (pushed[t] != fine_on_target.q[t]) {
            rep.pass = false;
            rep.first_violation = static_cast<int>(t);
            rep.detail = "gallery " + std::to_string(t) + ": pushed " + rat_to_string(pushed[t]) +
                         " != " + rat_to_string(fine_on_target.q[t]);
            return rep;
        }
    }
    return rep;
}

}  // namespace cubetower
