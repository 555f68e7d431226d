#include "cubetower/branched.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "cubetower/chains.hpp"

namespace cubetower {

PlaneClass classify_plane_cell(int u, int v) {
    if (u < 0 || u > 4 || v < 0 || v > 4) throw std::invalid_argument("plane cell out of 5x5 grid");
    int d = std::max(std::abs(u - 2), std::abs(v - 2));
    if (d == 0) return PlaneClass::Center;
    if (d == 1) return PlaneClass::Ring;
    return PlaneClass::Outer;
}

const std::array<std::pair<int, int>, 8>& ring_cycle() {
    // counterclockwise from (1,1); the sheet cut sits between index 7 and 0
    static const std::array<std::pair<int, int>, 8> cyc = {
        {{1, 1}, {2, 1}, {3, 1}, {3, 2}, {3, 3}, {2, 3}, {1, 3}, {1, 2}}};
    return cyc;
}

int ring_index(int u, int v) {
    const auto& cyc = ring_cycle();
    for (int i = 0; i < 8; ++i)
        if (cyc[i] == std::make_pair(u, v)) return i;
    return -1;
}

int RingDoubleCover::next(int node) const {
    int sheet = node / 8, idx = node % 8;
    if (idx < 7) return sheet * 8 + idx + 1;
    return (1 - sheet) * 8;  // crossing the cut swaps sheets
}

namespace {

long ipow(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

struct GridIter {
    std::vector<std::int32_t> p;
    long g;
    bool done = false;
    GridIter(int dim, long g_) : p(dim, 0), g(g_) { done = dim == 0; }
    void next() {
        for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) {
            if (++p[i] < g) return;
            p[i] = 0;
        }
        done = true;
    }
};

}  // namespace

BranchedCoverResult branched_cover(const CubeComplex& x, PlanePair plane) {
    if (x.m() != 5) throw std::invalid_argument("branched cover requires m = 5");
    const int n = x.n();
    if (!(1 <= plane.alpha && plane.alpha < plane.beta && plane.beta <= n))
        throw std::invalid_argument("invalid plane pair");
    const int ax = plane.alpha - 1, bx = plane.beta - 1;

    BranchedCoverResult out;
    out.subdivided = std::make_unique<CubeComplex>(subdivide(x, 1));
    out.cover = std::make_unique<CubeComplex>(n, 5, x.level() + 1);
    CubeComplex& y = *out.cover;

    const long positions = ipow(5, n);
    // Per-position layout, shared by every old cell: fiber size and slot offset.
    std::vector<int> fiber_size(positions);
    std::vector<long> slot(positions);
    std::vector<std::vector<std::int32_t>> pos_coord;
    pos_coord.reserve(positions);
    long per_old = 0;
    {
        long idx = 0;
        for (GridIter it(n, 5); !it.done; it.next(), ++idx) {
            PlaneClass cls = classify_plane_cell(it.p[ax], it.p[bx]);
            fiber_size[idx] = cls == PlaneClass::Ring ? 2 : 1;
            slot[idx] = per_old;
            per_old += fiber_size[idx];
            pos_coord.push_back(it.p);
        }
    }
    auto pos_index = [&](std::span<const std::int32_t> p) {
        long idx = 0;
        for (int i = 0; i < n; ++i) idx = idx * 5 + p[i];
        return idx;
    };
    auto new_id = [&](CellId old_cell, long pidx, int sheet) {
        return static_cast<CellId>(old_cell * per_old + slot[pidx] + sheet);
    };

    // Cells: old-cell-major, positions lexicographic, sheets '.' < 'a' < 'b'.
    std::vector<std::int32_t> na(n);
    for (CellId c = 0; c < static_cast<CellId>(x.cell_count()); ++c) {
        auto a = x.anchor(c);
        const Cell& oc = x.cell(c);
        const std::string& base = x.sheet_label(c);
        for (long pidx = 0; pidx < positions; ++pidx) {
            for (int i = 0; i < n; ++i)
                na[i] = static_cast<std::int32_t>(a[i] * 5 + pos_coord[pidx][i]);
            if (fiber_size[pidx] == 1) {
                y.add_cell(na, oc.weight, oc.orientation, y.intern_sheet(base + "."));
            } else {
                // the doubled cells split the old measure evenly
                y.add_cell(na, oc.weight / 2, oc.orientation, y.intern_sheet(base + "a"));
                y.add_cell(na, oc.weight / 2, oc.orientation, y.intern_sheet(base + "b"));
            }
        }
    }

    // Faces internal to one old cell.
    std::vector<std::int32_t> q(n);
    for (CellId c = 0; c < static_cast<CellId>(x.cell_count()); ++c) {
        for (long pidx = 0; pidx < positions; ++pidx) {
            const auto& p = pos_coord[pidx];
            for (int axis = 0; axis < n; ++axis) {
                if (p[axis] + 1 >= 5) continue;
                std::copy(p.begin(), p.end(), q.begin());
                q[axis] += 1;
                long qidx = pos_index(q);
                int fp = fiber_size[pidx], fq = fiber_size[qidx];
                if (fp == 1 && fq == 1) {
                    y.add_face(axis, {FacetRef{new_id(c, pidx, 0), Side::High},
                                      FacetRef{new_id(c, qidx, 0), Side::Low}});
                } else if (fp != fq) {
                    // ring entry/exit: one unbranched facet plus both sheet lifts
                    std::vector<FacetRef> inc;
                    if (fp == 1)
                        inc = {FacetRef{new_id(c, pidx, 0), Side::High},
                               FacetRef{new_id(c, qidx, 0), Side::Low},
                               FacetRef{new_id(c, qidx, 1), Side::Low}};
                    else
                        inc = {FacetRef{new_id(c, qidx, 0), Side::Low},
                               FacetRef{new_id(c, pidx, 0), Side::High},
                               FacetRef{new_id(c, pidx, 1), Side::High}};
                    y.add_face(axis, std::move(inc));
                } else {
                    // both doubled: within-sheet, except across the monodromy cut
                    bool cut = false;
                    if (axis == ax || axis == bx) {
                        int ip = ring_index(p[ax], p[bx]);
                        int iq = ring_index(q[ax], q[bx]);
                        cut = (ip == 0 && iq == 7) || (ip == 7 && iq == 0);
                    }
                    if (cut) {
                        y.add_face(axis, {FacetRef{new_id(c, pidx, 0), Side::High},
                                          FacetRef{new_id(c, qidx, 1), Side::Low}});
                        y.add_face(axis, {FacetRef{new_id(c, pidx, 1), Side::High},
                                          FacetRef{new_id(c, qidx, 0), Side::Low}});
                    } else {
                        y.add_face(axis, {FacetRef{new_id(c, pidx, 0), Side::High},
                                          FacetRef{new_id(c, qidx, 0), Side::Low}});
                        y.add_face(axis, {FacetRef{new_id(c, pidx, 1), Side::High},
                                          FacetRef{new_id(c, qidx, 1), Side::Low}});
                    }
                }
            }
        }
    }

    // Faces inherited from old gluings. The boundary of each doubled region is
    // identified back onto the base, so every lift of an old facet joins the
    // same new face (this pinches sheet pairs together on old-cell boundaries
    // when N > 2).
    std::vector<std::int32_t> loc(n);
    for (FaceId fi = 0; fi < static_cast<FaceId>(x.face_count()); ++fi) {
        const Face& f = x.face(fi);
        const FacetRef& f0 = f.incident.front();
        auto a0 = x.anchor(f0.cell);
        for (GridIter it(n - 1, 5); !it.done; it.next()) {
            std::vector<FacetRef> inc;
            for (const FacetRef& fr : f.incident) {
                auto a = x.anchor(fr.cell);
                int t = 0;
                for (int i = 0; i < n; ++i) {
                    if (i == f.axis) {
                        loc[i] = fr.side == Side::High ? 4 : 0;
                    } else {
                        loc[i] = static_cast<std::int32_t>(a0[i] * 5 + it.p[t] - a[i] * 5);
                        ++t;
                    }
                }
                long pidx = pos_index(loc);
                for (int s = 0; s < fiber_size[pidx]; ++s)
                    inc.push_back(FacetRef{new_id(fr.cell, pidx, s), fr.side});
            }
            y.add_face(f.axis, std::move(inc));
        }
    }
    y.finalize();

    CellMap& pi = out.projection;
    pi.source = out.cover.get();
    pi.target = out.subdivided.get();
    pi.assign.resize(y.cell_count());
    for (CellId c = 0; c < static_cast<CellId>(x.cell_count()); ++c)
        for (long pidx = 0; pidx < positions; ++pidx)
            for (int s = 0; s < fiber_size[pidx]; ++s)
                pi.assign[new_id(c, pidx, s)] = static_cast<CellId>(c * positions + pidx);
    return out;
}

InverseSystem InverseSystem::build(CubeComplex x0, const std::vector<BuildStep>& schedule) {
    x0.validate();
    InverseSystem s;
    s.schedule_ = schedule;
    s.levels_.push_back(std::make_unique<CubeComplex>(std::move(x0)));
    for (const BuildStep& step : schedule) {
        const CubeComplex& cur = *s.levels_.back();
        if (step.branched()) {
            BranchedCoverResult r = branched_cover(cur, *step.plane);
            s.subdivided_.push_back(std::move(r.subdivided));
            s.levels_.push_back(std::move(r.cover));
            r.projection.source = s.levels_.back().get();
            r.projection.target = s.subdivided_.back().get();
            s.maps_.push_back(std::move(r.projection));
        } else {
            auto sub = std::make_unique<CubeComplex>(subdivide(cur, 1));
            // the next level is the subdivision itself, relabeled so sheet
            // label length keeps tracking the level
            auto next = std::make_unique<CubeComplex>(cur.n(), cur.m(), cur.level() + 1);
            for (CellId c = 0; c < static_cast<CellId>(sub->cell_count()); ++c) {
                next->add_cell(sub->anchor(c), sub->cell(c).weight, sub->cell(c).orientation,
                               next->intern_sheet(sub->sheet_label(c) + "."));
            }
            for (FaceId f = 0; f < static_cast<FaceId>(sub->face_count()); ++f)
                next->add_face(sub->face(f).axis, sub->face(f).incident);
            next->finalize();
            CellMap id;
            id.assign.resize(next->cell_count());
            for (CellId c = 0; c < static_cast<CellId>(next->cell_count()); ++c) id.assign[c] = c;
            s.subdivided_.push_back(std::move(sub));
            s.levels_.push_back(std::move(next));
            id.source = s.levels_.back().get();
            id.target = s.subdivided_.back().get();
            s.maps_.push_back(std::move(id));
        }
    }
    return s;
}

const CubeComplex& InverseSystem::refined(int j, int k) const {
    if (k == 0) return level(j);
    for (std::size_t i = 0; i < refined_keys_.size(); ++i)
        if (refined_keys_[i] == std::make_pair(j, k)) return *refined_cache_[i];
    refined_cache_.push_back(std::make_unique<CubeComplex>(subdivide(level(j), k)));
    refined_keys_.emplace_back(j, k);
    return *refined_cache_.back();
}

const CellMap& InverseSystem::composite(int i, int j) const {
    if (i < j) throw std::invalid_argument("composite requires i >= j");
    for (std::size_t t = 0; t < composite_keys_.size(); ++t)
        if (composite_keys_[t] == std::make_pair(i, j)) return composite_cache_[t];
    CellMap map;
    map.source = &level(i);
    if (i == j) {
        map.target = &level(i);
        map.assign.resize(level(i).cell_count());
        for (CellId c = 0; c < static_cast<CellId>(map.assign.size()); ++c) map.assign[c] = c;
    } else {
        const CubeComplex& tgt = refined(j, i - j);
        map.target = &tgt;
        map.assign.resize(level(i).cell_count());
        for (CellId c = 0; c < static_cast<CellId>(level(i).cell_count()); ++c) {
            const std::string& lbl = level(i).sheet_label(c);
            CellId t = tgt.find_cell(level(i).anchor(c), lbl.substr(0, j));
            if (t < 0) throw std::runtime_error("composite lookup failed (anchor/sheet index)");
            map.assign[c] = t;
        }
    }
    composite_cache_.push_back(std::move(map));
    composite_keys_.emplace_back(i, j);
    return composite_cache_.back();
}

CellId InverseSystem::ancestor_cell(int i, CellId c, int j) const {
    if (i == j) return c;
    const CellMap& comp = composite(i, j);
    return comp.target->parent_cell(comp.assign[c]);
}

void InverseSystem::corrupt_ring_weight(int lvl) {
    if (lvl < 1 || lvl > depth()) throw std::invalid_argument("corrupt level out of range");
    CubeComplex& x = *levels_[lvl];
    for (CellId c = 0; c < static_cast<CellId>(x.cell_count()); ++c) {
        const std::string& lbl = x.sheet_label(c);
        if (!lbl.empty() && lbl.back() == 'a') {
            x.cell_mut(c).weight *= 2;  // skip the halving
            return;
        }
    }
    throw std::runtime_error("no doubled cell found at level");
}

std::string WaisReport::first_failure() const {
    for (const auto& c : checks)
        if (!c.pass) return c.axiom + " at level " + std::to_string(c.level) + ": " + c.locator;
    return "";
}

WaisReport verify_wais(const InverseSystem& s) {
    WaisReport rep;
    rep.pass = true;
    auto push = [&](AxiomCheck c) {
        rep.pass = rep.pass && c.pass;
        rep.checks.push_back(std::move(c));
    };
    const int n = s.level(0).n();
    long geo_cap = 1;
    for (int i = 0; i < n * (n - 1) / 2; ++i) geo_cap *= 2;
    geo_cap *= ipow(2, n);

    for (int i = 0; i <= s.depth(); ++i) {
        const CubeComplex& x = s.level(i);
        LevelWitness w;
        int cg = link_bound(x);
        w.c_geo = cg;
        push({"IBGeom", i, cg <= geo_cap, std::to_string(cg),
              cg <= geo_cap ? "" : "link bound exceeds 2^C(N,2)*2^N"});
        auto conn = check_gallery_connected(x);
        w.connected = conn.connected;
        w.dual_diameter = conn.diameter;
        push({"IGall", i, conn.connected, "diameter " + std::to_string(conn.diameter),
              conn.connected ? "" : "dual graph disconnected"});
        w.total_measure = rat_to_string(x.total_measure());
        rep.witnesses.push_back(std::move(w));
    }
    for (int i = 0; i < s.depth(); ++i) {
        const CellMap& pi = s.projection(i);
        try {
            check_valid(pi);
            int cgall = fiber_gallery_bound(pi);
            rep.witnesses[i].c_gall = std::max(rep.witnesses[i].c_gall, cgall);
            push({"IGall", i + 1, true, "C_gall " + std::to_string(cgall), ""});
        } catch (const std::exception& e) {
            push({"IGall", i + 1, false, "", e.what()});
        }
        MeasureReport mr = check_measures(pi);
        rep.witnesses[i].c_mu = rat_to_string(mr.c_mu_source);
        push({"IMeas", i + 1, mr.pushforward_exact, "C_mu " + rat_to_string(mr.c_mu_source),
              mr.detail});
        bool or_ok = true;
        std::string or_loc;
        for (CellId c = 0; c < static_cast<CellId>(pi.source->cell_count()); ++c) {
            if (pi.source->cell(c).orientation != pi.target->cell(pi.assign[c]).orientation) {
                or_ok = false;
                or_loc = "cell " + std::to_string(c);
                break;
            }
        }
        push({"IOr", i + 1, or_ok, "", or_loc});
        FluxReport fr = check_flux(pi);
        push({"IFlux", i + 1, fr.pass, std::to_string(fr.faces_checked) + " faces", fr.detail});
        PoincReport pr = check_ipoinc(pi);
        push({"IPoinc", i + 1, pr.pass, std::to_string(pr.faces_checked) + " faces", pr.detail});
    }
    return rep;
}

}  // namespace cubetower
