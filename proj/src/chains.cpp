#include "cubetower/chains.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace cubetower {

CubicalChain fundamental_chain(const CubeComplex& x) {
    CubicalChain t;
    t.host = &x;
    t.dim = x.n();
    for (CellId c = 0; c < static_cast<CellId>(x.cell_count()); ++c)
        t.entries[c] = Rat(x.cell(c).orientation) * x.cell(c).weight;
    return t;
}

CubicalChain boundary(const CubicalChain& t) {
    const CubeComplex& x = *t.host;
    if (t.dim != x.n()) throw std::invalid_argument("boundary defined for top-dimensional chains");
    std::map<std::int32_t, Rat> acc;
    for (const auto& [c, coef] : t.entries) {
        for (int axis = 0; axis < x.n(); ++axis) {
            for (Side s : {Side::Low, Side::High}) {
                FaceId f = x.facet_face(c, axis, s);
                acc[f] += coef * facet_sign(axis, s, 1);
            }
        }
    }
    CubicalChain b;
    b.host = &x;
    b.dim = x.n() - 1;
    for (auto& [f, coef] : acc)
        if (coef != 0) b.entries.emplace(f, std::move(coef));
    return b;
}

Rat mass(const CubicalChain& t) {
    Rat unit = rat_pow(t.host->side_length(), t.dim);
    Rat total(0);
    for (const auto& [id, coef] : t.entries) total += abs(coef) * unit;
    return total;
}

CubicalChain pushforward(const CellMap& p, const CubicalChain& t) {
    if (t.host != p.source) throw std::invalid_argument("chain not hosted on the map source");
    if (t.dim != p.source->n()) throw std::invalid_argument("pushforward takes top-dimensional chains");
    CubicalChain out;
    out.host = p.target;
    out.dim = t.dim;
    for (const auto& [c, coef] : t.entries) {
        Rat& slot = out.entries[p.assign[c]];
        slot += coef;
    }
    for (auto it = out.entries.begin(); it != out.entries.end();)
        it = it->second == 0 ? out.entries.erase(it) : std::next(it);
    return out;
}

namespace {

// Orientation-induced partition of the cells bounding a target face.
// Positive = facet sign +1 with the cell's own orientation.
int incident_sign(const CubeComplex& x, const Face& f, const FacetRef& fr) {
    return facet_sign(f.axis, fr.side, x.cell(fr.cell).orientation);
}

bool target_face_interior(const CubeComplex& tgt, const Face& f) {
    if (f.incident.size() < 2) return false;
    CellId p0 = tgt.parent_cell(f.incident.front().cell);
    for (const FacetRef& fr : f.incident)
        if (tgt.parent_cell(fr.cell) != p0) return false;
    return true;
}

}  // namespace

FluxReport check_flux(const CellMap& p) {
    FluxReport rep;
    const CubeComplex& src = *p.source;
    const CubeComplex& tgt = *p.target;
    if (!tgt.is_subdivision())
        throw std::invalid_argument("check_flux: target must be a subdivided complex");
    for (FaceId fs = 0; fs < static_cast<FaceId>(src.face_count()); ++fs) {
        const Face& face_s = src.face(fs);
        FaceId ft = p.face_image(fs);
        const Face& face_t = tgt.face(ft);
        if (!target_face_interior(tgt, face_t)) continue;
        ++rep.faces_checked;
        Rat plus(0), minus(0);
        for (const FacetRef& fr : face_s.incident) {
            FacetRef image{p.assign[fr.cell], fr.side};
            if (incident_sign(tgt, face_t, image) > 0)
                plus += src.cell(fr.cell).weight;
            else
                minus += src.cell(fr.cell).weight;
        }
        if (plus != minus) {
            rep.pass = false;
            rep.source_face = fs;
            rep.target_face = ft;
            rep.detail = "flux imbalance at source face " + std::to_string(fs) + ": +" +
                         rat_to_string(plus) + " vs -" + rat_to_string(minus);
            return rep;
        }
    }
    return rep;
}

PoincReport check_ipoinc(const CellMap& p) {
    PoincReport rep;
    const CubeComplex& src = *p.source;
    const CubeComplex& tgt = *p.target;
    for (FaceId fs = 0; fs < static_cast<FaceId>(src.face_count()); ++fs) {
        const Face& face_s = src.face(fs);
        FaceId ft = p.face_image(fs);
        const Face& face_t = tgt.face(ft);
        ++rep.faces_checked;
        // distinct target cells bounding the image face
        std::vector<CellId> bd;
        for (const FacetRef& fr : face_t.incident) bd.push_back(fr.cell);
        std::sort(bd.begin(), bd.end());
        bd.erase(std::unique(bd.begin(), bd.end()), bd.end());
        if (bd.size() < 2) continue;  // vacuous
        bool have_ref = false;
        Rat ref;
        for (CellId sigma : bd) {
            Rat sum(0);
            for (const FacetRef& fr : face_s.incident)
                if (p.assign[fr.cell] == sigma) sum += src.cell(fr.cell).weight;
            Rat ratio = sum / tgt.cell(sigma).weight;
            if (!have_ref) {
                ref = ratio;
                have_ref = true;
            } else if (ratio != ref) {
                rep.pass = false;
                rep.source_face = fs;
                rep.detail = "ratio sum not constant over Bd(face " + std::to_string(ft) +
                             "): " + rat_to_string(ref) + " vs " + rat_to_string(ratio);
                return rep;
            }
        }
    }
    return rep;
}

BranchCancellation check_branch_cancellation(const CubeComplex& x) {
    BranchCancellation rep;
    CubicalChain b = boundary(fundamental_chain(x));
    for (FaceId f = 0; f < static_cast<FaceId>(x.face_count()); ++f) {
        if (x.face(f).incident.size() < 3) continue;
        ++rep.branch_faces;
        if (b.coefficient(f) != 0) {
            rep.pass = false;
            rep.first_violation = f;
            return rep;
        }
    }
    return rep;
}

ConservationReport conservation_report(const InverseSystem& s, int j,
                                       const std::vector<CellId>& u_cells) {
    ConservationReport rep;
    std::vector<bool> in_u(s.level(j).cell_count(), false);
    for (CellId c : u_cells) in_u[c] = true;
    const bool restricted = !u_cells.empty();
    for (int i = 0; i <= s.depth(); ++i) {
        const CubeComplex& x = s.level(i);
        ConservationRow row;
        row.level = i;
        CubicalChain nf = fundamental_chain(x);
        CubicalChain bd = boundary(nf);
        row.mass_total = mass(nf);
        row.boundary_mass = mass(bd);
        if (restricted && i >= j) {
            row.restricted_valid = true;
            std::vector<bool> pre(x.cell_count(), false);
            for (CellId c = 0; c < static_cast<CellId>(x.cell_count()); ++c)
                pre[c] = in_u[s.ancestor_cell(i, c, j)];
            Rat munit = x.cell_volume();
            Rat aunit = x.face_area();
            Rat m(0), b(0);
            for (CellId c = 0; c < static_cast<CellId>(x.cell_count()); ++c)
                if (pre[c]) m += x.cell(c).weight * munit;
            for (const auto& [f, coef] : bd.entries) {
                bool inside = true;
                for (const FacetRef& fr : x.face(f).incident)
                    if (!pre[fr.cell]) { inside = false; break; }
                if (inside) b += abs(coef) * aunit;
            }
            row.mass_restricted = m;
            row.boundary_restricted = b;
        }
        rep.rows.push_back(std::move(row));
    }
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        if (rep.rows[i].mass_total != rep.rows[0].mass_total) rep.mass_constant = false;
        if (rep.rows[i].boundary_mass != rep.rows[0].boundary_mass) rep.boundary_constant = false;
    }
    const ConservationRow* first_restricted = nullptr;
    for (const auto& r : rep.rows) {
        if (!r.restricted_valid) continue;
        if (!first_restricted) {
            first_restricted = &r;
        } else if (r.mass_restricted != first_restricted->mass_restricted ||
                   r.boundary_restricted != first_restricted->boundary_restricted) {
            rep.restricted_constant = false;
        }
    }
    return rep;
}

std::pair<Rat, Rat> two_path_boundary_mass(const CellMap& p) {
    const CubeComplex& src = *p.source;
    const CubeComplex& tgt = *p.target;
    Rat direct = mass(boundary(fundamental_chain(src)));
    // fiber double sum: group source faces over target faces; faces over the
    // interior of a parent cell must contribute zero
    Rat aunit = src.face_area();
    Rat total(0);
    for (FaceId fs = 0; fs < static_cast<FaceId>(src.face_count()); ++fs) {
        const Face& face_s = src.face(fs);
        FaceId ft = p.face_image(fs);
        const Face& face_t = tgt.face(ft);
        Rat gap(0);
        for (const FacetRef& fr : face_s.incident) {
            FacetRef image{p.assign[fr.cell], fr.side};
            gap += Rat(incident_sign(tgt, face_t, image)) * src.cell(fr.cell).weight;
        }
        if (target_face_interior(tgt, face_t)) {
            if (gap != 0)
                throw std::runtime_error("interior face with nonzero flux gap (face " +
                                         std::to_string(fs) + ")");
            continue;
        }
        total += abs(gap) * aunit;
    }
    return {direct, total};
}

}  // namespace cubetower
