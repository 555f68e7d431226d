#include "cubetower/complex.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace cubetower {

CubeComplex::CubeComplex(int n, int m, int level) : n_(n), m_(m), level_(level) {
    if (n < 2) throw std::invalid_argument("cube complex dimension must be >= 2");
    if (m < 2) throw std::invalid_argument("branching factor must be >= 2");
    if (level < 0) throw std::invalid_argument("level must be >= 0");
}

CellId CubeComplex::add_cell(std::span<const std::int32_t> anchor, Rat weight, int orientation,
                             std::int32_t sheet) {
    if (static_cast<int>(anchor.size()) != n_) throw std::invalid_argument("anchor arity mismatch");
    if (orientation != 1 && orientation != -1) throw std::invalid_argument("orientation must be +-1");
    anchors_.insert(anchors_.end(), anchor.begin(), anchor.end());
    Cell c;
    c.weight = std::move(weight);
    c.orientation = static_cast<std::int8_t>(orientation);
    c.sheet = sheet;
    cells_.push_back(std::move(c));
    sorted_ids_.clear();
    return static_cast<CellId>(cells_.size() - 1);
}

std::int32_t CubeComplex::intern_sheet(const std::string& label) {
    for (std::size_t i = 0; i < sheet_labels_.size(); ++i)
        if (sheet_labels_[i] == label) return static_cast<std::int32_t>(i);
    sheet_labels_.push_back(label);
    return static_cast<std::int32_t>(sheet_labels_.size() - 1);
}

FaceId CubeComplex::add_face(int axis, std::vector<FacetRef> incident) {
    if (incident.empty()) throw std::invalid_argument("face needs at least one incident facet");
    Face f;
    f.axis = static_cast<std::uint8_t>(axis);
    f.incident = std::move(incident);
    faces_.push_back(std::move(f));
    return static_cast<FaceId>(faces_.size() - 1);
}

void CubeComplex::set_parentage(int sub_k, std::vector<CellId> parents) {
    sub_k_ = sub_k;
    parent_cells_ = std::move(parents);
}

void CubeComplex::finalize() {
    facet_face_.assign(cells_.size() * n_ * 2, -1);
    for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
        const Face& f = faces_[fi];
        for (const FacetRef& fr : f.incident) {
            std::size_t slot =
                (static_cast<std::size_t>(fr.cell) * n_ + f.axis) * 2 + static_cast<int>(fr.side);
            if (facet_face_[slot] != -1)
                throw std::runtime_error("facet attached to two faces (cell " +
                                         std::to_string(fr.cell) + ")");
            facet_face_[slot] = static_cast<FaceId>(fi);
        }
    }
}

Rat CubeComplex::total_measure() const {
    Rat total(0);
    Rat vol = cell_volume();
    for (const Cell& c : cells_) total += c.weight * vol;
    return total;
}

std::vector<CellId> CubeComplex::neighbors(CellId c) const {
    std::vector<CellId> out;
    for (int a = 0; a < n_; ++a) {
        for (Side s : {Side::Low, Side::High}) {
            FaceId fid = facet_face(c, a, s);
            for (const FacetRef& fr : face(fid).incident)
                if (fr.cell != c) out.push_back(fr.cell);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void CubeComplex::build_index() const {
    sorted_ids_.resize(cells_.size());
    std::iota(sorted_ids_.begin(), sorted_ids_.end(), 0);
    std::sort(sorted_ids_.begin(), sorted_ids_.end(), [&](CellId a, CellId b) {
        auto aa = anchor(a), ab = anchor(b);
        if (!std::equal(aa.begin(), aa.end(), ab.begin())) {
            return std::lexicographical_compare(aa.begin(), aa.end(), ab.begin(), ab.end());
        }
        return sheet_label(a) < sheet_label(b);
    });
}

CellId CubeComplex::find_cell(std::span<const std::int32_t> a, const std::string& sheet) const {
    if (sorted_ids_.empty() && !cells_.empty()) build_index();
    auto less = [&](CellId id, const std::pair<std::span<const std::int32_t>, const std::string*>& key) {
        auto ai = anchor(id);
        if (!std::equal(ai.begin(), ai.end(), key.first.begin()))
            return std::lexicographical_compare(ai.begin(), ai.end(), key.first.begin(), key.first.end());
        return sheet_label(id) < *key.second;
    };
    auto it = std::lower_bound(sorted_ids_.begin(), sorted_ids_.end(), std::make_pair(a, &sheet), less);
    if (it == sorted_ids_.end()) return -1;
    auto ai = anchor(*it);
    if (std::equal(ai.begin(), ai.end(), a.begin()) && sheet_label(*it) == sheet) return *it;
    return -1;
}

void CubeComplex::validate() const {
    if (cells_.empty()) throw std::runtime_error("complex has no cells");
    if (facet_face_.size() != cells_.size() * n_ * 2)
        throw std::runtime_error("finalize() not called");
    long range = 1;
    for (int i = 0; i < level_; ++i) range *= m_;
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        if (!(cells_[c].weight > 0))
            throw std::runtime_error("cell " + std::to_string(c) + " has nonpositive weight");
        auto a = anchor(static_cast<CellId>(c));
        for (int i = 0; i < n_; ++i)
            if (a[i] < 0 || a[i] >= range)
                throw std::runtime_error("cell " + std::to_string(c) + " anchor out of range for level");
    }
    for (std::size_t s = 0; s < facet_face_.size(); ++s)
        if (facet_face_[s] == -1)
            throw std::runtime_error("unattached facet (slot " + std::to_string(s) + ")");
    // Face coordinate consistency: all incident facets describe the same
    // hyperplane position and the same transverse coordinates.
    for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
        const Face& f = faces_[fi];
        const FacetRef& f0 = f.incident.front();
        auto a0 = anchor(f0.cell);
        std::int64_t plane0 = a0[f.axis] + (f0.side == Side::High ? 1 : 0);
        for (const FacetRef& fr : f.incident) {
            auto a = anchor(fr.cell);
            std::int64_t plane = a[f.axis] + (fr.side == Side::High ? 1 : 0);
            if (plane != plane0)
                throw std::runtime_error("face " + std::to_string(fi) + " plane coordinate mismatch");
            for (int i = 0; i < n_; ++i)
                if (i != f.axis && a[i] != a0[i])
                    throw std::runtime_error("face " + std::to_string(fi) +
                                             " transverse anchor mismatch");
        }
    }
    if (!(total_measure() > 0)) throw std::runtime_error("total measure not positive");
}

bool CubeComplex::structurally_equal(const CubeComplex& other) const {
    if (n_ != other.n_ || m_ != other.m_ || level_ != other.level_) return false;
    if (cells_.size() != other.cells_.size() || faces_.size() != other.faces_.size()) return false;
    if (sorted_ids_.empty() && !cells_.empty()) build_index();
    if (other.sorted_ids_.empty() && !other.cells_.empty()) other.build_index();
    // Map cells through canonical order, then compare gluing structure.
    std::vector<CellId> to_other(cells_.size());
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        CellId a = sorted_ids_[i], b = other.sorted_ids_[i];
        auto aa = anchor(a), ab = other.anchor(b);
        if (!std::equal(aa.begin(), aa.end(), ab.begin())) return false;
        if (sheet_label(a) != other.sheet_label(b)) return false;
        if (cells_[a].weight != other.cells_[b].weight) return false;
        if (cells_[a].orientation != other.cells_[b].orientation) return false;
        to_other[a] = b;
    }
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        for (int axis = 0; axis < n_; ++axis) {
            for (Side s : {Side::Low, Side::High}) {
                const Face& fa = face(facet_face(static_cast<CellId>(c), axis, s));
                const Face& fb =
                    other.face(other.facet_face(to_other[c], axis, s));
                if (fa.axis != fb.axis || fa.incident.size() != fb.incident.size()) return false;
                auto key = [](const FacetRef& fr) { return fr.cell * 2 + static_cast<int>(fr.side); };
                std::vector<int> ka, kb;
                for (const FacetRef& fr : fa.incident) ka.push_back(to_other[fr.cell] * 2 + static_cast<int>(fr.side));
                for (const FacetRef& fr : fb.incident) kb.push_back(key(fr));
                std::sort(ka.begin(), ka.end());
                std::sort(kb.begin(), kb.end());
                if (ka != kb) return false;
            }
        }
    }
    return true;
}

CubeComplex new_unit_cube(int n, int m) {
    CubeComplex x(n, m, 0);
    std::vector<std::int32_t> origin(n, 0);
    std::int32_t sheet = x.intern_sheet("");
    CellId c = x.add_cell(origin, Rat(1), 1, sheet);
    for (int a = 0; a < n; ++a) {
        x.add_face(a, {FacetRef{c, Side::Low}});
        x.add_face(a, {FacetRef{c, Side::High}});
    }
    x.finalize();
    return x;
}

namespace {

long ipow(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// Enumerates {0..g-1}^dim in lexicographic order.
struct GridIter {
    std::vector<std::int32_t> p;
    long g;
    bool done = false;
    GridIter(int dim, long g_) : p(dim, 0), g(g_) { done = dim == 0 || g == 0; }
    void next() {
        for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) {
            if (++p[i] < g) return;
            p[i] = 0;
        }
        done = true;
    }
};

}  // namespace

CubeComplex subdivide(const CubeComplex& x, int k) {
    if (k < 1) throw std::invalid_argument("subdivision exponent must be >= 1");
    const int n = x.n();
    const long g = ipow(x.m(), k);
    CubeComplex y(n, x.m(), x.level() + k);
    for (const std::string& s : x.sheet_labels()) y.intern_sheet(s);

    const long per_cell = ipow(g, n);
    std::vector<CellId> parents;
    parents.reserve(x.cell_count() * per_cell);
    // Cells: old-cell-major, positions lexicographic; since new anchors are
    // g*a + p this preserves (anchor, sheet) order.
    std::vector<std::int32_t> na(n);
    for (CellId c = 0; c < static_cast<CellId>(x.cell_count()); ++c) {
        auto a = x.anchor(c);
        for (GridIter it(n, g); !it.done; it.next()) {
            for (int i = 0; i < n; ++i) na[i] = static_cast<std::int32_t>(a[i] * g + it.p[i]);
            y.add_cell(na, x.cell(c).weight, x.cell(c).orientation, x.cell(c).sheet);
            parents.push_back(c);
        }
    }
    auto subcell = [&](CellId c, std::span<const std::int32_t> p) -> CellId {
        long idx = 0;
        for (int i = 0; i < n; ++i) idx = idx * g + p[i];
        return static_cast<CellId>(c * per_cell + idx);
    };

    // Internal faces of each subdivided cell.
    std::vector<std::int32_t> q(n);
    for (CellId c = 0; c < static_cast<CellId>(x.cell_count()); ++c) {
        for (GridIter it(n, g); !it.done; it.next()) {
            for (int axis = 0; axis < n; ++axis) {
                if (it.p[axis] + 1 >= g) continue;
                std::copy(it.p.begin(), it.p.end(), q.begin());
                q[axis] += 1;
                y.add_face(axis, {FacetRef{subcell(c, it.p), Side::High},
                                  FacetRef{subcell(c, q), Side::Low}});
            }
        }
    }
    // Faces inherited from the base gluing: each old face splits into g^(n-1)
    // subfaces; incident subcells are located by shared global coordinates.
    std::vector<std::int32_t> loc(n);
    for (FaceId fi = 0; fi < static_cast<FaceId>(x.face_count()); ++fi) {
        const Face& f = x.face(fi);
        const FacetRef& f0 = f.incident.front();
        auto a0 = x.anchor(f0.cell);
        for (GridIter it(n - 1, g); !it.done; it.next()) {
            std::vector<FacetRef> inc;
            inc.reserve(f.incident.size());
            for (const FacetRef& fr : f.incident) {
                auto a = x.anchor(fr.cell);
                int t = 0;
                for (int i = 0; i < n; ++i) {
                    if (i == f.axis) {
                        loc[i] = fr.side == Side::High ? static_cast<std::int32_t>(g - 1) : 0;
                    } else {
                        // global transverse coordinate fixed by the first facet
                        loc[i] = static_cast<std::int32_t>(a0[i] * g + it.p[t] - a[i] * g);
                        ++t;
                    }
                }
                inc.push_back(FacetRef{subcell(fr.cell, loc), fr.side});
            }
            y.add_face(f.axis, std::move(inc));
        }
    }
    y.set_parentage(x.is_subdivision() ? x.sub_k() + k : k, std::move(parents));
    y.finalize();
    return y;
}

VertexIdentification identify_vertices(const CubeComplex& x) {
    const int n = x.n();
    const std::uint32_t corners = 1u << n;
    const std::size_t total = x.cell_count() * corners;
    std::vector<std::int64_t> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<std::int64_t> rank(total, 0);
    std::function<std::int64_t(std::int64_t)> find = [&](std::int64_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    auto unite = [&](std::int64_t a, std::int64_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank[a] < rank[b]) std::swap(a, b);
        parent[b] = a;
        if (rank[a] == rank[b]) ++rank[a];
    };
    auto key = [&](CellId c, std::uint32_t corner) {
        return static_cast<std::int64_t>(c) * corners + corner;
    };
    // Close corner identifications under face gluings: corners on the shared
    // hyperplane match by global coordinates.
    for (FaceId fi = 0; fi < static_cast<FaceId>(x.face_count()); ++fi) {
        const Face& f = x.face(fi);
        if (f.incident.size() < 2) continue;
        const FacetRef& f0 = f.incident.front();
        auto a0 = x.anchor(f0.cell);
        for (std::uint32_t corner = 0; corner < corners; ++corner) {
            if (((corner >> f.axis) & 1u) != static_cast<std::uint32_t>(f0.side)) continue;
            for (std::size_t j = 1; j < f.incident.size(); ++j) {
                const FacetRef& fr = f.incident[j];
                auto a = x.anchor(fr.cell);
                std::uint32_t corner2 = 0;
                bool ok = true;
                for (int i = 0; i < n; ++i) {
                    std::int64_t global = a0[i] + ((corner >> i) & 1u);
                    std::int64_t local = global - a[i];
                    if (local < 0 || local > 1) { ok = false; break; }
                    corner2 |= static_cast<std::uint32_t>(local) << i;
                }
                if (ok) unite(key(f0.cell, corner), key(fr.cell, corner2));
            }
        }
    }
    VertexIdentification out;
    out.vertex_of_corner.assign(total, -1);
    std::unordered_map<std::int64_t, std::int64_t> root_to_vertex;
    for (CellId c = 0; c < static_cast<CellId>(x.cell_count()); ++c) {
        for (std::uint32_t corner = 0; corner < corners; ++corner) {
            std::int64_t r = find(key(c, corner));
            auto [it, inserted] = root_to_vertex.try_emplace(r, static_cast<std::int64_t>(out.representative.size()));
            if (inserted) {
                out.representative.emplace_back(c, corner);
                out.cells_at_vertex.emplace_back();
            }
            std::int64_t v = it->second;
            out.vertex_of_corner[key(c, corner)] = v;
            auto& cells = out.cells_at_vertex[v];
            if (cells.empty() || cells.back() != c) cells.push_back(c);
        }
    }
    for (auto& cells : out.cells_at_vertex) {
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    }
    return out;
}

int link_bound(const CubeComplex& x) {
    VertexIdentification vi = identify_vertices(x);
    std::size_t best = 0;
    for (const auto& cells : vi.cells_at_vertex) best = std::max(best, cells.size());
    return static_cast<int>(best);
}

namespace {

// BFS eccentricity over the dual graph; returns (farthest cell, distance).
std::pair<CellId, int> bfs_far(const CubeComplex& x, CellId start, std::vector<int>& dist) {
    dist.assign(x.cell_count(), -1);
    std::deque<CellId> queue{start};
    dist[start] = 0;
    CellId far = start;
    while (!queue.empty()) {
        CellId c = queue.front();
        queue.pop_front();
        for (CellId nb : x.neighbors(c)) {
            if (dist[nb] == -1) {
                dist[nb] = dist[c] + 1;
                if (dist[nb] > dist[far]) far = nb;
                queue.push_back(nb);
            }
        }
    }
    return {far, dist[far]};
}

}  // namespace

ConnectivityReport check_gallery_connected(const CubeComplex& x, std::size_t exact_threshold) {
    ConnectivityReport rep;
    if (x.cell_count() == 0) return rep;
    std::vector<int> dist;
    auto [far, d] = bfs_far(x, 0, dist);
    rep.connected = std::none_of(dist.begin(), dist.end(), [](int v) { return v == -1; });
    if (!rep.connected) return rep;
    if (x.cell_count() <= exact_threshold) {
        int best = 0;
        for (CellId c = 0; c < static_cast<CellId>(x.cell_count()); ++c)
            best = std::max(best, bfs_far(x, c, dist).second);
        rep.diameter = best;
        rep.exact = true;
    } else {
        // double sweep: lower bound, usually tight on grid-like dual graphs
        auto [far2, d2] = bfs_far(x, far, dist);
        (void)far2;
        rep.diameter = std::max(d, d2);
        rep.exact = false;
    }
    return rep;
}

}  // namespace cubetower
