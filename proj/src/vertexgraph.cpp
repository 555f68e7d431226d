#include "cubetower/vertexgraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace cubetower {

namespace {

long ipow(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

struct DSU {
    std::vector<std::int32_t> parent;
    explicit DSU(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::int32_t>(i);
    }
    std::int32_t find(std::int32_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }
    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

std::int64_t ExplicitVertexGraph::point_key(CellId c, std::span<const std::int32_t> local) const {
    std::int64_t lin = 0;
    for (std::size_t i = 0; i < local.size(); ++i) lin = lin * (g + 1) + local[i];
    return static_cast<std::int64_t>(c) * pts_per_cell + lin;
}

std::int32_t ExplicitVertexGraph::node_at(CellId c, std::span<const std::int32_t> local) const {
    return node_of_point[point_key(c, local)];
}

void ExplicitVertexGraph::unpack(std::int64_t point, CellId& c, Local& local) const {
    c = static_cast<CellId>(point / pts_per_cell);
    std::int64_t lin = point % pts_per_cell;
    const int n = host->n();
    for (int i = n - 1; i >= 0; --i) {
        local[i] = static_cast<std::int32_t>(lin % (g + 1));
        lin /= (g + 1);
    }
}

void ExplicitVertexGraph::fine_coords(std::int32_t node, std::vector<std::int64_t>& out) const {
    CellId c;
    Local local;
    unpack(rep_point[node], c, local);
    auto a = host->anchor(c);
    out.resize(host->n());
    for (int i = 0; i < host->n(); ++i) out[i] = static_cast<std::int64_t>(a[i]) * g + local[i];
}

std::vector<double> ExplicitVertexGraph::coords(std::int32_t node) const {
    std::vector<std::int64_t> fc;
    fine_coords(node, fc);
    std::vector<double> out(fc.size());
    for (std::size_t i = 0; i < fc.size(); ++i) out[i] = fc[i] * unit;
    return out;
}

ExplicitVertexGraph build_vertex_graph(const CubeComplex& x, int depth, std::size_t max_points) {
    ExplicitVertexGraph vg;
    vg.host = &x;
    vg.depth = depth;
    vg.g = ipow(x.m(), depth);
    vg.unit = rat_to_double(x.side_length()) / static_cast<double>(vg.g);
    const int n = x.n();
    vg.pts_per_cell = ipow(vg.g + 1, n);
    const std::size_t total = x.cell_count() * static_cast<std::size_t>(vg.pts_per_cell);
    if (total > max_points)
        throw std::length_error("vertex graph exceeds the point guard (" + std::to_string(total) +
                                " > " + std::to_string(max_points) + ")");

    DSU dsu(total);
    // identify across faces: points on the shared hyperplane match by global
    // fine coordinates
    std::vector<std::int32_t> la(n), lb(n), t(n - 1, 0);
    for (FaceId fi = 0; fi < static_cast<FaceId>(x.face_count()); ++fi) {
        const Face& f = x.face(fi);
        if (f.incident.size() < 2) continue;
        const FacetRef& f0 = f.incident.front();
        auto a0 = x.anchor(f0.cell);
        std::fill(t.begin(), t.end(), 0);
        while (true) {  // (g+1)^(n-1) facet grid
            int ti = 0;
            for (int i = 0; i < n; ++i) {
                if (i == f.axis)
                    la[i] = f0.side == Side::High ? static_cast<std::int32_t>(vg.g) : 0;
                else
                    la[i] = t[ti++];
            }
            for (std::size_t j = 1; j < f.incident.size(); ++j) {
                const FacetRef& fr = f.incident[j];
                auto a = x.anchor(fr.cell);
                for (int i = 0; i < n; ++i)
                    lb[i] = static_cast<std::int32_t>((a0[i] - a[i]) * vg.g + la[i]);
                dsu.unite(static_cast<std::int32_t>(vg.point_key(f0.cell, la)),
                          static_cast<std::int32_t>(vg.point_key(fr.cell, lb)));
            }
            int i = n - 2;
            for (; i >= 0; --i) {
                if (++t[i] <= vg.g) break;
                t[i] = 0;
            }
            if (i < 0) break;
        }
    }

    // compress to node ids
    vg.node_of_point.assign(total, -1);
    std::unordered_map<std::int32_t, std::int32_t> root_node;
    root_node.reserve(total / 2);
    for (std::size_t p = 0; p < total; ++p) {
        std::int32_t r = dsu.find(static_cast<std::int32_t>(p));
        auto [it, inserted] = root_node.try_emplace(r, static_cast<std::int32_t>(vg.rep_point.size()));
        if (inserted) vg.rep_point.push_back(static_cast<std::int64_t>(p));
        vg.node_of_point[p] = it->second;
    }

    // edges: king moves within each cell grid
    std::vector<std::int32_t> delta(n, -1), pcur(n, 0), q(n, 0);
    std::vector<std::pair<std::int64_t, float>> edges;
    edges.reserve(total * 3);
    for (CellId c = 0; c < static_cast<CellId>(x.cell_count()); ++c) {
        // iterate all local points
        std::fill(pcur.begin(), pcur.end(), 0);
        while (true) {
            std::int32_t u = vg.node_of_point[vg.point_key(c, pcur)];
            // iterate king moves; emit each undirected edge once (lexicographic positive)
            std::fill(delta.begin(), delta.end(), -1);
            while (true) {
                bool nonzero = false, first_nonzero_pos = false;
                for (int i = 0; i < n; ++i) {
                    if (delta[i] != 0) {
                        if (!nonzero) first_nonzero_pos = delta[i] > 0;
                        nonzero = true;
                    }
                }
                if (nonzero && first_nonzero_pos) {
                    bool ok = true;
                    double len2 = 0;
                    for (int i = 0; i < n; ++i) {
                        q[i] = pcur[i] + delta[i];
                        if (q[i] < 0 || q[i] > vg.g) { ok = false; break; }
                        len2 += static_cast<double>(delta[i]) * delta[i];
                    }
                    if (ok) {
                        std::int32_t v = vg.node_of_point[vg.point_key(c, q)];
                        if (u != v) {
                            std::int64_t key = (static_cast<std::int64_t>(std::min(u, v)) << 32) |
                                               static_cast<std::uint32_t>(std::max(u, v));
                            edges.emplace_back(key, static_cast<float>(std::sqrt(len2) * vg.unit));
                        }
                    }
                }
                int i = n - 1;
                for (; i >= 0; --i) {
                    if (++delta[i] <= 1) break;
                    delta[i] = -1;
                }
                if (i < 0) break;
            }
            int i = n - 1;
            for (; i >= 0; --i) {
                if (++pcur[i] <= vg.g) break;
                pcur[i] = 0;
            }
            if (i < 0) break;
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const auto& a, const auto& b) { return a.first == b.first; }),
                edges.end());

    // CSR (both directions)
    const std::size_t nodes = vg.node_count();
    std::vector<std::int64_t> deg(nodes + 1, 0);
    for (const auto& [key, len] : edges) {
        ++deg[(key >> 32) + 1];
        ++deg[(key & 0xffffffff) + 1];
    }
    for (std::size_t i = 1; i <= nodes; ++i) deg[i] += deg[i - 1];
    vg.adj_start = deg;
    vg.adj_node.resize(edges.size() * 2);
    vg.adj_len.resize(edges.size() * 2);
    std::vector<std::int64_t> cursor = vg.adj_start;
    for (const auto& [key, len] : edges) {
        std::int32_t a = static_cast<std::int32_t>(key >> 32);
        std::int32_t b = static_cast<std::int32_t>(key & 0xffffffff);
        vg.adj_node[cursor[a]] = b;
        vg.adj_len[cursor[a]++] = len;
        vg.adj_node[cursor[b]] = a;
        vg.adj_len[cursor[b]++] = len;
    }
    return vg;
}

void ExplicitVertexGraph::dijkstra(std::int32_t source, std::vector<float>& dist) const {
    dijkstra_multi(std::span<const std::int32_t>(&source, 1), dist);
}

void ExplicitVertexGraph::dijkstra_multi(std::span<const std::int32_t> sources,
                                         std::vector<float>& dist) const {
    const std::size_t nodes = node_count();
    dist.assign(nodes, std::numeric_limits<float>::infinity());
    using Item = std::pair<float, std::int32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (std::int32_t s : sources) {
        dist[s] = 0.0f;
        pq.emplace(0.0f, s);
    }
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (std::int64_t e = adj_start[u]; e < adj_start[u + 1]; ++e) {
            std::int32_t v = adj_node[e];
            float nd = d + adj_len[e];
            if (nd < dist[v]) {
                dist[v] = nd;
                pq.emplace(nd, v);
            }
        }
    }
}

// ---- implicit graph ----

ImplicitVertexGraph make_implicit_graph(const CubeComplex& x, int depth) {
    ImplicitVertexGraph ig;
    ig.host = &x;
    ig.depth = depth;
    ig.g = ipow(x.m(), depth);
    ig.unit = rat_to_double(x.side_length()) / static_cast<double>(ig.g);
    ig.axis_bits = 1;
    while ((1L << ig.axis_bits) <= ig.g) ++ig.axis_bits;
    if (ig.axis_bits * x.n() + 24 > 63) throw std::length_error("implicit graph key overflow");
    return ig;
}

std::uint64_t ImplicitVertexGraph::pack(CellId c, std::span<const std::int32_t> local) const {
    std::uint64_t key = static_cast<std::uint64_t>(c);
    for (int i = 0; i < host->n(); ++i)
        key = (key << axis_bits) | static_cast<std::uint64_t>(local[i]);
    return key;
}

void ImplicitVertexGraph::unpack(std::uint64_t key, CellId& c, Local& local) const {
    const int n = host->n();
    const std::uint64_t mask = (1ull << axis_bits) - 1;
    for (int i = n - 1; i >= 0; --i) {
        local[i] = static_cast<std::int32_t>(key & mask);
        key >>= axis_bits;
    }
    c = static_cast<CellId>(key);
}

void ImplicitVertexGraph::orbit(CellId c, std::span<const std::int32_t> local,
                                std::vector<std::pair<CellId, Local>>& out) const {
    const int n = host->n();
    out.clear();
    Local start{};
    std::copy(local.begin(), local.end(), start.begin());
    out.emplace_back(c, start);
    // BFS closure through face gluings
    for (std::size_t head = 0; head < out.size(); ++head) {
        auto [cc, ll] = out[head];
        auto ac = host->anchor(cc);
        for (int axis = 0; axis < n; ++axis) {
            Side side;
            if (ll[axis] == 0)
                side = Side::Low;
            else if (ll[axis] == g)
                side = Side::High;
            else
                continue;
            const Face& f = host->face(host->facet_face(cc, axis, side));
            for (const FacetRef& fr : f.incident) {
                if (fr.cell == cc) continue;
                auto a2 = host->anchor(fr.cell);
                Local l2{};
                bool fresh = true;
                for (int i = 0; i < n; ++i)
                    l2[i] = static_cast<std::int32_t>((ac[i] - a2[i]) * g + ll[i]);
                for (const auto& [oc, ol] : out) {
                    if (oc == fr.cell && std::equal(ol.begin(), ol.begin() + n, l2.begin())) {
                        fresh = false;
                        break;
                    }
                }
                if (fresh) out.emplace_back(fr.cell, l2);
            }
        }
    }
}

std::uint64_t ImplicitVertexGraph::canonical(CellId c, std::span<const std::int32_t> local) const {
    std::vector<std::pair<CellId, Local>> orb;
    orbit(c, local, orb);
    std::uint64_t best = ~0ull;
    const int n = host->n();
    for (const auto& [oc, ol] : orb)
        best = std::min(best, pack(oc, std::span<const std::int32_t>(ol.data(), n)));
    return best;
}

void ImplicitVertexGraph::neighbors(std::uint64_t key,
                                    std::vector<std::pair<std::uint64_t, double>>& out) const {
    const int n = host->n();
    CellId c;
    Local local;
    unpack(key, c, local);
    std::vector<std::pair<CellId, Local>> orb;
    orbit(c, std::span<const std::int32_t>(local.data(), n), orb);
    out.clear();
    Local q{};
    std::vector<std::int32_t> delta(n, -1);
    for (const auto& [oc, ol] : orb) {
        std::fill(delta.begin(), delta.end(), -1);
        while (true) {
            bool nonzero = false;
            double len2 = 0;
            bool ok = true;
            for (int i = 0; i < n; ++i) {
                if (delta[i] != 0) nonzero = true;
                q[i] = ol[i] + delta[i];
                if (q[i] < 0 || q[i] > g) ok = false;
                len2 += static_cast<double>(delta[i]) * delta[i];
            }
            if (nonzero && ok) {
                std::uint64_t nb = canonical(oc, std::span<const std::int32_t>(q.data(), n));
                if (nb != key) {
                    bool seen = false;
                    for (const auto& [k, l] : out)
                        if (k == nb) { seen = true; break; }
                    if (!seen) out.emplace_back(nb, std::sqrt(len2) * unit);
                }
            }
            int i = n - 1;
            for (; i >= 0; --i) {
                if (++delta[i] <= 1) break;
                delta[i] = -1;
            }
            if (i < 0) break;
        }
    }
}

double ImplicitVertexGraph::truncated_distance(std::uint64_t src, std::uint64_t dst, double radius,
                                               bool& settled) const {
    settled = false;
    if (src == dst) {
        settled = true;
        return 0.0;
    }
    std::unordered_map<std::uint64_t, double> dist;
    using Item = std::pair<double, std::uint64_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[src] = 0.0;
    pq.emplace(0.0, src);
    std::vector<std::pair<std::uint64_t, double>> nbrs;
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        auto it = dist.find(u);
        if (it != dist.end() && d > it->second) continue;
        if (u == dst) {
            settled = true;
            return d;
        }
        if (d > radius) break;
        neighbors(u, nbrs);
        for (const auto& [v, len] : nbrs) {
            double nd = d + len;
            auto [vit, fresh] = dist.try_emplace(v, nd);
            if (!fresh && vit->second <= nd) continue;
            vit->second = nd;
            pq.emplace(nd, v);
        }
    }
    auto it = dist.find(dst);
    if (it != dist.end()) {
        // reached but not settled before truncation; still an upper bound
        settled = true;
        return it->second;
    }
    return radius;
}

}  // namespace cubetower
