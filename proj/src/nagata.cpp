#include "cubetower/nagata.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "cubetower/parallel.hpp"

namespace cubetower {

namespace {

Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

Int rat_floor(const Rat& r) {
    return floor_div(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

// Truncated Dijkstra on the explicit graph from a source set; hash-based so
// repeated small searches avoid resetting full arrays.
void local_dijkstra(const ExplicitVertexGraph& g, std::span<const std::int32_t> sources,
                    double radius, std::unordered_map<std::int32_t, float>& dist) {
    dist.clear();
    using Item = std::pair<float, std::int32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (std::int32_t s : sources) {
        dist[s] = 0.0f;
        pq.emplace(0.0f, s);
    }
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        auto it = dist.find(u);
        if (it != dist.end() && d > it->second) continue;
        if (d > radius) break;
        for (std::int64_t e = g.adj_start[u]; e < g.adj_start[u + 1]; ++e) {
            std::int32_t v = g.adj_node[e];
            float nd = d + g.adj_len[e];
            if (nd > radius) continue;
            auto [vit, fresh] = dist.try_emplace(v, nd);
            if (!fresh && vit->second <= nd) continue;
            vit->second = nd;
            pq.emplace(nd, v);
        }
    }
}

}  // namespace

NagataCover nagata_cover_grid(const FiniteMetricSpace& fms, const Rat& s,
                              std::optional<Rat> margin_override) {
    const ExplicitVertexGraph& g = fms.graph();
    const CubeComplex& x = *g.host;
    const int n = x.n();
    const int families = n + 1;

    // sampling mesh compatibility: s >= 2 * mesh (mesh = cell diagonal of the
    // depth grid)
    const double mesh = g.unit * std::sqrt(static_cast<double>(n));
    if (rat_to_double(s) < 2.0 * mesh)
        throw std::invalid_argument("cover scale below twice the sampling mesh");

    NagataCover cover;
    cover.scale = s;
    cover.families = families;

    const Rat unit = x.side_length() / Rat(g.g);  // exact fine-grid unit
    const Rat box = s * Rat(5, 4);                // coverage needs side > s
    const Rat margin = margin_override ? *margin_override : s / Rat(2 * (n + 1));
    const Rat sep_scale = margin * 2;             // anchor-guaranteed separation

    // assign points to shrunk boxes, exactly
    std::map<std::pair<int, std::vector<Int>>, std::vector<std::int32_t>> boxes;
    std::vector<std::int64_t> fc;
    for (std::int32_t p = 0; p < static_cast<std::int32_t>(g.node_count()); ++p) {
        g.fine_coords(p, fc);
        for (int j = 0; j < families; ++j) {
            Rat shift = box * Rat(j) / Rat(families);
            std::vector<Int> b(n);
            bool inside = true;
            for (int i = 0; i < n; ++i) {
                Rat xi = Rat(fc[i]) * unit + shift;
                b[i] = rat_floor(xi / box);
                Rat lo = Rat(b[i]) * box + margin;
                Rat hi = Rat(b[i] + 1) * box - margin;
                if (!(lo <= xi && xi <= hi)) {
                    inside = false;
                    break;
                }
            }
            if (inside) boxes[{j, std::move(b)}].push_back(p);
        }
    }
    for (auto& [key, pts] : boxes) {
        cover.family_of.push_back(key.first);
        cover.sets.push_back(std::move(pts));
    }
    const std::size_t k = cover.sets.size();
    if (k == 0) throw std::runtime_error("cover construction produced no sets");

    // point -> sets membership (for the same-family min separation scan)
    std::vector<std::vector<std::int32_t>> sets_of_point(g.node_count());
    for (std::size_t si = 0; si < k; ++si)
        for (std::int32_t p : cover.sets[si]) sets_of_point[p].push_back(static_cast<std::int32_t>(si));

    // one full multi-source Dijkstra per set; extract min-distance and
    // one-sided Hausdorff matrices
    cover.mindist.assign(k * k, std::numeric_limits<float>::infinity());
    std::vector<float> one_sided(k * k, 0.0f);  // A[s][t] = max_{p in s} d(p, t-set sources)
    parallel_for(static_cast<std::int64_t>(k), [&](std::int64_t t) {
        thread_local std::vector<float> dist;
        g.dijkstra_multi(cover.sets[t], dist);
        for (std::size_t si = 0; si < k; ++si) {
            float worst = 0.0f, best = std::numeric_limits<float>::infinity();
            for (std::int32_t p : cover.sets[si]) {
                worst = std::max(worst, dist[p]);
                best = std::min(best, dist[p]);
            }
            one_sided[si * k + t] = worst;
            cover.mindist[si * k + t] = best;
        }
    });
    cover.hausdorff.assign(k * k, 0.0f);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            cover.hausdorff[a * k + b] = std::max(one_sided[a * k + b], one_sided[b * k + a]);

    // sort: a set with no close neighbor one family down moves down (keeps
    // separation, establishes the sorted property)
    const double sep_threshold = rat_to_double(sep_scale) * (1.0 - 1e-12);
    bool moved = true;
    while (moved) {
        moved = false;
        for (std::size_t si = 0; si < k; ++si) {
            int fam = cover.family_of[si];
            if (fam == 0) continue;
            float best = std::numeric_limits<float>::infinity();
            for (std::size_t sj = 0; sj < k; ++sj)
                if (sj != si && cover.family_of[sj] == fam - 1)
                    best = std::min(best, cover.mindist[si * k + sj]);
            if (best >= sep_threshold) {
                cover.family_of[si] = fam - 1;
                moved = true;
            }
        }
    }

    // verification against the realized scale
    cover.s_witness = std::numeric_limits<double>::infinity();
    bool any_pair = false;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            if (cover.family_of[a] == cover.family_of[b]) {
                any_pair = true;
                cover.s_witness = std::min(cover.s_witness, static_cast<double>(cover.mindist[a * k + b]));
            }
    if (!any_pair) cover.s_witness = rat_to_double(s);  // single set per family
    cover.nsep_pass = cover.s_witness >= sep_threshold && cover.s_witness > 0;

    // diameters via local searches from each member
    const double diam_cap = 4.0 * rat_to_double(box) * std::sqrt(static_cast<double>(n));
    std::vector<float> diam(k, 0.0f);
    parallel_for(static_cast<std::int64_t>(k), [&](std::int64_t si) {
        thread_local std::unordered_map<std::int32_t, float> dist;
        float best = 0.0f;
        for (std::int32_t p : cover.sets[si]) {
            local_dijkstra(g, std::span<const std::int32_t>(&p, 1), diam_cap, dist);
            for (std::int32_t q : cover.sets[si]) {
                auto it = dist.find(q);
                best = std::max(best, it == dist.end() ? static_cast<float>(diam_cap) : it->second);
            }
        }
        diam[si] = best;
    });
    cover.max_diam = *std::max_element(diam.begin(), diam.end());
    cover.c_witness = cover.s_witness > 0 ? cover.max_diam / cover.s_witness : 0.0;
    cover.nbd_pass = cover.max_diam < diam_cap;

    cover.coverage_pass = true;
    for (std::int32_t p = 0; p < static_cast<std::int32_t>(g.node_count()); ++p)
        if (sets_of_point[p].empty()) {
            cover.coverage_pass = false;
            break;
        }

    cover.sorted_pass = true;
    for (std::size_t si = 0; si < k && cover.sorted_pass; ++si) {
        int fam = cover.family_of[si];
        if (fam == 0) continue;
        bool close = false;
        for (std::size_t sj = 0; sj < k; ++sj)
            if (sj != si && cover.family_of[sj] == fam - 1 &&
                cover.mindist[si * k + sj] < sep_threshold) {
                close = true;
                break;
            }
        cover.sorted_pass = close;
    }

    if (!cover.nsep_pass) throw std::runtime_error("Nagata cover verification failed: separation");
    if (!cover.nbd_pass) throw std::runtime_error("Nagata cover verification failed: diameter");
    if (!cover.coverage_pass) throw std::runtime_error("Nagata cover verification failed: coverage");
    if (!cover.sorted_pass) throw std::runtime_error("Nagata cover verification failed: sortedness");
    return cover;
}

namespace {

// || F(a) - F(b) ||_inf with F values as sparse combinations of Hausdorff rows
double dp_distance(const NagataCover& cover,
                   const std::vector<std::pair<std::int32_t, double>>& fa,
                   const std::vector<std::pair<std::int32_t, double>>& fb) {
    const std::size_t k = cover.set_count();
    std::array<const float*, 16> rows{};
    std::array<double, 16> coef{};
    std::size_t m = 0;
    for (const auto& [s, w] : fa) {
        rows[m] = &cover.hausdorff[static_cast<std::size_t>(s) * k];
        coef[m++] = w;
    }
    for (const auto& [s, w] : fb) {
        bool merged = false;
        const float* row = &cover.hausdorff[static_cast<std::size_t>(s) * k];
        for (std::size_t i = 0; i < m; ++i)
            if (rows[i] == row) {
                coef[i] -= w;
                merged = true;
                break;
            }
        if (!merged) {
            rows[m] = row;
            coef[m++] = -w;
        }
    }
    double best = 0.0;
    for (std::size_t q = 0; q < k; ++q) {
        double v = 0.0;
        for (std::size_t i = 0; i < m; ++i) v += coef[i] * rows[i][q];
        best = std::max(best, std::abs(v));
    }
    return best;
}

}  // namespace

std::pair<EmbeddedNerve, PolyApproxCertificate> poly_approx(const FiniteMetricSpace& fms,
                                                            const NagataCover& cover, const Rat& s,
                                                            const PolyApproxOptions& opts) {
    const ExplicitVertexGraph& g = fms.graph();
    const CubeComplex& x = *g.host;
    const int n = x.n();
    const std::size_t k = cover.set_count();
    const std::size_t pts = g.node_count();

    EmbeddedNerve nerve;
    nerve.cover = &cover;
    PolyApproxCertificate cert;
    cert.s_phi = cover.s_witness;
    cert.bound_distortion = (2.0 + 4.0 * cover.c_witness) * rat_to_double(s);
    cert.bound_lip = 6.0 * n * (2.0 / 3.0 + cover.c_witness);

    // bump functions: phi_S(x) = clamp(1 - 3 d(x,S)/s_phi, 0, 1), sparse
    std::vector<std::vector<std::pair<std::int32_t, double>>> raw(pts);
    {
        std::vector<std::vector<std::pair<std::int32_t, float>>> per_set(k);
        parallel_for(static_cast<std::int64_t>(k), [&](std::int64_t si) {
            thread_local std::unordered_map<std::int32_t, float> dist;
            local_dijkstra(g, cover.sets[si], cert.s_phi / 3.0, dist);
            auto& out = per_set[si];
            out.assign(dist.begin(), dist.end());
            std::sort(out.begin(), out.end());
        });
        for (std::size_t si = 0; si < k; ++si)
            for (const auto& [p, d] : per_set[si]) {
                double phi = 1.0 - 3.0 * d / cert.s_phi;
                if (phi > 0) raw[p].emplace_back(static_cast<std::int32_t>(si), phi);
            }
    }

    // partition checks: at most one nonzero per family, pre-rescale sum in [1, N+1]
    cert.partition_ok = true;
    for (std::size_t p = 0; p < pts && cert.partition_ok; ++p) {
        double sum = 0.0;
        std::vector<int> fam_seen;
        for (const auto& [si, phi] : raw[p]) {
            sum += phi;
            int f = cover.family_of[si];
            if (std::find(fam_seen.begin(), fam_seen.end(), f) != fam_seen.end())
                cert.partition_ok = false;
            fam_seen.push_back(f);
        }
        if (sum < 1.0 - 1e-9 || sum > n + 1 + 1e-9) cert.partition_ok = false;
    }

    nerve.f_map.resize(pts);
    std::map<std::vector<std::int32_t>, bool> simplex_set;
    for (std::size_t p = 0; p < pts; ++p) {
        double sum = 0.0;
        for (const auto& [si, phi] : raw[p]) sum += phi;
        auto& f = nerve.f_map[p];
        std::vector<std::int32_t> support;
        for (const auto& [si, phi] : raw[p]) {
            f.emplace_back(si, phi / sum);
            support.push_back(si);
        }
        std::sort(support.begin(), support.end());
        simplex_set.emplace(std::move(support), true);
    }
    for (auto& [sup, _] : simplex_set) {
        nerve.dimension = std::max(nerve.dimension, static_cast<int>(sup.size()) - 1);
        nerve.simplices.push_back(sup);
    }
    cert.nerve_dim_ok = nerve.dimension <= n;

    // Lipschitz constant: exact over graph edges (path metric)
    {
        std::vector<double> per_node(pts, 0.0);
        parallel_for(static_cast<std::int64_t>(pts), [&](std::int64_t u) {
            double best = 0.0;
            for (std::int64_t e = g.adj_start[u]; e < g.adj_start[u + 1]; ++e) {
                std::int32_t v = g.adj_node[e];
                if (v < u) continue;
                double d = dp_distance(cover, nerve.f_map[u], nerve.f_map[v]);
                best = std::max(best, d / g.adj_len[e]);
            }
            per_node[u] = best;
        });
        cert.measured_lip = *std::max_element(per_node.begin(), per_node.end());
    }

    // distortion sup over a coarse net (all pairs) plus seeded random pairs
    {
        std::vector<std::int32_t> net;
        std::vector<std::int64_t> fc;
        for (std::int32_t p = 0; p < static_cast<std::int32_t>(pts); ++p) {
            g.fine_coords(p, fc);
            bool coarse = true;
            for (auto v : fc)
                if (v % g.g != 0) { coarse = false; break; }
            if (coarse) net.push_back(p);
        }
        while (net.size() * net.size() > opts.net_stride_pairs_cap * 2) {
            std::vector<std::int32_t> half;
            for (std::size_t i = 0; i < net.size(); i += 2) half.push_back(net[i]);
            net.swap(half);
        }
        std::vector<double> per_src(net.size(), 0.0);
        std::vector<long> cnt(net.size(), 0);
        parallel_for(static_cast<std::int64_t>(net.size()), [&](std::int64_t i) {
            thread_local std::vector<float> dist;
            g.dijkstra(net[i], dist);
            double best = 0.0;
            for (std::size_t j = i + 1; j < net.size(); ++j) {
                double dp = dp_distance(cover, nerve.f_map[net[i]], nerve.f_map[net[j]]);
                best = std::max(best, std::abs(dp - dist[net[j]]));
                ++cnt[i];
            }
            per_src[i] = best;
        });
        for (double v : per_src) cert.measured_distortion = std::max(cert.measured_distortion, v);
        for (long c : cnt) cert.pairs_scanned += c;

        std::mt19937_64 rng(opts.seed);
        std::vector<std::int32_t> rs;
        for (std::size_t i = 0; i < opts.random_sources; ++i)
            rs.push_back(static_cast<std::int32_t>(rng() % pts));
        std::vector<std::vector<std::int32_t>> rt(rs.size());
        for (auto& v : rt)
            for (std::size_t i = 0; i < opts.targets_per_source; ++i)
                v.push_back(static_cast<std::int32_t>(rng() % pts));
        std::vector<double> per_rs(rs.size(), 0.0);
        parallel_for(static_cast<std::int64_t>(rs.size()), [&](std::int64_t i) {
            thread_local std::vector<float> dist;
            g.dijkstra(rs[i], dist);
            double best = 0.0;
            for (std::int32_t v : rt[i]) {
                double dp = dp_distance(cover, nerve.f_map[rs[i]], nerve.f_map[v]);
                best = std::max(best, std::abs(dp - dist[v]));
            }
            per_rs[i] = best;
        });
        for (double v : per_rs) cert.measured_distortion = std::max(cert.measured_distortion, v);
        cert.pairs_scanned += static_cast<long>(rs.size() * opts.targets_per_source);
    }

    cert.pass = cert.partition_ok && cert.nerve_dim_ok &&
                cert.measured_distortion <= cert.bound_distortion &&
                cert.measured_lip <= cert.bound_lip;
    return {std::move(nerve), std::move(cert)};
}

}  // namespace cubetower
