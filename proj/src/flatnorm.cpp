#include "cubetower/flatnorm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "cubetower/parallel.hpp"
#include "cubetower/simplex.hpp"

namespace cubetower {

FlatNormResult flat_norm(const GridChain& t) {
    const GridComplex& g = *t.grid;
    const int k = t.dim;
    FlatNormResult res;
    res.s1.grid = &g;
    res.s1.dim = k;
    res.s2.grid = &g;
    res.s2.dim = std::min(k + 1, g.d());
    if (k == g.d()) {
        res.value = mass(t);
        res.s1 = t;
        return res;
    }
    std::vector<long> kcells = g.cells_of_dim(k);
    std::vector<long> qcells = g.cells_of_dim(k + 1);
    const int m = static_cast<int>(kcells.size());
    const int nq = static_cast<int>(qcells.size());
    const int n = 2 * m + 2 * nq;
    std::unordered_map<long, int> krow;
    for (int i = 0; i < m; ++i) krow[kcells[i]] = i;

    LpProblem lp;
    lp.rows = m;
    lp.cols = n;
    lp.a.assign(static_cast<std::size_t>(m) * n, 0.0);
    lp.b.assign(m, 0.0);
    lp.c.assign(n, 0.0);
    const double vk = g.volume(k), vq = g.volume(k + 1);
    for (int i = 0; i < m; ++i) {
        lp.a[static_cast<std::size_t>(i) * n + i] = 1.0;          // s1+
        lp.a[static_cast<std::size_t>(i) * n + m + i] = -1.0;     // s1-
        lp.c[i] = vk;
        lp.c[m + i] = vk;
    }
    std::vector<std::pair<long, int>> faces;
    for (int qi = 0; qi < nq; ++qi) {
        g.boundary_of(qcells[qi], faces);
        for (auto [fid, sign] : faces) {
            int r = krow.at(fid);
            lp.a[static_cast<std::size_t>(r) * n + 2 * m + qi] += sign;        // s2+
            lp.a[static_cast<std::size_t>(r) * n + 2 * m + nq + qi] -= sign;   // s2-
        }
        lp.c[2 * m + qi] = vq;
        lp.c[2 * m + nq + qi] = vq;
    }
    for (const auto& [id, coef] : t.entries) lp.b[krow.at(id)] = coef;
    lp.basis.resize(m);
    for (int i = 0; i < m; ++i) lp.basis[i] = lp.b[i] >= 0 ? i : m + i;

    LpResult sol = simplex_solve(lp);
    res.value = sol.objective;
    res.lp_iterations = sol.iterations;
    for (int i = 0; i < m; ++i) {
        double v = sol.x[i] - sol.x[m + i];
        if (std::abs(v) > 1e-12) res.s1.entries[kcells[i]] = v;
    }
    for (int qi = 0; qi < nq; ++qi) {
        double v = sol.x[2 * m + qi] - sol.x[2 * m + nq + qi];
        if (std::abs(v) > 1e-12) res.s2.entries[qcells[qi]] = v;
    }
    return res;
}

double flat_norm_bruteforce(const GridChain& t, int box) {
    const GridComplex& g = *t.grid;
    const int k = t.dim;
    if (k == g.d()) return mass(t);
    std::vector<long> qcells = g.cells_of_dim(k + 1);
    const std::size_t nq = qcells.size();
    const long radix = 2L * box + 1;
    long total = 1;
    for (std::size_t i = 0; i < nq; ++i) {
        total *= radix;
        if (total > 100000000L) throw std::length_error("brute force space too large");
    }
    const double vk = g.volume(k), vq = g.volume(k + 1);
    std::vector<double> best_per(64, std::numeric_limits<double>::infinity());
    parallel_for(total, [&](std::int64_t code) {
        std::vector<double> s2(nq);
        long c = code;
        double mass2 = 0.0;
        for (std::size_t i = 0; i < nq; ++i) {
            s2[i] = static_cast<double>(c % radix - box);
            c /= radix;
            mass2 += std::abs(s2[i]) * vq;
        }
        // mass(t - dS2)
        std::map<long, double> diff;
        for (const auto& [id, coef] : t.entries) diff[id] = coef;
        std::vector<std::pair<long, int>> faces;
        for (std::size_t i = 0; i < nq; ++i) {
            if (s2[i] == 0.0) continue;
            t.grid->boundary_of(qcells[i], faces);
            for (auto [fid, sign] : faces) diff[fid] -= s2[i] * sign;
        }
        double mass1 = 0.0;
        for (const auto& [id, v] : diff) mass1 += std::abs(v) * vk;
        double obj = mass1 + mass2;
#ifdef CUBETOWER_HAVE_OPENMP
        int slot = omp_get_thread_num() % 64;
#else
        int slot = 0;
#endif
        best_per[slot] = std::min(best_per[slot], obj);
    });
    return *std::min_element(best_per.begin(), best_per.end());
}

ConvexPolygon rotated_square() {
    ConvexPolygon p;
    p.vertices = {{Rat(1), Rat(1, 2)}, {Rat(1, 2), Rat(1)}, {Rat(0), Rat(1, 2)}, {Rat(1, 2), Rat(0)}};
    return p;
}

namespace {

// Sutherland-Hodgman against an axis-aligned halfplane (exact rationals).
void clip_halfplane(std::vector<std::pair<Rat, Rat>>& poly, int axis, const Rat& bound, bool keep_le) {
    std::vector<std::pair<Rat, Rat>> out;
    const std::size_t n = poly.size();
    auto coord = [&](const std::pair<Rat, Rat>& p) { return axis == 0 ? p.first : p.second; };
    auto inside = [&](const std::pair<Rat, Rat>& p) {
        return keep_le ? coord(p) <= bound : coord(p) >= bound;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % n];
        bool ia = inside(a), ib = inside(b);
        if (ia) out.push_back(a);
        if (ia != ib) {
            Rat ca = coord(a), cb = coord(b);
            Rat u = (bound - ca) / (cb - ca);
            out.emplace_back(a.first + u * (b.first - a.first), a.second + u * (b.second - a.second));
        }
    }
    poly.swap(out);
}

Rat polygon_area(const std::vector<std::pair<Rat, Rat>>& poly) {
    Rat two_a(0);
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % n];
        two_a += a.first * b.second - b.first * a.second;
    }
    return abs(two_a) / 2;
}

}  // namespace

GridChain rasterize(const ConvexPolygon& region, double weight, const GridComplex& g) {
    if (g.d() != 2) throw std::invalid_argument("rasterize implemented for d = 2");
    GridChain t;
    t.grid = &g;
    t.dim = 2;
    const long n = g.n();
    const Rat cell_vol = Rat(1) / Rat(n * n);
    std::vector<double> coef(static_cast<std::size_t>(n) * n, 0.0);
    parallel_for(n * n, [&](std::int64_t idx) {
        long i = idx / n, j = idx % n;
        std::vector<std::pair<Rat, Rat>> poly = region.vertices;
        clip_halfplane(poly, 0, Rat(i, n), false);
        if (!poly.empty()) clip_halfplane(poly, 0, Rat(i + 1, n), true);
        if (!poly.empty()) clip_halfplane(poly, 1, Rat(j, n), false);
        if (!poly.empty()) clip_halfplane(poly, 1, Rat(j + 1, n), true);
        if (poly.size() >= 3) {
            Rat frac = polygon_area(poly) / cell_vol;  // average density
            coef[idx] = weight * rat_to_double(frac);
        }
    });
    std::vector<long> pos(2);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            double v = coef[static_cast<std::size_t>(i) * n + j];
            if (v != 0.0) {
                pos[0] = i;
                pos[1] = j;
                t.entries[g.id(0b11u, pos)] = v;
            }
        }
    return t;
}

std::pair<GridChain, CubicalApproxCertificate> cubical_approximation(const GridChain& t,
                                                                     const GridComplex& coarse,
                                                                     double epsilon) {
    const GridComplex& fine = *t.grid;
    const int d = fine.d();
    if (t.dim != d) throw std::invalid_argument("cubical approximation takes top-dimensional chains");
    if (fine.n() % coarse.n() != 0) throw std::invalid_argument("fine grid must refine the coarse grid");
    const long r = fine.n() / coarse.n();
    double block = std::pow(static_cast<double>(r), d);

    GridChain tc;
    tc.grid = &coarse;
    tc.dim = d;
    std::uint32_t mask;
    std::vector<long> pos, cpos(d);
    const std::uint32_t top = (1u << d) - 1;
    for (const auto& [id, coef] : t.entries) {
        fine.decode(id, mask, pos);
        for (int i = 0; i < d; ++i) cpos[i] = pos[i] / r;
        tc.entries[coarse.id(top, cpos)] += coef / block;
    }
    tc.prune();

    CubicalApproxCertificate cert;
    cert.epsilon = epsilon;
    GridChain diff = t;
    GridChain tc_fine = refine_chain(tc, fine);
    for (const auto& [id, coef] : tc_fine.entries) diff.entries[id] -= coef;
    diff.prune();
    cert.flat_distance = flat_norm(diff).value;
    cert.normal_mass_fine = mass(t) + mass(boundary(t));
    cert.normal_mass_coarse = mass(tc) + mass(boundary(tc));
    cert.normal_mass_ok = cert.normal_mass_coarse <= cert.normal_mass_fine + 1e-9;
    cert.flat_ok = cert.flat_distance <= epsilon;
    return {std::move(tc), cert};
}

}  // namespace cubetower
