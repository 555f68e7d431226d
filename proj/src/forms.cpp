#include "cubetower/forms.hpp"

#include <cmath>
#include <stdexcept>

#include "cubetower/parallel.hpp"

namespace cubetower {

namespace {

// Gauss-Legendre nodes/weights on [0,1].
struct Quad {
    std::vector<double> x, w;
};

Quad gauss01(int order) {
    // nodes on [-1,1], mapped to [0,1]
    static const std::vector<std::vector<std::pair<double, double>>> table = {
        {{0.0, 2.0}},
        {{-0.5773502691896257, 1.0}, {0.5773502691896257, 1.0}},
        {{-0.7745966692414834, 0.5555555555555556},
         {0.0, 0.8888888888888888},
         {0.7745966692414834, 0.5555555555555556}},
        {{-0.8611363115940526, 0.3478548451374538},
         {-0.3399810435848563, 0.6521451548625461},
         {0.3399810435848563, 0.6521451548625461},
         {0.8611363115940526, 0.3478548451374538}},
        {{-0.9061798459386640, 0.2369268850561891},
         {-0.5384693101056831, 0.4786286704993665},
         {0.0, 0.5688888888888889},
         {0.5384693101056831, 0.4786286704993665},
         {0.9061798459386640, 0.2369268850561891}},
    };
    if (order < 1 || order > static_cast<int>(table.size()))
        throw std::invalid_argument("quadrature order out of range (1..5)");
    Quad q;
    for (auto [x, w] : table[order - 1]) {
        q.x.push_back(0.5 * (x + 1.0));
        q.w.push_back(0.5 * w);
    }
    return q;
}

double det(std::vector<double> a, int n) {
    double d = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (piv != col) {
            for (int k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
            d = -d;
        }
        double p = a[col * n + col];
        if (p == 0.0) return 0.0;
        d *= p;
        for (int r = col + 1; r < n; ++r) {
            double f = a[r * n + col] / p;
            for (int k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
        }
    }
    return d;
}

// Multilinear interpolation over a unit cube from 2^n corner values, plus the
// gradient with respect to the local coordinates.
void multilinear_eval(const double* corner_vals, int n, const double* u, double& value,
                      double* grad) {
    const int corners = 1 << n;
    value = 0.0;
    for (int l = 0; l < n; ++l) grad[l] = 0.0;
    for (int c = 0; c < corners; ++c) {
        double base = corner_vals[c];
        double prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= ((c >> i) & 1) ? u[i] : 1.0 - u[i];
        value += base * prod;
        for (int l = 0; l < n; ++l) {
            double dp = ((c >> l) & 1) ? 1.0 : -1.0;
            for (int i = 0; i < n; ++i) {
                if (i == l) continue;
                dp *= ((c >> i) & 1) ? u[i] : 1.0 - u[i];
            }
            grad[l] += base * dp;
        }
    }
}

}  // namespace

FormPack coordinate_forms(const CubeComplex& host) {
    FormPack fp;
    fp.host = &host;
    fp.vertices = identify_vertices(host);
    const int n = host.n();
    const std::size_t nv = fp.vertices.representative.size();
    double side = rat_to_double(host.side_length());
    fp.values.assign(n + 1, std::vector<double>(nv, 0.0));
    for (std::size_t v = 0; v < nv; ++v) {
        auto [cell, corner] = fp.vertices.representative[v];
        auto a = host.anchor(cell);
        fp.values[0][v] = 1.0;
        for (int j = 0; j < n; ++j)
            fp.values[j + 1][v] = (a[j] + ((corner >> j) & 1u)) * side;
    }
    return fp;
}

FormPack random_forms(const CubeComplex& host, std::uint64_t seed) {
    FormPack fp;
    fp.host = &host;
    fp.vertices = identify_vertices(host);
    const int n = host.n();
    const std::size_t nv = fp.vertices.representative.size();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    fp.values.assign(n + 1, std::vector<double>(nv, 0.0));
    for (int j = 0; j <= n; ++j)
        for (std::size_t v = 0; v < nv; ++v) fp.values[j][v] = uni(rng);
    return fp;
}

double evaluate_on_form(const CubicalChain& t, const FormPack& forms, int quad_order,
                        const std::function<CellId(CellId)>& ancestor) {
    const CubeComplex& xi = *t.host;
    const CubeComplex& xk = *forms.host;
    const int n = xi.n();
    if (t.dim != n) throw std::invalid_argument("form evaluation takes top-dimensional chains");
    if (xi.level() < xk.level()) throw std::invalid_argument("chain must live at a finer level");
    Quad q = gauss01(quad_order);
    const double side_i = rat_to_double(xi.side_length());
    const double side_k = rat_to_double(xk.side_length());
    const int corners = 1 << n;

    std::vector<std::pair<CellId, double>> items;
    items.reserve(t.entries.size());
    for (const auto& [c, coef] : t.entries) items.emplace_back(c, rat_to_double(coef));

    std::vector<double> contrib(items.size(), 0.0);
    parallel_for(static_cast<std::int64_t>(items.size()), [&](std::int64_t idx) {
        auto [c, coef] = items[idx];
        CellId anc = ancestor(c);
        auto ai = xi.anchor(c);
        auto ak = xk.anchor(anc);
        // corner values of the N+1 functions on the ancestor cell
        std::vector<double> cv(static_cast<std::size_t>(n + 1) * corners);
        for (int cr = 0; cr < corners; ++cr) {
            std::int64_t vid = forms.vertices.vertex_of_corner[static_cast<std::int64_t>(anc) * corners + cr];
            for (int j = 0; j <= n; ++j) cv[j * corners + cr] = forms.values[j][vid];
        }
        std::vector<int> qi(n, 0);
        std::vector<double> u(n), grads(static_cast<std::size_t>(n) * n), g(n);
        double total = 0.0;
        bool done = false;
        while (!done) {
            double wq = 1.0;
            for (int i = 0; i < n; ++i) {
                // quadrature point in local coordinates of the ancestor cell
                double x_global = (ai[i] + q.x[qi[i]]) * side_i;
                u[i] = (x_global - ak[i] * side_k) / side_k;
                wq *= q.w[qi[i]];
            }
            double f0, dummy_grad[8];
            multilinear_eval(cv.data(), n, u.data(), f0, dummy_grad);
            for (int j = 1; j <= n; ++j) {
                double val;
                multilinear_eval(cv.data() + static_cast<std::size_t>(j) * corners, n, u.data(), val,
                                 g.data());
                for (int l = 0; l < n; ++l) grads[(j - 1) * n + l] = g[l] / side_k;
            }
            total += wq * f0 * det(grads, n);
            for (int i = n - 1; i >= 0; --i) {
                if (++qi[i] < static_cast<int>(q.x.size())) break;
                qi[i] = 0;
                if (i == 0) done = true;
            }
        }
        contrib[idx] = coef * total * std::pow(side_i, n);
    });
    double sum = 0.0;
    for (double v : contrib) sum += v;  // fixed order, deterministic
    return sum;
}

double evaluate_on_form(const CubicalChain& t, const FormPack& forms, int quad_order) {
    if (t.host != forms.host) throw std::invalid_argument("hosts differ; provide an ancestor map");
    return evaluate_on_form(t, forms, quad_order, [](CellId c) { return c; });
}

}  // namespace cubetower
