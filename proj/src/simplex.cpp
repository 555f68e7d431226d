#include "cubetower/simplex.hpp"

#include <cmath>
#include <stdexcept>

namespace cubetower {

LpResult simplex_solve(const LpProblem& p, double eps, long max_iters) {
    const int m = p.rows, n = p.cols;
    if (static_cast<int>(p.basis.size()) != m) throw std::invalid_argument("basis size != rows");
    // tableau: m x (n+1), rows already expressed in the starting basis. The
    // caller guarantees basis columns form a signed identity; normalize rows
    // so each basic column reads +1 and b stays >= 0.
    std::vector<double> t(static_cast<std::size_t>(m) * (n + 1));
    std::vector<int> basis = p.basis;
    for (int r = 0; r < m; ++r) {
        double pivot = p.a[static_cast<std::size_t>(r) * n + basis[r]];
        if (std::abs(pivot) < eps) throw std::invalid_argument("starting basis not identity-like");
        double inv = 1.0 / pivot;
        for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(r) * (n + 1) + j] = p.a[static_cast<std::size_t>(r) * n + j] * inv;
        t[static_cast<std::size_t>(r) * (n + 1) + n] = p.b[r] * inv;
        if (t[static_cast<std::size_t>(r) * (n + 1) + n] < -eps)
            throw std::invalid_argument("starting basis infeasible");
    }

    LpResult res;
    auto row = [&](int r) { return t.data() + static_cast<std::size_t>(r) * (n + 1); };
    for (long iter = 0; iter < max_iters; ++iter) {
        // reduced costs: c_j - c_B^T T_j ; entering = smallest j with negative
        int enter = -1;
        for (int j = 0; j < n && enter < 0; ++j) {
            double red = p.c[j];
            for (int r = 0; r < m; ++r) red -= p.c[basis[r]] * row(r)[j];
            if (red < -eps) enter = j;
        }
        if (enter < 0) {
            res.optimal = true;
            res.iterations = iter;
            break;
        }
        // ratio test, Bland ties by smallest basis variable
        int leave = -1;
        double best = 0.0;
        for (int r = 0; r < m; ++r) {
            double a = row(r)[enter];
            if (a > eps) {
                double ratio = row(r)[n] / a;
                if (leave < 0 || ratio < best - eps ||
                    (ratio < best + eps && basis[r] < basis[leave]))
                {
                    leave = r;
                    best = ratio;
                }
            }
        }
        if (leave < 0) throw std::runtime_error("LP unbounded (flat-norm programs are bounded)");
        // pivot
        double* pr = row(leave);
        double inv = 1.0 / pr[enter];
        for (int j = 0; j <= n; ++j) pr[j] *= inv;
        for (int r = 0; r < m; ++r) {
            if (r == leave) continue;
            double f = row(r)[enter];
            if (f == 0.0) continue;
            double* rr = row(r);
            for (int j = 0; j <= n; ++j) rr[j] -= f * pr[j];
        }
        basis[leave] = enter;
    }
    if (!res.optimal) throw std::runtime_error("LP iteration limit reached");
    res.x.assign(n, 0.0);
    for (int r = 0; r < m; ++r) res.x[basis[r]] = row(r)[n];
    res.objective = 0.0;
    for (int j = 0; j < n; ++j) res.objective += p.c[j] * res.x[j];
    return res;
}

}  // namespace cubetower
