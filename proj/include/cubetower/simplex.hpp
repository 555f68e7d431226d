#pragma once

#include <vector>

namespace cubetower {

// Dense primal simplex with Bland's rule: deterministic, anti-cycling, sized
// for the desk-scale flat-norm programs (hundreds of rows). Standard form
// min c^T x, A x = b, x >= 0, with a caller-supplied feasible basis.
struct LpProblem {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;  // row-major rows x cols
    std::vector<double> b;
    std::vector<double> c;
    std::vector<int> basis;  // one basic column per row; identity-like start
};

struct LpResult {
    bool optimal = false;
    double objective = 0.0;
    std::vector<double> x;
    long iterations = 0;
};

LpResult simplex_solve(const LpProblem& p, double eps = 1e-9, long max_iters = 2000000);

}  // namespace cubetower
