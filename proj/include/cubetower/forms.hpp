#pragma once

#include <functional>
#include <random>
#include <vector>

#include "cubetower/chains.hpp"
#include "cubetower/complex.hpp"

namespace cubetower {

// Piecewise-multilinear test data: N+1 functions f_0..f_N given by values at
// the identified vertices of a host complex, multilinear on each cell in the
// pulled-back global coordinates. A chain at a finer level evaluates the
// pullback of f_0 df_1 ^ ... ^ df_N by tensor Gauss quadrature.
struct FormPack {
    const CubeComplex* host = nullptr;
    VertexIdentification vertices;
    std::vector<std::vector<double>> values;  // (N+1) functions x vertex count
};

/// f_0 = 1, f_j = x_j (the volume form data).
FormPack coordinate_forms(const CubeComplex& host);

/// Seeded uniform [-1,1] vertex values for all N+1 functions.
FormPack random_forms(const CubeComplex& host, std::uint64_t seed);

/// Integrates coef * f0 * det(df_j/dx_l) over every carried cell of t.
/// `ancestor` maps a cell of t's host to the host cell of the forms whose
/// multilinear patch contains it (identity when hosts coincide).
/// quad_order >= 2 is exact for multilinear data when N = 2.
double evaluate_on_form(const CubicalChain& t, const FormPack& forms, int quad_order,
                        const std::function<CellId(CellId)>& ancestor);

/// Convenience: same-host evaluation.
double evaluate_on_form(const CubicalChain& t, const FormPack& forms, int quad_order = 3);

}  // namespace cubetower
