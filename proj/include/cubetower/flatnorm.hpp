#pragma once

#include <optional>
#include <vector>

#include "cubetower/grid.hpp"
#include "cubetower/rational.hpp"

namespace cubetower {

struct FlatNormResult {
    double value = 0.0;
    GridChain s1;  // dim k
    GridChain s2;  // dim k+1 (empty when k = d)
    long lp_iterations = 0;
};

/// min mass(S1) + mass(S2) with t = S1 + dS2 over the grid, as an LP with
/// sign-split variables. For k = d there is no S2 and the value is mass(t).
FlatNormResult flat_norm(const GridChain& t);

/// Exhaustive oracle over integer S2 coefficients in [-box, box]; only
/// feasible for tiny grids. Returns the best objective found.
double flat_norm_bruteforce(const GridChain& t, int box);

struct ConvexPolygon {
    std::vector<std::pair<Rat, Rat>> vertices;  // counterclockwise
};

/// The diamond inscribed in the unit square (45-degree square, side sqrt2/2).
ConvexPolygon rotated_square();

/// Top-dimensional chain whose coefficient per cell is weight times the exact
/// clipped area fraction of the region in the cell (d = 2).
GridChain rasterize(const ConvexPolygon& region, double weight, const GridComplex& g);

struct CubicalApproxCertificate {
    double flat_distance = 0.0;   // flat_norm(t - t_c) on the fine grid
    double normal_mass_fine = 0.0;    // N(t) = mass + boundary mass
    double normal_mass_coarse = 0.0;  // N(t_c)
    double epsilon = 0.0;
    bool normal_mass_ok = false;  // N(t_c) <= N(t) + eps
    bool flat_ok = false;         // flat distance <= eps
};

/// Volume-weighted averaging of a fine top-dimensional chain onto a coarse
/// grid, with the measured certificate.
std::pair<GridChain, CubicalApproxCertificate> cubical_approximation(const GridChain& t,
                                                                     const GridComplex& coarse,
                                                                     double epsilon);

}  // namespace cubetower
