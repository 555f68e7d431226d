#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cubetower/branched.hpp"
#include "cubetower/cellmap.hpp"
#include "cubetower/complex.hpp"

namespace cubetower {

// Sparse chains with exact rational coefficients, carried in dimensions N
// (on cells) and N-1 (on faces). The boundary sign convention: the facet
// (axis a, side high) of a +1-oriented cell contributes (-1)^a (0-based a)
// to its face, side low the negative; validated by interior cancellation.
struct CubicalChain {
    const CubeComplex* host = nullptr;
    int dim = 0;  // N or N-1
    std::map<std::int32_t, Rat> entries;  // cell id (dim N) or face id (dim N-1) -> coefficient

    Rat coefficient(std::int32_t id) const {
        auto it = entries.find(id);
        return it == entries.end() ? Rat(0) : it->second;
    }
};

inline int facet_sign(int axis, Side side, int orientation) {
    int s = (axis % 2 == 0) ? 1 : -1;
    if (side == Side::Low) s = -s;
    return s * orientation;
}

/// Coefficient orientation * weight on every cell.
CubicalChain fundamental_chain(const CubeComplex& x);

/// Boundary of a top-dimensional chain: per face, the signed sum of incident
/// cell coefficients; zero-coefficient faces omitted.
CubicalChain boundary(const CubicalChain& t);

/// Sum |coef| * (m^-level)^dim.
Rat mass(const CubicalChain& t);

/// Pushforward along a cell map (top dimension).
CubicalChain pushforward(const CellMap& p, const CubicalChain& t);

struct FluxReport {
    bool pass = true;
    long faces_checked = 0;
    std::optional<FaceId> source_face;
    std::optional<FaceId> target_face;
    std::string detail;  // both sums on failure
};

/// (IFlux): for every face of the target interior to a parent cell, and every
/// source face over it, the weights over the positively vs negatively
/// oriented bounding cells balance exactly.
FluxReport check_flux(const CellMap& p);

struct PoincReport {
    bool pass = true;
    long faces_checked = 0;
    std::optional<FaceId> source_face;
    std::string detail;
};

/// (IPoinc): for every source face over a target face f, the weight-ratio sum
/// is constant as the bounding target cell varies over Bd(f).
PoincReport check_ipoinc(const CellMap& p);

struct BranchCancellation {
    bool pass = true;
    long branch_faces = 0;
    std::optional<FaceId> first_violation;
};

/// Every face with >= 3 incident facets carries boundary coefficient 0.
BranchCancellation check_branch_cancellation(const CubeComplex& x);

struct ConservationRow {
    int level = 0;
    Rat mass_total;
    Rat boundary_mass;
    Rat mass_restricted;      // over the preimage of U (when U given and level >= j)
    Rat boundary_restricted;
    bool restricted_valid = false;
};

struct ConservationReport {
    std::vector<ConservationRow> rows;
    bool mass_constant = true;
    bool boundary_constant = true;
    bool restricted_constant = true;
};

/// Masses of N_i and its boundary per level, optionally restricted to the
/// preimage of an open union of cells U in X_j. Restriction counts a face
/// exactly when all its incident cells lie in the preimage.
ConservationReport conservation_report(const InverseSystem& s, int j = 0,
                                       const std::vector<CellId>& u_cells = {});

/// Independent evaluation of the boundary mass through the fiber double sum
/// (grouping source faces over target faces of X_i^(1), asserting interior
/// terms vanish). Returns (direct boundary mass, fiber-sum boundary mass).
std::pair<Rat, Rat> two_path_boundary_mass(const CellMap& p);

}  // namespace cubetower
