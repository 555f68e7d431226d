#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubetower/complex.hpp"

namespace cubetower {

// Cellular maps between coordinate-compatible complexes are determined by a
// cell -> cell assignment; anchor compatibility makes the point map implicit
// (identity in pulled-back coordinates on every cell).
struct CellMap {
    const CubeComplex* source = nullptr;
    const CubeComplex* target = nullptr;
    std::vector<CellId> assign;  // source cell -> target cell

    CellId operator()(CellId c) const { return assign[c]; }

    /// Face of the target the image of a source face lies on. Well-defined for
    /// valid maps (checked by check_valid).
    FaceId face_image(FaceId f) const;

    std::vector<std::vector<CellId>> fibers() const;
};

/// Anchor compatibility cell-by-cell, surjectivity, face preservation.
/// Throws std::runtime_error on the first violation.
void check_valid(const CellMap& p);

struct MeasureReport {
    bool pushforward_exact = false;
    std::optional<CellId> first_violation;  // target cell
    Rat c_mu_source;                        // max ratio of adjacent measures in the source
    Rat c_mu_target;
    std::string detail;
};

/// Verifies pushforward equality mu_target(t) = sum over the fiber of
/// mu_source, exactly, and reports the adjacency weight-ratio witnesses.
MeasureReport check_measures(const CellMap& p);

/// Max over target cells of (dual diameter of the fiber) + 1; the C_gall
/// witness. Throws if some fiber is dual-disconnected.
int fiber_gallery_bound(const CellMap& p);

/// The subdivided map p^(k): source^(k) -> target^(k) induced on k-fold
/// subdivisions (matching local offsets).
CellMap subdivided_map(const CellMap& p, const CubeComplex& source_k, const CubeComplex& target_k);

/// Composition q o p where p: X -> Y, q: Y -> Z (cell level).
CellMap compose(const CellMap& p, const CellMap& q);

}  // namespace cubetower
