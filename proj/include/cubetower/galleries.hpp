#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cubetower/branched.hpp"
#include "cubetower/complex.hpp"

namespace cubetower {

// Axis galleries: strings of N-cells stepping monotonically in one pulled-back
// coordinate, consecutive cells sharing a codimension-1 face on which that
// coordinate is constant. Maximal galleries carry the flow measures Q_i whose
// cell-wise sums reconstruct mu_i.

struct Gallery {
    std::vector<CellId> cells;
};

struct GallerySet {
    const CubeComplex* host = nullptr;
    int axis = 0;  // 0-based
    std::vector<Gallery> galleries;

    int find(const std::vector<CellId>& cells) const;  // -1 if absent
    void build_index() const;

  private:
    mutable std::map<std::vector<CellId>, int> index_;
};

/// Cells bounding the high-axis face of c that induce the opposite
/// orientation (the gallery successors); `negative_boundary` dually.
std::vector<CellId> positive_boundary(const CubeComplex& x, CellId c, int axis);
std::vector<CellId> negative_boundary(const CubeComplex& x, CellId c, int axis);

/// Exhaustive DFS enumeration from cells with no predecessor. Branch faces
/// multiply continuations. Throws std::overflow_error past max_count.
GallerySet maximal_galleries(const CubeComplex& x, int axis, std::size_t max_count = 2000000);

struct GalleryLevel {
    GallerySet set;
    std::vector<Rat> q;  // one value per gallery
};

/// Q == 1 on every maximal gallery of the base complex.
GalleryLevel base_gallery_measure(const CubeComplex& x0, int axis);

/// Q^(k) on a refinement: each fine maximal gallery inherits the value of the
/// unique coarse maximal gallery containing it (located through anchors).
GalleryLevel refine_gallery_measure(const GalleryLevel& coarse, const CubeComplex& fine);

/// One recursion step: Q_{i+1} from Q_i^(1) through the projection, with the
/// flow-ratio product along each gallery.
GalleryLevel lift_gallery_measure(const GalleryLevel& fine_on_target, const CellMap& pi);

/// Full recursion Q_0 -> Q_level on the system (exact rationals throughout).
GalleryLevel gallery_measure(const InverseSystem& s, int level, int axis,
                             std::size_t max_count = 2000000);

struct DecompositionReport {
    bool pass = true;
    std::optional<CellId> first_violation;
    std::string detail;
    Rat global_flow;  // sum of Q(g) * vol(g), equals mu(X) on pass
};

/// For every cell: sum of Q over galleries through it equals m^{iN} mu_i(cell)
/// (equivalently the cell weight), exactly; plus the global volume identity.
DecompositionReport verify_decomposition(const GalleryLevel& gl);

struct GalleryPushforwardReport {
    bool pass = true;
    std::optional<int> first_violation;  // index of target gallery
    std::string detail;
};

/// pi_# Q_{i+1} = Q_i^(1), gallery by gallery.
GalleryPushforwardReport check_pushforward_measure(const GalleryLevel& upper, const CellMap& pi,
                                                   const GalleryLevel& fine_on_target);

}  // namespace cubetower
