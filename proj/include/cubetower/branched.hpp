#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cubetower/cellmap.hpp"
#include "cubetower/complex.hpp"

namespace cubetower {

/// Unordered axis pair 1 <= alpha < beta <= N selecting the branching plane.
struct PlanePair {
    int alpha = 1;  // 1-based, alpha < beta
    int beta = 2;
    bool operator==(const PlanePair&) const = default;
};

/// A build step: branch along a plane, or plain subdivision (identity cover).
struct BuildStep {
    std::optional<PlanePair> plane;  // nullopt = subdivision-only step
    bool branched() const { return plane.has_value(); }
};

enum class PlaneClass : std::uint8_t { Center = 0, Ring = 1, Outer = 2 };

/// Partition of the 5x5 grid by Chebyshev distance from the center square.
PlaneClass classify_plane_cell(int u, int v);

/// Ring positions in cyclic order, counterclockwise from (1,1). The sheet cut
/// sits between indices 7 and 0.
const std::array<std::pair<int, int>, 8>& ring_cycle();
int ring_index(int u, int v);  // -1 if (u,v) is not a ring position

/// The 16-cycle double cover of the ring 8-cycle: node = sheet * 8 + index,
/// covering map forgets the sheet, within-sheet steps except across the cut.
struct RingDoubleCover {
    int next(int node) const;       // cyclic successor among the 16 nodes
    int project(int node) const { return node % 8; }
};

struct BranchedCoverResult {
    std::unique_ptr<CubeComplex> cover;       // level i+1 complex
    std::unique_ptr<CubeComplex> subdivided;  // X_i^(1), the map's target
    CellMap projection;                       // cover -> subdivided
};

/// Construction of the 2-branched cover of every cell of x along `plane`:
/// subdivide 5x5(x5^{N-2}), double the middle-ring preimage, glue the double
/// cover back along its boundary, halve the measure on the doubled cells.
BranchedCoverResult branched_cover(const CubeComplex& x, PlanePair plane);

struct LevelWitness {
    int c_geo = 0;
    int c_gall = 0;
    std::string c_mu;
    bool connected = false;
    int dual_diameter = 0;
    std::string total_measure;
};

class InverseSystem {
  public:
    /// Applies the schedule starting from x0 (depth = schedule length).
    static InverseSystem build(CubeComplex x0, const std::vector<BuildStep>& schedule);

    int depth() const { return static_cast<int>(levels_.size()) - 1; }
    const CubeComplex& level(int i) const { return *levels_[i]; }
    /// X_i^(1), the target of pi_i (defined for i < depth).
    const CubeComplex& subdivided_level(int i) const { return *subdivided_[i]; }
    const CellMap& projection(int i) const { return maps_[i]; }  // pi_i
    const std::vector<BuildStep>& schedule() const { return schedule_; }

    /// X_j^(k), cached.
    const CubeComplex& refined(int j, int k) const;

    /// Composite pi_{i,j}: X_i -> X_j^(i-j), i >= j. Computed via the
    /// (anchor, sheet prefix) index and cached.
    const CellMap& composite(int i, int j) const;

    /// Ancestor cell in X_j of a cell of X_i (through the composite).
    CellId ancestor_cell(int i, CellId c, int j) const;

    /// Test hook: corrupt one doubled cell's weight at the given level (skips
    /// the halving, which breaks (IMeas)/(IFlux) downstream).
    void corrupt_ring_weight(int level);

  private:
    std::vector<std::unique_ptr<CubeComplex>> levels_;
    std::vector<std::unique_ptr<CubeComplex>> subdivided_;  // X_i^(1) for i < depth
    std::vector<CellMap> maps_;
    std::vector<BuildStep> schedule_;
    mutable std::vector<std::unique_ptr<CubeComplex>> refined_cache_;
    mutable std::vector<std::pair<int, int>> refined_keys_;
    mutable std::vector<CellMap> composite_cache_;
    mutable std::vector<std::pair<int, int>> composite_keys_;
};

struct AxiomCheck {
    std::string axiom;   // IBGeom, IGall, IMeas, IPoinc, IOr, IFlux
    int level = 0;
    bool pass = false;
    std::string witness;  // reported constant or measured value
    std::string locator;  // first failing cell/face, empty when passing
};

struct WaisReport {
    bool pass = false;
    std::vector<AxiomCheck> checks;
    std::vector<LevelWitness> witnesses;
    std::string first_failure() const;
};

/// Runs every finite-level axiom check (geometry, galleries, measures,
/// orientation, flux, Poincare ratios) on every level of the system.
WaisReport verify_wais(const InverseSystem& s);

}  // namespace cubetower
