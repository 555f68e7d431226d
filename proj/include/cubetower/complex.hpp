#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cubetower/rational.hpp"

namespace cubetower {

// Coordinate-compatible cube complexes: every cell is an N-cube of side
// m^-level, anchored on the integer grid {0..m^level-1}^N of the base cube,
// and every gluing is a coordinate-identity isometry. Anchors are therefore a
// complete invariant for cells up to sheet labels, which record the branch
// choices a cell descends from (one character per construction level).
//
// Codimension-1 gluings are first-class Face records rather than facet
// matchings: at branch loci three (or, for transverse pinches in N >= 3,
// four) facets share one Face.

using CellId = std::int32_t;
using FaceId = std::int32_t;

enum class Side : std::uint8_t { Low = 0, High = 1 };

inline Side opposite(Side s) { return s == Side::Low ? Side::High : Side::Low; }

struct FacetRef {
    CellId cell = -1;
    Side side = Side::Low;
    bool operator==(const FacetRef&) const = default;
};

struct Face {
    std::uint8_t axis = 0;  // 0-based axis the face is orthogonal to
    std::vector<FacetRef> incident;
    bool boundary() const { return incident.size() == 1; }
};

struct Cell {
    Rat weight;              // density of mu on this cell; mu(cell) = weight * side^N
    std::int8_t orientation = 1;  // +1 or -1
    std::int32_t sheet = 0;       // index into CubeComplex::sheet_labels()
};

class CubeComplex {
  public:
    CubeComplex(int n, int m, int level);

    int n() const { return n_; }
    int m() const { return m_; }
    int level() const { return level_; }

    std::size_t cell_count() const { return cells_.size(); }
    std::size_t face_count() const { return faces_.size(); }

    const Cell& cell(CellId c) const { return cells_[static_cast<std::size_t>(c)]; }
    Cell& cell_mut(CellId c) { return cells_[static_cast<std::size_t>(c)]; }
    const Face& face(FaceId f) const { return faces_[static_cast<std::size_t>(f)]; }

    std::span<const std::int32_t> anchor(CellId c) const {
        return {anchors_.data() + static_cast<std::size_t>(c) * n_, static_cast<std::size_t>(n_)};
    }
    const std::string& sheet_label(CellId c) const { return sheet_labels_[cells_[c].sheet]; }
    const std::vector<std::string>& sheet_labels() const { return sheet_labels_; }

    FaceId facet_face(CellId c, int axis, Side side) const {
        return facet_face_[(static_cast<std::size_t>(c) * n_ + axis) * 2 + static_cast<int>(side)];
    }

    Rat side_length() const { return cell_side(m_, level_); }
    Rat cell_volume() const { return rat_pow(side_length(), n_); }
    Rat face_area() const { return rat_pow(side_length(), n_ - 1); }
    Rat measure(CellId c) const { return cells_[c].weight * cell_volume(); }
    Rat total_measure() const;

    /// Cells sharing a Face with c (c itself excluded, deduplicated).
    std::vector<CellId> neighbors(CellId c) const;

    /// Index lookup by (anchor, sheet label); -1 if absent.
    CellId find_cell(std::span<const std::int32_t> anchor, const std::string& sheet) const;

    // Provenance when built by subdivide(): parent cell in the base complex
    // and the subdivision exponent. Empty/0 for primitively built complexes.
    bool is_subdivision() const { return sub_k_ > 0; }
    int sub_k() const { return sub_k_; }
    CellId parent_cell(CellId c) const { return parent_cells_.empty() ? -1 : parent_cells_[c]; }

    /// Structural validity: facet attachment total, Face coordinates
    /// consistent, weights positive, total measure finite positive.
    /// Throws std::runtime_error describing the first violation.
    void validate() const;

    /// Equality up to reordering by (anchor, sheet): same cells (anchor,
    /// weight, orientation, sheet) and the same face gluings.
    bool structurally_equal(const CubeComplex& other) const;

    // --- low-level construction API ---
    CellId add_cell(std::span<const std::int32_t> anchor, Rat weight, int orientation,
                    std::int32_t sheet);
    std::int32_t intern_sheet(const std::string& label);
    FaceId add_face(int axis, std::vector<FacetRef> incident);
    void set_parentage(int sub_k, std::vector<CellId> parents);
    /// Fills the facet->face table from the declared faces. Must be called
    /// once after all cells/faces are added.
    void finalize();

  private:
    int n_, m_, level_;
    std::vector<Cell> cells_;
    std::vector<std::int32_t> anchors_;     // cells x n
    std::vector<Face> faces_;
    std::vector<FaceId> facet_face_;        // cells x n x 2
    std::vector<std::string> sheet_labels_;
    int sub_k_ = 0;
    std::vector<CellId> parent_cells_;

    mutable std::vector<CellId> sorted_ids_;  // by (anchor, sheet label), built lazily
    void build_index() const;
};

/// [0,1]^n as a one-cell complex, weight 1, orientation +1. Rejects n < 2 or m < 2.
CubeComplex new_unit_cube(int n, int m);

/// m^k-fold coordinate subdivision. Weights/orientations/sheets inherited,
/// total measure unchanged, gluings induced coordinate-wise.
CubeComplex subdivide(const CubeComplex& x, int k);

/// Max over identified vertices of the number of N-cells containing the
/// vertex (the C_geo witness). Vertex identification is a union-find over
/// (cell, corner) pairs closed under Face gluings.
int link_bound(const CubeComplex& x);

struct ConnectivityReport {
    bool connected = false;
    int diameter = 0;      // dual-graph diameter (exact when `exact`, else a lower bound)
    bool exact = true;
};

/// Dual-graph connectivity (cells adjacent when sharing a Face). Diameter is
/// exact below `exact_threshold` cells, otherwise a double-sweep lower bound.
ConnectivityReport check_gallery_connected(const CubeComplex& x, std::size_t exact_threshold = 6000);

struct VertexIdentification {
    // For vertex v: representative (cell, corner mask) and the list of cells.
    std::vector<std::int64_t> vertex_of_corner;  // (cell * 2^n + corner) -> vertex id
    std::vector<std::pair<CellId, std::uint32_t>> representative;
    std::vector<std::vector<CellId>> cells_at_vertex;
};

VertexIdentification identify_vertices(const CubeComplex& x);

}  // namespace cubetower
