#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cubetower/complex.hpp"
#include "cubetower/parallel.hpp"

namespace cubetower {

// Graph upper approximation of the length metric at a declared depth k: nodes
// are the identified vertices of x^(k), two nodes joined when they share a
// subcell, edge length the Euclidean anchor-coordinate distance inside that
// cell (king moves on the per-cell grid). Finer depth never increases
// distances.

constexpr int kMaxDim = 8;
using Local = std::array<std::int32_t, kMaxDim>;

struct ExplicitVertexGraph {
    const CubeComplex* host = nullptr;
    int depth = 0;
    long g = 1;             // m^depth subcells per cell side
    double unit = 0.0;      // side / g
    long pts_per_cell = 0;  // (g+1)^n

    std::vector<std::int32_t> node_of_point;  // cell * pts_per_cell + linear(local) -> node
    std::vector<std::int64_t> rep_point;      // node -> representative point key

    std::size_t node_count() const { return rep_point.size(); }
    std::int64_t point_key(CellId c, std::span<const std::int32_t> local) const;
    std::int32_t node_at(CellId c, std::span<const std::int32_t> local) const;
    void unpack(std::int64_t point, CellId& c, Local& local) const;
    /// Integer coordinates on the global fine grid (anchor*g + local).
    void fine_coords(std::int32_t node, std::vector<std::int64_t>& out) const;
    std::vector<double> coords(std::int32_t node) const;

    // CSR adjacency
    std::vector<std::int64_t> adj_start;
    std::vector<std::int32_t> adj_node;
    std::vector<float> adj_len;

    void dijkstra(std::int32_t source, std::vector<float>& dist) const;
    void dijkstra_multi(std::span<const std::int32_t> sources, std::vector<float>& dist) const;
    /// Batched rows, parallel over sources (row callback gets source index and
    /// the finished distance array).
    template <class Fn>
    void dijkstra_batch(std::span<const std::int32_t> sources, Exec exec, Fn&& per_row) const {
        parallel_for(static_cast<std::int64_t>(sources.size()), exec, [&](std::int64_t i) {
            thread_local std::vector<float> dist;
            dijkstra(sources[i], dist);
            per_row(i, dist);
        });
    }
};

/// Throws std::length_error past max_points (the resource guard).
ExplicitVertexGraph build_vertex_graph(const CubeComplex& x, int depth,
                                       std::size_t max_points = 3000000);

// Same metric without materializing nodes or edges; canonicalization runs an
// orbit walk through the face gluings on demand. Used where x^(k) is too big
// to hold (truncated searches around sampled pairs).
struct ImplicitVertexGraph {
    const CubeComplex* host = nullptr;
    int depth = 0;
    long g = 1;
    double unit = 0.0;
    int axis_bits = 0;

    std::uint64_t pack(CellId c, std::span<const std::int32_t> local) const;
    void unpack(std::uint64_t key, CellId& c, Local& local) const;
    std::uint64_t canonical(CellId c, std::span<const std::int32_t> local) const;
    void orbit(CellId c, std::span<const std::int32_t> local,
               std::vector<std::pair<CellId, Local>>& out) const;
    void neighbors(std::uint64_t key, std::vector<std::pair<std::uint64_t, double>>& out) const;

    /// Dijkstra from src, stopping when dst settles or the frontier passes
    /// `radius`. Returns the distance; `settled` false when truncated (the
    /// radius is then a lower bound).
    double truncated_distance(std::uint64_t src, std::uint64_t dst, double radius,
                              bool& settled) const;
};

ImplicitVertexGraph make_implicit_graph(const CubeComplex& x, int depth);

}  // namespace cubetower
