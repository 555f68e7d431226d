#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cubetower/branched.hpp"
#include "cubetower/cellmap.hpp"
#include "cubetower/vertexgraph.hpp"

namespace cubetower {

// Finite proxy for the length metric: the depth-k vertex graph with shortest
// path distances. Distances are nonincreasing in the depth, and the anchor
// projection is 1-Lipschitz, so anchor separation lower-bounds every distance.
class FiniteMetricSpace {
  public:
    FiniteMetricSpace(std::shared_ptr<const ExplicitVertexGraph> graph);

    std::size_t points() const { return graph_->node_count(); }
    const ExplicitVertexGraph& graph() const { return *graph_; }

    /// Shortest-path distances from one point (one Dijkstra sweep).
    std::vector<float> row(std::int32_t p) const;
    double distance(std::int32_t a, std::int32_t b) const;

    /// Full matrix; guarded (throws std::length_error past max_points).
    std::vector<std::vector<float>> full_matrix(std::size_t max_points = 5000) const;

    std::string label(std::int32_t p) const;  // "anchor@fine-coords/sheet"

  private:
    std::shared_ptr<const ExplicitVertexGraph> graph_;
};

FiniteMetricSpace sample_metric(const CubeComplex& x, int depth, std::size_t max_points = 3000000);

struct DistortionOptions {
    std::size_t max_fiber_pairs = 320;
    std::size_t max_near_pairs = 96;
    std::uint64_t seed = 20240801;
    double radius_factor = 4.0;  // truncation radius in units of the source cell side
};

struct DistortionReport {
    double sup_diff = 0.0;   // max over sampled pairs of d_src - d_tgt
    double scale = 0.0;      // m^-(source level - 1), the decay unit
    double ratio = 0.0;      // sup_diff / scale, the fitted constant C
    long pairs_checked = 0;
    bool truncated = false;  // some pair hit the search radius (lower bound then)
};

/// Measured metric distortion of a projection at the given sampling depth.
/// The sup runs over all-fiber-pair samples (where the lifting argument puts
/// the extremizers) plus seeded near pairs, each resolved by truncated
/// Dijkstra on the implicit depth-k graphs of source and target.
DistortionReport distortion(const CellMap& pi, int depth, const DistortionOptions& opts = {});

/// Exhaustive oracle for small graphs: sup over all source vertex pairs,
/// exact rows on explicit graphs. Throws std::length_error when too big.
DistortionReport distortion_exact(const CellMap& pi, int depth, std::size_t max_points = 60000);

struct TapRow {
    int level = 0;           // n
    double distortion = 0.0; // sup |F_n^* d_n - d_top| over sampled pairs
    double scale = 0.0;      // m^-n
    bool factorization_exact = false;  // F_n == pi_n o F_{n+1} on cells
};

struct TapReport {
    std::vector<TapRow> rows;
    bool factorization_pass = true;
    bool monotone = true;  // distortion column nonincreasing in n
};

/// Tower-of-approximations check: F_n = pi_{i_top,n} onto X_n, with the
/// pullback-distance column and the exact commuting-factorization test.
TapReport tap_check(const InverseSystem& s, int i_top, std::size_t sources = 48,
                    std::size_t targets_per_source = 64, std::uint64_t seed = 20240801);

}  // namespace cubetower
