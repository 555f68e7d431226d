#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubetower/metric.hpp"
#include "cubetower/rational.hpp"

namespace cubetower {

// Nagata covers of sampled complexes: N+1 families of separated, bounded-
// diameter sets built from diagonally shifted shrunken grids on the anchor
// coordinates and pulled back through the level maps (one anchor box collects
// every sheet above it). The construction is heuristic; the verified
// certificate is the contract.
struct NagataCover {
    Rat scale;             // requested s
    int families = 0;      // N+1
    std::vector<std::vector<std::int32_t>> sets;  // point ids, sorted
    std::vector<int> family_of;                   // per set

    // realized witnesses (graph metric)
    double s_witness = 0.0;   // min distance between distinct same-family sets
    double max_diam = 0.0;
    double c_witness = 0.0;   // max_diam / s_witness
    bool nsep_pass = false;
    bool nbd_pass = false;
    bool coverage_pass = false;
    bool sorted_pass = false;

    // set-to-set matrices in the graph metric (row-major k x k)
    std::vector<float> mindist;
    std::vector<float> hausdorff;
    std::size_t set_count() const { return sets.size(); }
    float dh(std::size_t a, std::size_t b) const { return hausdorff[a * sets.size() + b]; }
};

/// Builds, sorts and verifies a cover at scale s. The shrink margin is
/// s/(2(N+1)) per side, so same-family sets are anchor-separated by at least
/// s/(N+1); verification runs against that realized scale. Throws
/// std::runtime_error when a verification clause fails (e.g. with an
/// overridden zero margin).
NagataCover nagata_cover_grid(const FiniteMetricSpace& fms, const Rat& s,
                              std::optional<Rat> margin_override = std::nullopt);

struct EmbeddedNerve {
    // vertex v = cover set v; coordinates = Hausdorff-distance row (Kuratowski)
    const NagataCover* cover = nullptr;
    std::vector<std::vector<std::pair<std::int32_t, double>>> f_map;  // point -> (set, weight)
    std::vector<std::vector<std::int32_t>> simplices;                 // unique supports
    int dimension = 0;  // max simplex cardinality - 1
};

struct PolyApproxCertificate {
    double s_phi = 0.0;            // bump scale (the realized separation)
    double measured_distortion = 0.0;  // sup |F* d_P - d_X| over scanned pairs
    double measured_lip = 0.0;         // exact over graph edges (path metric)
    double bound_distortion = 0.0;     // (2 + 4C) s
    double bound_lip = 0.0;            // 6N(2/3 + C)
    long pairs_scanned = 0;
    bool partition_ok = false;  // pre-rescale sum in [1, N+1], <= 1 nonzero per family
    bool nerve_dim_ok = false;
    bool pass = false;
};

struct PolyApproxOptions {
    std::size_t random_sources = 64;
    std::size_t targets_per_source = 512;
    std::uint64_t seed = 20240801;
    std::size_t net_stride_pairs_cap = 1500000;  // cap on the coarse-net pair scan
};

/// The partition-of-unity map into the nerve with its measured certificate.
std::pair<EmbeddedNerve, PolyApproxCertificate> poly_approx(const FiniteMetricSpace& fms,
                                                            const NagataCover& cover, const Rat& s,
                                                            const PolyApproxOptions& opts = {});

}  // namespace cubetower
