#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubetower/serialize.hpp"

namespace cubetower {

// Configuration-driven verification campaign: build the system, run the
// configured checks, write a machine-readable report plus serialized
// geometry. report.json is byte-reproducible for a fixed config; wall-clock
// timings go to a separate sidecar.
struct CampaignConfig {
    int n = 2;
    int m = 5;
    std::vector<BuildStep> schedule;
    std::vector<std::string> checks;  // wais, conservation, galleries, metric, polyapprox, flatnorm, forms

    std::vector<int> gallery_axes = {1, 2};   // 1-based
    std::vector<int> gallery_levels = {0, 1, 2};

    int metric_depth = 2;
    std::size_t metric_fiber_pairs = 320;
    std::size_t metric_near_pairs = 96;

    int polyapprox_level = 2;
    int polyapprox_depth = 1;
    Rat polyapprox_scale = Rat(1, 25);

    long flatnorm_resolution = 8;
    int flatnorm_random_chains = 100;
    long cubapprox_fine = 64;
    std::vector<long> cubapprox_coarse = {4, 8, 16, 32};
    double cubapprox_eps = 0.5;

    int forms_count = 20;
    int quad_order = 3;

    std::string out_dir;
    std::uint64_t seed = 20240801;
    std::size_t max_points = 3000000;
    std::size_t max_galleries = 2000000;
    int corrupt_ring_weight_level = 0;  // 0 = off (test hook)

    static CampaignConfig from_json(const Json& j);
    Json to_json() const;
};

struct CampaignResult {
    Json report;
    Json timings;
    bool all_pass = false;
};

CampaignResult run_campaign(const CampaignConfig& cfg);

}  // namespace cubetower
