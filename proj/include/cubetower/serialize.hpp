#pragma once

#include <string>

#include <json.hpp>

#include "cubetower/branched.hpp"
#include "cubetower/chains.hpp"
#include "cubetower/complex.hpp"

namespace cubetower {

using Json = nlohmann::json;

// Versioned JSON wire formats. Rationals travel as "p/q" strings; orderings
// are deterministic (cells lexicographic by anchor then sheet label), so
// re-serialization is byte-identical.

Json complex_to_json(const CubeComplex& x);
CubeComplex complex_from_json(const Json& j);

Json chain_to_json(const CubicalChain& t);
CubicalChain chain_from_json(const Json& j, const CubeComplex& host);

/// Identified vertices with representative coordinates and sheet labels,
/// edges, and (for N = 2) cell polygons; deterministic ordering.
Json export_geometry(const CubeComplex& x);

/// Writes per-level complexes plus a manifest (schedule, depth, parameters).
void write_system(const InverseSystem& s, const std::string& dir);

struct SystemManifest {
    int n = 2, m = 5, depth = 0;
    std::vector<BuildStep> schedule;
    int corrupt_level = 0;
};

SystemManifest read_manifest(const std::string& dir);
InverseSystem load_system(const std::string& dir);  // rebuilds from the manifest

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

std::string schedule_to_string(const std::vector<BuildStep>& schedule);
std::vector<BuildStep> schedule_from_string(const std::string& s);

}  // namespace cubetower
