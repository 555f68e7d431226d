#include "cubetower/serialize.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cubetower {

namespace {

std::vector<CellId> canonical_cell_order(const CubeComplex& x) {
    std::vector<CellId> order(x.cell_count());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](CellId a, CellId b) {
        auto aa = x.anchor(a), ab = x.anchor(b);
        if (!std::equal(aa.begin(), aa.end(), ab.begin()))
            return std::lexicographical_compare(aa.begin(), aa.end(), ab.begin(), ab.end());
        return x.sheet_label(a) < x.sheet_label(b);
    });
    return order;
}

}  // namespace

Json complex_to_json(const CubeComplex& x) {
    Json j;
    j["format"] = "cubetower-complex";
    j["version"] = 1;
    j["n"] = x.n();
    j["m"] = x.m();
    j["level"] = x.level();
    std::vector<CellId> order = canonical_cell_order(x);
    std::vector<CellId> rank(x.cell_count());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<CellId>(i);
    Json cells = Json::array();
    for (CellId c : order) {
        Json jc;
        jc["id"] = rank[c];
        jc["anchor"] = std::vector<std::int32_t>(x.anchor(c).begin(), x.anchor(c).end());
        jc["weight"] = rat_to_string(x.cell(c).weight);
        jc["orientation"] = static_cast<int>(x.cell(c).orientation);
        jc["sheet"] = x.sheet_label(c);
        cells.push_back(std::move(jc));
    }
    j["cells"] = std::move(cells);
    Json faces = Json::array();
    for (FaceId f = 0; f < static_cast<FaceId>(x.face_count()); ++f) {
        Json jf;
        jf["id"] = f;
        jf["axis"] = x.face(f).axis + 1;  // 1-based on the wire
        Json inc = Json::array();
        for (const FacetRef& fr : x.face(f).incident)
            inc.push_back(Json::array({rank[fr.cell], fr.side == Side::Low ? "low" : "high"}));
        jf["incident"] = std::move(inc);
        faces.push_back(std::move(jf));
    }
    j["faces"] = std::move(faces);
    return j;
}

CubeComplex complex_from_json(const Json& j) {
    if (j.at("format") != "cubetower-complex") throw std::invalid_argument("not a complex document");
    CubeComplex x(j.at("n").get<int>(), j.at("m").get<int>(), j.at("level").get<int>());
    for (const Json& jc : j.at("cells")) {
        std::vector<std::int32_t> anchor = jc.at("anchor").get<std::vector<std::int32_t>>();
        x.add_cell(anchor, rat_from_string(jc.at("weight").get<std::string>()),
                   jc.at("orientation").get<int>(), x.intern_sheet(jc.at("sheet").get<std::string>()));
    }
    for (const Json& jf : j.at("faces")) {
        std::vector<FacetRef> inc;
        for (const Json& e : jf.at("incident"))
            inc.push_back(FacetRef{e.at(0).get<CellId>(),
                                   e.at(1).get<std::string>() == "low" ? Side::Low : Side::High});
        x.add_face(jf.at("axis").get<int>() - 1, std::move(inc));
    }
    x.finalize();
    return x;
}

Json chain_to_json(const CubicalChain& t) {
    Json j;
    j["format"] = "cubetower-chain";
    j["version"] = 1;
    j["dim"] = t.dim;
    j["host_level"] = t.host->level();
    Json entries = Json::array();
    for (const auto& [id, coef] : t.entries) entries.push_back(Json::array({id, rat_to_string(coef)}));
    j["entries"] = std::move(entries);
    return j;
}

CubicalChain chain_from_json(const Json& j, const CubeComplex& host) {
    CubicalChain t;
    t.host = &host;
    t.dim = j.at("dim").get<int>();
    for (const Json& e : j.at("entries"))
        t.entries[e.at(0).get<std::int32_t>()] = rat_from_string(e.at(1).get<std::string>());
    return t;
}

Json export_geometry(const CubeComplex& x) {
    VertexIdentification vi = identify_vertices(x);
    const int n = x.n();
    const std::uint32_t corners = 1u << n;
    // deterministic vertex order: by (coords, sheet of representative cell)
    std::vector<std::int64_t> order(vi.representative.size());
    std::iota(order.begin(), order.end(), 0);
    auto coords_of = [&](std::int64_t v) {
        auto [cell, corner] = vi.representative[v];
        auto a = x.anchor(cell);
        std::vector<std::int64_t> c(n);
        for (int i = 0; i < n; ++i) c[i] = a[i] + ((corner >> i) & 1u);
        return c;
    };
    std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
        auto ca = coords_of(a), cb = coords_of(b);
        if (ca != cb) return ca < cb;
        return x.sheet_label(vi.representative[a].first) < x.sheet_label(vi.representative[b].first);
    });
    std::vector<std::int64_t> rank(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<std::int64_t>(i);

    Json j;
    j["format"] = "cubetower-geometry";
    j["version"] = 1;
    j["n"] = n;
    j["level"] = x.level();
    Json verts = Json::array();
    for (std::int64_t v : order) {
        Json jv;
        jv["id"] = rank[v];
        jv["coords"] = coords_of(v);
        jv["sheet"] = x.sheet_label(vi.representative[v].first);
        verts.push_back(std::move(jv));
    }
    j["vertices"] = std::move(verts);

    // edges: within each cell, corner pairs differing in one axis
    std::vector<std::pair<std::int64_t, std::int64_t>> edges;
    for (CellId c = 0; c < static_cast<CellId>(x.cell_count()); ++c) {
        for (std::uint32_t corner = 0; corner < corners; ++corner) {
            for (int axis = 0; axis < n; ++axis) {
                if ((corner >> axis) & 1u) continue;
                std::int64_t a = rank[vi.vertex_of_corner[static_cast<std::int64_t>(c) * corners + corner]];
                std::int64_t b = rank[vi.vertex_of_corner[static_cast<std::int64_t>(c) * corners +
                                                          (corner | (1u << axis))]];
                edges.emplace_back(std::min(a, b), std::max(a, b));
            }
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    Json je = Json::array();
    for (auto [a, b] : edges) je.push_back(Json::array({a, b}));
    j["edges"] = std::move(je);

    if (n == 2) {
        Json cells = Json::array();
        std::vector<CellId> corder = canonical_cell_order(x);
        for (CellId c : corder) {
            Json jc;
            jc["sheet"] = x.sheet_label(c);
            jc["weight"] = rat_to_string(x.cell(c).weight);
            // polygon in counterclockwise corner order 00, 10, 11, 01
            Json poly = Json::array();
            for (std::uint32_t corner : {0u, 1u, 3u, 2u})
                poly.push_back(rank[vi.vertex_of_corner[static_cast<std::int64_t>(c) * corners + corner]]);
            jc["polygon"] = std::move(poly);
            cells.push_back(std::move(jc));
        }
        j["cells"] = std::move(cells);
    }
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::string schedule_to_string(const std::vector<BuildStep>& schedule) {
    std::ostringstream os;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (i) os << ",";
        if (schedule[i].branched())
            os << schedule[i].plane->alpha << schedule[i].plane->beta;
        else
            os << "s";
    }
    return os.str();
}

std::vector<BuildStep> schedule_from_string(const std::string& s) {
    std::vector<BuildStep> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        BuildStep step;
        if (tok == "s" || tok == "sub") {
            out.push_back(step);
            continue;
        }
        if (tok.size() != 2 || !isdigit(tok[0]) || !isdigit(tok[1]))
            throw std::invalid_argument("bad schedule token: " + tok);
        step.plane = PlanePair{tok[0] - '0', tok[1] - '0'};
        out.push_back(step);
    }
    return out;
}

void write_system(const InverseSystem& s, const std::string& dir) {
    std::filesystem::create_directories(dir);
    Json manifest;
    manifest["format"] = "cubetower-system";
    manifest["version"] = 1;
    manifest["n"] = s.level(0).n();
    manifest["m"] = s.level(0).m();
    manifest["depth"] = s.depth();
    manifest["schedule"] = schedule_to_string(s.schedule());
    Json witnesses = Json::array();
    for (int i = 0; i <= s.depth(); ++i) {
        Json w;
        w["level"] = i;
        w["cells"] = s.level(i).cell_count();
        w["total_measure"] = rat_to_string(s.level(i).total_measure());
        witnesses.push_back(std::move(w));
    }
    manifest["levels"] = std::move(witnesses);
    write_text(dir + "/manifest.json", manifest.dump(2) + "\n");
    for (int i = 0; i <= s.depth(); ++i)
        write_text(dir + "/level_" + std::to_string(i) + ".json",
                   complex_to_json(s.level(i)).dump() + "\n");
}

SystemManifest read_manifest(const std::string& dir) {
    Json manifest = Json::parse(read_text(dir + "/manifest.json"));
    SystemManifest m;
    m.n = manifest.at("n").get<int>();
    m.m = manifest.at("m").get<int>();
    m.depth = manifest.at("depth").get<int>();
    m.schedule = schedule_from_string(manifest.at("schedule").get<std::string>());
    return m;
}

InverseSystem load_system(const std::string& dir) {
    SystemManifest m = read_manifest(dir);
    return InverseSystem::build(new_unit_cube(m.n, m.m), m.schedule);
}

}  // namespace cubetower
