#include "cubetower/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "cubetower/flatnorm.hpp"
#include "cubetower/forms.hpp"
#include "cubetower/galleries.hpp"
#include "cubetower/metric.hpp"
#include "cubetower/nagata.hpp"

namespace cubetower {

namespace {

template <class T>
void read_field(const Json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

CampaignConfig CampaignConfig::from_json(const Json& j) {
    CampaignConfig c;
    read_field(j, "n", c.n);
    read_field(j, "m", c.m);
    if (j.contains("schedule")) c.schedule = schedule_from_string(j.at("schedule").get<std::string>());
    if (j.contains("depth") && !j.contains("schedule")) {
        // depth without a schedule: round-robin over the first plane
        int d = j.at("depth").get<int>();
        for (int i = 0; i < d; ++i) c.schedule.push_back(BuildStep{PlanePair{1, 2}});
    }
    read_field(j, "checks", c.checks);
    if (j.contains("galleries")) {
        read_field(j.at("galleries"), "axes", c.gallery_axes);
        read_field(j.at("galleries"), "levels", c.gallery_levels);
    }
    if (j.contains("metric")) {
        read_field(j.at("metric"), "depth", c.metric_depth);
        read_field(j.at("metric"), "fiber_pairs", c.metric_fiber_pairs);
        read_field(j.at("metric"), "near_pairs", c.metric_near_pairs);
    }
    if (j.contains("polyapprox")) {
        read_field(j.at("polyapprox"), "level", c.polyapprox_level);
        read_field(j.at("polyapprox"), "depth", c.polyapprox_depth);
        if (j.at("polyapprox").contains("scale"))
            c.polyapprox_scale = rat_from_string(j.at("polyapprox").at("scale").get<std::string>());
    }
    if (j.contains("flatnorm")) {
        read_field(j.at("flatnorm"), "resolution", c.flatnorm_resolution);
        read_field(j.at("flatnorm"), "random_chains", c.flatnorm_random_chains);
        read_field(j.at("flatnorm"), "fine", c.cubapprox_fine);
        read_field(j.at("flatnorm"), "coarse", c.cubapprox_coarse);
        read_field(j.at("flatnorm"), "eps", c.cubapprox_eps);
    }
    if (j.contains("forms")) {
        read_field(j.at("forms"), "count", c.forms_count);
        read_field(j.at("forms"), "quad_order", c.quad_order);
    }
    read_field(j, "out_dir", c.out_dir);
    read_field(j, "seed", c.seed);
    if (j.contains("limits")) {
        read_field(j.at("limits"), "max_points", c.max_points);
        read_field(j.at("limits"), "max_galleries", c.max_galleries);
    }
    read_field(j, "corrupt_ring_weight_level", c.corrupt_ring_weight_level);
    if (c.n < 2) throw std::invalid_argument("config.n: must be >= 2");
    if (c.m < 2) throw std::invalid_argument("config.m: must be >= 2");
    for (const BuildStep& s : c.schedule)
        if (s.branched() && !(1 <= s.plane->alpha && s.plane->alpha < s.plane->beta && s.plane->beta <= c.n))
            throw std::invalid_argument("config.schedule: invalid plane pair");
    return c;
}

Json CampaignConfig::to_json() const {
    Json j;
    j["n"] = n;
    j["m"] = m;
    j["schedule"] = schedule_to_string(schedule);
    j["checks"] = checks;
    j["galleries"] = Json{{"axes", gallery_axes}, {"levels", gallery_levels}};
    j["metric"] = Json{{"depth", metric_depth},
                       {"fiber_pairs", metric_fiber_pairs},
                       {"near_pairs", metric_near_pairs}};
    j["polyapprox"] = Json{{"level", polyapprox_level},
                           {"depth", polyapprox_depth},
                           {"scale", rat_to_string(polyapprox_scale)}};
    j["flatnorm"] = Json{{"resolution", flatnorm_resolution},
                         {"random_chains", flatnorm_random_chains},
                         {"fine", cubapprox_fine},
                         {"coarse", cubapprox_coarse},
                         {"eps", cubapprox_eps}};
    j["forms"] = Json{{"count", forms_count}, {"quad_order", quad_order}};
    j["out_dir"] = out_dir;
    j["seed"] = seed;
    j["limits"] = Json{{"max_points", max_points}, {"max_galleries", max_galleries}};
    j["corrupt_ring_weight_level"] = corrupt_ring_weight_level;
    return j;
}

namespace {

bool has_check(const CampaignConfig& c, const std::string& name) {
    for (const auto& s : c.checks)
        if (s == name) return true;
    return false;
}

Json wais_to_json(const WaisReport& rep) {
    Json j;
    j["pass"] = rep.pass;
    Json checks = Json::array();
    for (const auto& c : rep.checks) {
        Json jc;
        jc["axiom"] = c.axiom;
        jc["level"] = c.level;
        jc["pass"] = c.pass;
        jc["witness"] = c.witness;
        if (!c.locator.empty()) jc["locator"] = c.locator;
        checks.push_back(std::move(jc));
    }
    j["checks"] = std::move(checks);
    Json wit = Json::array();
    for (std::size_t i = 0; i < rep.witnesses.size(); ++i) {
        const auto& w = rep.witnesses[i];
        wit.push_back(Json{{"level", i},
                           {"c_geo", w.c_geo},
                           {"c_gall", w.c_gall},
                           {"c_mu", w.c_mu},
                           {"connected", w.connected},
                           {"dual_diameter", w.dual_diameter},
                           {"total_measure", w.total_measure}});
    }
    j["witnesses"] = std::move(wit);
    return j;
}

}  // namespace

CampaignResult run_campaign(const CampaignConfig& cfg) {
    CampaignResult result;
    result.all_pass = true;
    Json& rep = result.report;
    rep["config"] = cfg.to_json();
    auto t_start = std::chrono::steady_clock::now();
    auto lap = [&, last = t_start](const char* what) mutable {
        result.timings[what] = seconds_since(last);
        last = std::chrono::steady_clock::now();
    };
    auto fail = [&](const char* what, bool ok) {
        if (!ok) result.all_pass = false;
        return ok;
    };

    InverseSystem sys = InverseSystem::build(new_unit_cube(cfg.n, cfg.m), cfg.schedule);
    if (cfg.corrupt_ring_weight_level > 0) sys.corrupt_ring_weight(cfg.corrupt_ring_weight_level);
    Json build;
    build["depth"] = sys.depth();
    Json counts = Json::array();
    for (int i = 0; i <= sys.depth(); ++i) counts.push_back(sys.level(i).cell_count());
    build["cells"] = std::move(counts);
    rep["build"] = std::move(build);
    lap("build");

    if (has_check(cfg, "wais")) {
        WaisReport w = verify_wais(sys);
        rep["wais"] = wais_to_json(w);
        fail("wais", w.pass);
        lap("wais");
    }
    if (has_check(cfg, "conservation")) {
        ConservationReport c = conservation_report(sys);
        Json j;
        Json rows = Json::array();
        bool branch_ok = true;
        for (const auto& r : c.rows) {
            rows.push_back(Json{{"level", r.level},
                                {"mass", rat_to_string(r.mass_total)},
                                {"boundary_mass", rat_to_string(r.boundary_mass)}});
        }
        for (int i = 0; i <= sys.depth(); ++i)
            branch_ok = branch_ok && check_branch_cancellation(sys.level(i)).pass;
        j["rows"] = std::move(rows);
        j["mass_constant"] = c.mass_constant;
        j["boundary_constant"] = c.boundary_constant;
        j["branch_cancellation"] = branch_ok;
        bool ok = c.mass_constant && c.boundary_constant && branch_ok;
        j["pass"] = ok;
        rep["conservation"] = std::move(j);
        fail("conservation", ok);
        lap("conservation");
    }
    if (has_check(cfg, "galleries")) {
        Json j;
        Json per = Json::array();
        bool ok = true;
        for (int axis1 : cfg.gallery_axes) {
            for (int lvl : cfg.gallery_levels) {
                if (lvl > sys.depth()) continue;
                GalleryLevel gl = gallery_measure(sys, lvl, axis1 - 1, cfg.max_galleries);
                DecompositionReport dr = verify_decomposition(gl);
                Json e;
                e["axis"] = axis1;
                e["level"] = lvl;
                e["count"] = gl.set.galleries.size();
                e["decomposition"] = dr.pass;
                if (!dr.pass) e["detail"] = dr.detail;
                if (lvl > 0) {
                    GalleryLevel prev = gallery_measure(sys, lvl - 1, axis1 - 1, cfg.max_galleries);
                    GalleryLevel fine = refine_gallery_measure(prev, sys.subdivided_level(lvl - 1));
                    GalleryPushforwardReport pf =
                        check_pushforward_measure(gl, sys.projection(lvl - 1), fine);
                    e["pushforward"] = pf.pass;
                    ok = ok && pf.pass;
                }
                ok = ok && dr.pass;
                per.push_back(std::move(e));
            }
        }
        j["entries"] = std::move(per);
        j["pass"] = ok;
        rep["galleries"] = std::move(j);
        fail("galleries", ok);
        lap("galleries");
    }
    if (has_check(cfg, "metric")) {
        Json j;
        Json rows = Json::array();
        bool decay_ok = true, c_stable = true;
        std::vector<double> ratios;
        DistortionOptions opts;
        opts.seed = cfg.seed;
        opts.max_fiber_pairs = cfg.metric_fiber_pairs;
        opts.max_near_pairs = cfg.metric_near_pairs;
        double prev = 0.0;
        for (int i = 0; i < sys.depth(); ++i) {
            DistortionReport d = distortion(sys.projection(i), cfg.metric_depth, opts);
            rows.push_back(Json{{"map", i},
                                {"sup", d.sup_diff},
                                {"scale", d.scale},
                                {"ratio", d.ratio},
                                {"pairs", d.pairs_checked},
                                {"truncated", d.truncated}});
            if (i > 0 && d.sup_diff > prev / 4.0) decay_ok = false;
            if (d.sup_diff > 0) ratios.push_back(d.ratio);
            prev = d.sup_diff;
        }
        if (ratios.size() >= 2) {
            double lo = *std::min_element(ratios.begin(), ratios.end());
            double hi = *std::max_element(ratios.begin(), ratios.end());
            c_stable = lo > 0 && (hi - lo) / lo < 0.5;
        }
        j["rows"] = std::move(rows);
        j["decay_ok"] = decay_ok;
        j["constant_stable"] = c_stable;
        TapReport tap = tap_check(sys, sys.depth(), 48, 64, cfg.seed);
        Json trows = Json::array();
        for (const auto& r : tap.rows)
            trows.push_back(Json{{"level", r.level},
                                 {"distortion", r.distortion},
                                 {"scale", r.scale},
                                 {"factorization_exact", r.factorization_exact}});
        j["tap"] = Json{{"rows", std::move(trows)},
                        {"factorization_pass", tap.factorization_pass},
                        {"monotone", tap.monotone}};
        bool ok = decay_ok && c_stable && tap.factorization_pass;
        j["pass"] = ok;
        rep["metric"] = std::move(j);
        fail("metric", ok);
        lap("metric");
    }
    if (has_check(cfg, "polyapprox")) {
        Json j;
        int lvl = std::min(cfg.polyapprox_level, sys.depth());
        FiniteMetricSpace fms = sample_metric(sys.level(lvl), cfg.polyapprox_depth, cfg.max_points);
        NagataCover cover = nagata_cover_grid(fms, cfg.polyapprox_scale);
        PolyApproxOptions popts;
        popts.seed = cfg.seed;
        auto [nerve, cert] = poly_approx(fms, cover, cfg.polyapprox_scale, popts);
        j["level"] = lvl;
        j["points"] = fms.points();
        j["sets"] = cover.set_count();
        j["s_witness"] = cover.s_witness;
        j["c_witness"] = cover.c_witness;
        j["nerve_dimension"] = nerve.dimension;
        j["measured_distortion"] = cert.measured_distortion;
        j["bound_distortion"] = cert.bound_distortion;
        j["measured_lip"] = cert.measured_lip;
        j["bound_lip"] = cert.bound_lip;
        j["pairs_scanned"] = cert.pairs_scanned;
        j["pass"] = cert.pass;
        rep["polyapprox"] = std::move(j);
        fail("polyapprox", cert.pass);
        lap("polyapprox");
    }
    if (has_check(cfg, "flatnorm")) {
        Json j;
        bool ok = true;
        // boundary-of-a-square pinned value
        {
            GridComplex g(2, cfg.flatnorm_resolution);
            GridChain q;
            q.grid = &g;
            q.dim = 2;
            std::vector<long> pos = {cfg.flatnorm_resolution / 2, cfg.flatnorm_resolution / 2};
            q.entries[g.id(0b11u, pos)] = 1.0;
            FlatNormResult fr = flat_norm(boundary(q));
            double cell_area = g.side() * g.side();
            double perim = 4.0 * g.side();
            double expect = std::min(perim, cell_area);
            j["square_boundary"] = Json{{"value", fr.value}, {"expected", expect}};
            ok = ok && std::abs(fr.value - expect) <= 1e-9;
        }
        // random sparse chains: flat <= mass and the triangle inequality
        {
            std::mt19937_64 rng(cfg.seed);
            GridComplex g(2, 6);
            auto random_chain = [&]() {
                GridChain t;
                t.grid = &g;
                t.dim = 1;
                std::vector<long> ids = g.cells_of_dim(1);
                std::uniform_int_distribution<int> coefd(-3, 3);
                for (int e = 0; e < 6; ++e) {
                    long id = ids[rng() % ids.size()];
                    int c = coefd(rng);
                    if (c != 0) t.entries[id] += c;
                }
                t.prune();
                return t;
            };
            bool flat_le_mass = true, triangle = true, zero_ok = true;
            {
                GridChain z;
                z.grid = &g;
                z.dim = 1;
                zero_ok = std::abs(flat_norm(z).value) <= 1e-12;
            }
            for (int it = 0; it < cfg.flatnorm_random_chains; ++it) {
                GridChain a = random_chain(), b = random_chain();
                double fa = flat_norm(a).value, fb = flat_norm(b).value;
                GridChain sum = a;
                for (const auto& [id, c] : b.entries) sum.entries[id] += c;
                sum.prune();
                double fs = flat_norm(sum).value;
                if (fa > mass(a) + 1e-9) flat_le_mass = false;
                if (fs > fa + fb + 1e-9) triangle = false;
            }
            j["random_chains"] = Json{{"count", cfg.flatnorm_random_chains},
                                      {"flat_le_mass", flat_le_mass},
                                      {"triangle", triangle},
                                      {"zero_chain", zero_ok}};
            ok = ok && flat_le_mass && triangle && zero_ok;
        }
        // rotated-square cubical approximation across coarse resolutions
        {
            GridComplex fine(2, cfg.cubapprox_fine);
            GridChain t = rasterize(rotated_square(), 1.0, fine);
            Json rows = Json::array();
            double prev = std::numeric_limits<double>::infinity();
            bool monotone = true, normal_ok = true;
            for (long nc : cfg.cubapprox_coarse) {
                GridComplex coarse(2, nc);
                auto [tc, cert] = cubical_approximation(t, coarse, cfg.cubapprox_eps);
                rows.push_back(Json{{"coarse", nc},
                                    {"flat_distance", cert.flat_distance},
                                    {"normal_mass_fine", cert.normal_mass_fine},
                                    {"normal_mass_coarse", cert.normal_mass_coarse}});
                if (cert.flat_distance > prev + 1e-12) monotone = false;
                normal_ok = normal_ok && cert.normal_mass_ok;
                prev = cert.flat_distance;
            }
            j["cubical_approximation"] =
                Json{{"rows", std::move(rows)}, {"monotone", monotone}, {"normal_mass_ok", normal_ok}};
            ok = ok && monotone && normal_ok;
        }
        j["pass"] = ok;
        rep["flatnorm"] = std::move(j);
        fail("flatnorm", ok);
        lap("flatnorm");
    }
    if (has_check(cfg, "forms")) {
        Json j;
        bool ok = true;
        double worst = 0.0;
        std::vector<std::pair<int, int>> pairs = {{0, 1}, {0, 2}, {1, 2}};
        for (auto [k, i] : pairs) {
            if (i > sys.depth()) continue;
            FormPack fp = random_forms(sys.level(k), cfg.seed + 1000 * k + i);
            CubicalChain nk = fundamental_chain(sys.level(k));
            CubicalChain ni = fundamental_chain(sys.level(i));
            for (int f = 0; f < cfg.forms_count; ++f) {
                FormPack fpf = random_forms(sys.level(k), cfg.seed + 7919 * f + 1000 * k + i);
                double vk = evaluate_on_form(nk, fpf, cfg.quad_order);
                double vi = evaluate_on_form(ni, fpf, cfg.quad_order,
                                             [&](CellId c) { return sys.ancestor_cell(i, c, k); });
                worst = std::max(worst, std::abs(vk - vi));
            }
        }
        ok = worst <= 1e-10;
        j["max_difference"] = worst;
        j["pass"] = ok;
        rep["forms"] = std::move(j);
        fail("forms", ok);
        lap("forms");
    }

    rep["pass"] = result.all_pass;
    result.timings["total"] = seconds_since(t_start);
    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        write_system(sys, cfg.out_dir + "/system");
        write_text(cfg.out_dir + "/report.json", rep.dump(2) + "\n");
        write_text(cfg.out_dir + "/timings.json", result.timings.dump(2) + "\n");
    }
    return result;
}

}  // namespace cubetower
