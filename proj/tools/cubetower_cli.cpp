#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "cubetower/campaign.hpp"
#include "cubetower/chains.hpp"
#include "cubetower/flatnorm.hpp"
#include "cubetower/galleries.hpp"
#include "cubetower/metric.hpp"
#include "cubetower/nagata.hpp"
#include "cubetower/serialize.hpp"

using namespace cubetower;

namespace {

std::size_t max_points_env() {
    const char* v = std::getenv("CUBETOWER_MAX_POINTS");
    return v ? static_cast<std::size_t>(std::atoll(v)) : 3000000;
}

InverseSystem system_from(const std::string& dir) { return load_system(dir); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"inverse systems of branched cube complexes: build and verify"};
    app.require_subcommand(1);

    // build
    auto* build = app.add_subcommand("build", "build an inverse system and serialize it");
    int b_n = 2, b_m = 5, b_depth = -1;
    std::string b_schedule, b_out = "out/system";
    build->add_option("--n", b_n, "cell dimension");
    build->add_option("--m", b_m, "subdivision factor");
    build->add_option("--depth", b_depth, "rounds of the default (1,2)-plane schedule");
    build->add_option("--schedule", b_schedule, "comma list like 12,13,s (s = plain subdivision)");
    build->add_option("--out", b_out, "output directory");

    // verify
    auto* verify = app.add_subcommand("verify", "run axiom/conservation checks on a system");
    std::string v_system = "out/system", v_checks = "wais,conservation", v_report;
    verify->add_option("--system", v_system, "system directory (manifest.json)");
    verify->add_option("--checks", v_checks, "comma list: wais,flux,ipoinc,conservation");
    verify->add_option("--report", v_report, "write a JSON report here");

    // galleries
    auto* gal = app.add_subcommand("galleries", "maximal galleries and flow measures");
    std::string g_system = "out/system", g_report;
    int g_axis = 1, g_level = 1;
    gal->add_option("--system", g_system);
    gal->add_option("--axis", g_axis, "1-based axis");
    gal->add_option("--level", g_level);
    gal->add_option("--report", g_report);

    // metric
    auto* met = app.add_subcommand("metric", "distortion decay and tower checks");
    std::string m_system = "out/system", m_report;
    int m_depth = 2;
    met->add_option("--system", m_system);
    met->add_option("--depth", m_depth, "sampling depth");
    met->add_option("--report", m_report);

    // polyapprox
    auto* pa = app.add_subcommand("polyapprox", "Nagata cover and nerve map certificate");
    std::string p_system = "out/system", p_scale = "1/25", p_report;
    int p_level = 2, p_depth = 1;
    pa->add_option("--system", p_system);
    pa->add_option("--level", p_level);
    pa->add_option("--scale", p_scale, "cover scale s as p/q");
    pa->add_option("--depth", p_depth, "sampling depth");
    pa->add_option("--report", p_report);

    // flatnorm
    auto* fn = app.add_subcommand("flatnorm", "flat-norm LP and cubical approximation");
    std::string f_chain, f_report;
    long f_grid = 8, f_fine = 64, f_coarse = 0;
    double f_eps = 0.5;
    fn->add_option("--chain", f_chain, "chain JSON ({dim, entries:[[id,coef]]}) on the grid");
    fn->add_option("--grid", f_grid, "grid resolution (cells per side, d = 2)");
    fn->add_option("--fine", f_fine, "rasterization grid for the rotated-square demo");
    fn->add_option("--coarse", f_coarse, "run cubical approximation onto this resolution");
    fn->add_option("--eps", f_eps);
    fn->add_option("--report", f_report);

    // report (campaign)
    auto* rc = app.add_subcommand("report", "run a configured campaign");
    std::string r_config;
    rc->add_option("--config", r_config, "campaign config JSON")->required();

    // export
    auto* ex = app.add_subcommand("export", "vertex/edge/cell geometry for plotting");
    std::string e_system = "out/system", e_out = "geometry.json";
    int e_level = 1;
    ex->add_option("--system", e_system);
    ex->add_option("--level", e_level);
    ex->add_option("--out", e_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*build) {
            std::vector<BuildStep> schedule;
            if (!b_schedule.empty())
                schedule = schedule_from_string(b_schedule);
            else
                for (int i = 0; i < std::max(b_depth, 0); ++i)
                    schedule.push_back(BuildStep{PlanePair{1, 2}});
            InverseSystem s = InverseSystem::build(new_unit_cube(b_n, b_m), schedule);
            write_system(s, b_out);
            std::cout << "built depth " << s.depth() << " system; top level has "
                      << s.level(s.depth()).cell_count() << " cells -> " << b_out << "\n";
            return 0;
        }
        if (*verify) {
            InverseSystem s = system_from(v_system);
            Json out;
            bool pass = true;
            if (v_checks.find("wais") != std::string::npos ||
                v_checks.find("flux") != std::string::npos ||
                v_checks.find("ipoinc") != std::string::npos) {
                WaisReport w = verify_wais(s);
                pass = pass && w.pass;
                out["wais_pass"] = w.pass;
                if (!w.pass) out["first_failure"] = w.first_failure();
                Json wit = Json::array();
                for (std::size_t i = 0; i < w.witnesses.size(); ++i)
                    wit.push_back(Json{{"level", i},
                                       {"c_geo", w.witnesses[i].c_geo},
                                       {"c_gall", w.witnesses[i].c_gall},
                                       {"c_mu", w.witnesses[i].c_mu}});
                out["witnesses"] = std::move(wit);
            }
            if (v_checks.find("conservation") != std::string::npos) {
                ConservationReport c = conservation_report(s);
                bool ok = c.mass_constant && c.boundary_constant;
                Json rows = Json::array();
                for (const auto& r : c.rows)
                    rows.push_back(Json{{"level", r.level},
                                        {"mass", rat_to_string(r.mass_total)},
                                        {"boundary_mass", rat_to_string(r.boundary_mass)}});
                out["conservation"] = Json{{"rows", std::move(rows)}, {"pass", ok}};
                pass = pass && ok;
            }
            out["pass"] = pass;
            std::string text = out.dump(2) + "\n";
            if (!v_report.empty()) write_text(v_report, text);
            std::cout << text;
            return pass ? 0 : 1;
        }
        if (*gal) {
            InverseSystem s = system_from(g_system);
            GalleryLevel gl = gallery_measure(s, g_level, g_axis - 1);
            DecompositionReport dr = verify_decomposition(gl);
            Json out;
            out["axis"] = g_axis;
            out["level"] = g_level;
            out["count"] = gl.set.galleries.size();
            out["decomposition_pass"] = dr.pass;
            if (!dr.pass) out["detail"] = dr.detail;
            Json hist = Json::object();
            for (const Rat& q : gl.q) {
                std::string key = rat_to_string(q);
                hist[key] = hist.value(key, 0) + 1;
            }
            out["q_histogram"] = std::move(hist);
            std::string text = out.dump(2) + "\n";
            if (!g_report.empty()) write_text(g_report, text);
            std::cout << text;
            return dr.pass ? 0 : 1;
        }
        if (*met) {
            InverseSystem s = system_from(m_system);
            Json rows = Json::array();
            for (int i = 0; i < s.depth(); ++i) {
                DistortionReport d = distortion(s.projection(i), m_depth);
                rows.push_back(Json{{"map", i},
                                    {"sup", d.sup_diff},
                                    {"scale", d.scale},
                                    {"ratio", d.ratio},
                                    {"pairs", d.pairs_checked}});
            }
            TapReport tap = tap_check(s, s.depth());
            Json out;
            out["distortion"] = std::move(rows);
            Json trows = Json::array();
            for (const auto& r : tap.rows)
                trows.push_back(Json{{"level", r.level},
                                     {"distortion", r.distortion},
                                     {"factorization_exact", r.factorization_exact}});
            out["tap"] = std::move(trows);
            out["tap_factorization_pass"] = tap.factorization_pass;
            std::string text = out.dump(2) + "\n";
            if (!m_report.empty()) write_text(m_report, text);
            std::cout << text;
            return tap.factorization_pass ? 0 : 1;
        }
        if (*pa) {
            InverseSystem s = system_from(p_system);
            FiniteMetricSpace fms =
                sample_metric(s.level(std::min(p_level, s.depth())), p_depth, max_points_env());
            Rat scale = rat_from_string(p_scale);
            NagataCover cover = nagata_cover_grid(fms, scale);
            auto [nerve, cert] = poly_approx(fms, cover, scale);
            Json out;
            out["points"] = fms.points();
            out["sets"] = cover.set_count();
            out["s_witness"] = cover.s_witness;
            out["c_witness"] = cover.c_witness;
            out["nerve_dimension"] = nerve.dimension;
            out["measured_distortion"] = cert.measured_distortion;
            out["bound_distortion"] = cert.bound_distortion;
            out["measured_lip"] = cert.measured_lip;
            out["bound_lip"] = cert.bound_lip;
            out["pass"] = cert.pass;
            std::string text = out.dump(2) + "\n";
            if (!p_report.empty()) write_text(p_report, text);
            std::cout << text;
            return cert.pass ? 0 : 1;
        }
        if (*fn) {
            Json out;
            bool pass = true;
            GridComplex fine(2, f_fine);
            if (!f_chain.empty()) {
                Json jc = Json::parse(read_text(f_chain));
                GridComplex g(2, f_grid);
                GridChain t;
                t.grid = &g;
                t.dim = jc.at("dim").get<int>();
                for (const Json& e : jc.at("entries"))
                    t.entries[e.at(0).get<long>()] = e.at(1).get<double>();
                FlatNormResult fr = flat_norm(t);
                out["flat_norm"] = fr.value;
                out["s1_mass"] = mass(fr.s1);
                out["s2_mass"] = mass(fr.s2);
            } else {
                GridChain t = rasterize(rotated_square(), 1.0, fine);
                out["raster_mass"] = mass(t);
                if (f_coarse > 0) {
                    GridComplex coarse(2, f_coarse);
                    auto [tc, cert] = cubical_approximation(t, coarse, f_eps);
                    out["flat_distance"] = cert.flat_distance;
                    out["normal_mass_fine"] = cert.normal_mass_fine;
                    out["normal_mass_coarse"] = cert.normal_mass_coarse;
                    out["flat_ok"] = cert.flat_ok;
                    out["normal_mass_ok"] = cert.normal_mass_ok;
                    pass = cert.flat_ok && cert.normal_mass_ok;
                }
            }
            std::string text = out.dump(2) + "\n";
            if (!f_report.empty()) write_text(f_report, text);
            std::cout << text;
            return pass ? 0 : 1;
        }
        if (*rc) {
            CampaignConfig cfg = CampaignConfig::from_json(Json::parse(read_text(r_config)));
            CampaignResult res = run_campaign(cfg);
            if (cfg.out_dir.empty()) std::cout << res.report.dump(2) << "\n";
            std::cout << (res.all_pass ? "PASS" : "FAIL") << "\n";
            return res.all_pass ? 0 : 1;
        }
        if (*ex) {
            InverseSystem s = system_from(e_system);
            Json g = export_geometry(s.level(std::min(e_level, s.depth())));
            write_text(e_out, g.dump() + "\n");
            std::cout << "exported " << g["vertices"].size() << " vertices, " << g["edges"].size()
                      << " edges -> " << e_out << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
