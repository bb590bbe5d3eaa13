// Command-line front end. Talks to the core through the C API only.
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cchn.h"
#include "json.hpp"

using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text)) throw std::runtime_error("cannot write " + path);
}

// 0 success, 2 invalid input, 3 solver failure.
int exit_code(cchn_status st) {
    if (st == CCHN_OK) return 0;
    std::fprintf(stderr, "error: %s\n", cchn_last_error());
    return st == CCHN_E_SOLVER || st == CCHN_E_INTERNAL ? 3 : 2;
}

int emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return 0;
    }
    spill(out_path, text);
    return 0;
}

struct OwnedString {
    char* s = nullptr;
    ~OwnedString() { cchn_string_free(s); }
    std::string str() const { return s == nullptr ? std::string() : std::string(s); }
};

struct OwnedScenario {
    cchn_scenario* sc = nullptr;
    ~OwnedScenario() { cchn_scenario_free(sc); }
};

cchn_status load_scenario(const std::string& path, OwnedScenario& out) {
    return cchn_scenario_parse(slurp(path).c_str(), &out.sc);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cooperative spectrum planning toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    // Shared knobs; each subcommand reads the ones it understands.
    std::uint64_t seed = 1;
    double tolerance = 1e-6;
    std::string mis_mode = "augmented";
    int budget = 500;
    std::string out_path;
    int jobs = 1;
    app.add_option("--seed", seed, "random seed");
    app.add_option("--tolerance", tolerance, "solution replay tolerance");
    app.add_option("--mis-mode", mis_mode, "exact|sio|augmented")
        ->check(CLI::IsMember({"exact", "sio", "augmented"}));
    app.add_option("--budget", budget, "independent-set search budget");
    app.add_option("--out", out_path, "output file (stdout when omitted)");
    app.add_option("--jobs", jobs, "parallel sweep workers");

    auto* gen = app.add_subcommand("gen-grid", "emit a canonical scenario");
    double spacing = 200.0, alpha = 1.0, rho = 1.0;
    double volume = 2e7, frame = 0.01;
    double rate_cr = 3e6, rate_pcr = 3e6, rate_primary = 3e6;
    int n_sessions = 5;
    bool two_hop = false, toy = false;
    std::vector<double> lengths;
    gen->add_option("--spacing", spacing, "facility spacing, m");
    gen->add_option("--alpha", alpha, "delivery speedup demanded by sessions");
    gen->add_option("--rho", rho, "probability the primary users are active");
    gen->add_option("--sessions", n_sessions, "canonical session count, 0..5");
    gen->add_flag("--two-hop", two_hop, "route session 4 through its relay");
    gen->add_option("--volume", volume, "per-session data volume, bits");
    gen->add_option("--lengths", lengths, "session lengths, s")->delimiter(',');
    gen->add_option("--rate-cr", rate_cr, "secondary link rate, bps");
    gen->add_option("--rate-pcr", rate_pcr, "relay link rate, bps");
    gen->add_option("--rate-primary", rate_primary, "direct primary rate, bps");
    gen->add_option("--frame", frame, "baseline frame length, s");
    gen->add_flag("--toy", toy, "emit the unit-range line topology instead");

    auto* links_cmd = app.add_subcommand("links", "derive the link table");
    auto* graph_cmd = app.add_subcommand("graph", "derive the conflict graph");
    bool stats_only = false;
    graph_cmd->add_flag("--stats", stats_only, "print vertex/edge counts only");
    auto* mis_cmd = app.add_subcommand("mis", "search maximal independent sets");
    auto* solve_cmd = app.add_subcommand("solve", "joint selection/routing/schedule");
    bool bnb = false, flows = false;
    int theta_guard = 12;
    solve_cmd->add_flag("--bnb", bnb, "branch and bound over the selection");
    solve_cmd->add_flag("--flows", flows, "include per-link flows and schedule");
    solve_cmd->add_option("--theta-guard", theta_guard,
                          "max session count for enumeration");
    auto* llc_cmd = app.add_subcommand("llc", "frame-based baseline");
    double llc_frame = 0.0;
    llc_cmd->add_option("--frame", llc_frame, "frame length override, s");
    auto* compare_cmd = app.add_subcommand("compare", "run both schemes");
    compare_cmd->add_flag("--bnb", bnb, "branch and bound over the selection");
    compare_cmd->add_option("--frame", llc_frame, "frame length override, s");

    auto* scaling_cmd = app.add_subcommand("scaling", "asymptotic bound table");
    std::vector<double> sn{1e4};
    double sb = 0.8, sd = 0.4, sw = 1.0, c1 = 1.0, c2 = 1.0, c3 = 1.0;
    int trials = 0;
    std::string points_file;
    scaling_cmd->add_option("--n", sn, "user counts")->delimiter(',');
    scaling_cmd->add_option("--b", sb, "facility exponent");
    scaling_cmd->add_option("--d", sd, "base-station exponent");
    scaling_cmd->add_option("--w", sw, "harvested bandwidth");
    scaling_cmd->add_option("--c1", c1, "row BS constant");
    scaling_cmd->add_option("--c2", c2, "column BS constant");
    scaling_cmd->add_option("--c3", c3, "subsquare rate constant");
    scaling_cmd->add_option("--trials", trials, "Monte Carlo trials per point");
    scaling_cmd->add_option("--points", points_file, "JSON file with point list");

    auto* exp_cmd = app.add_subcommand("experiment", "parameter sweep to CSV");
    std::string spec_file;
    exp_cmd->add_option("--spec", spec_file, "experiment spec JSON")->required();

    std::string scenario_path;
    for (CLI::App* c : {links_cmd, graph_cmd, mis_cmd, solve_cmd, llc_cmd, compare_cmd})
        c->add_option("--scenario", scenario_path, "scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            OwnedScenario sc;
            cchn_status st;
            if (toy) {
                st = cchn_scenario_toy(&sc.sc);
            } else {
                json opts{{"spacing_m", spacing}, {"alpha", alpha},
                          {"rho", rho},           {"sessions", n_sessions},
                          {"two_hop_s4", two_hop}, {"volume_bits", volume},
                          {"rate_cr_bps", rate_cr}, {"rate_pcr_bps", rate_pcr},
                          {"rate_primary_bps", rate_primary}, {"llc_frame_s", frame}};
                if (!lengths.empty()) opts["lengths_s"] = lengths;
                st = cchn_scenario_grid(opts.dump().c_str(), &sc.sc);
            }
            if (st != CCHN_OK) return exit_code(st);
            OwnedString text;
            st = cchn_scenario_to_json(sc.sc, &text.s);
            if (st != CCHN_OK) return exit_code(st);
            return emit(text.str(), out_path);
        }

        OwnedScenario sc;
        if (!scenario_path.empty()) {
            cchn_status st = load_scenario(scenario_path, sc);
            if (st != CCHN_OK) return exit_code(st);
        }

        json solver_opts{{"mis_mode", mis_mode}, {"budget", budget},
                         {"seed", seed},         {"tolerance", tolerance},
                         {"branch_and_bound", bnb}, {"theta_guard", theta_guard},
                         {"include_flows", flows}};
        if (llc_frame > 0.0) solver_opts["frame_s"] = llc_frame;
        std::string opts_text = solver_opts.dump();

        if (links_cmd->parsed()) {
            OwnedString text;
            cchn_status st = cchn_links_text(sc.sc, &text.s);
            return st == CCHN_OK ? emit(text.str(), out_path) : exit_code(st);
        }
        if (graph_cmd->parsed()) {
            if (stats_only) {
                int v = 0;
                long long e = 0;
                cchn_status st = cchn_graph_stats(sc.sc, &v, &e);
                if (st != CCHN_OK) return exit_code(st);
                char buf[64];
                std::snprintf(buf, sizeof buf, "vertices %d\nedges %lld\n", v, e);
                return emit(buf, out_path);
            }
            OwnedString text;
            cchn_status st = cchn_graph_text(sc.sc, &text.s);
            return st == CCHN_OK ? emit(text.str(), out_path) : exit_code(st);
        }
        if (mis_cmd->parsed()) {
            OwnedString text;
            int count = 0;
            cchn_status st =
                cchn_mis_text(sc.sc, mis_mode.c_str(), budget, seed, &text.s, &count);
            if (st != CCHN_OK) return exit_code(st);
            std::fprintf(stderr, "%d independent sets\n", count);
            return emit(text.str(), out_path);
        }
        if (solve_cmd->parsed()) {
            OwnedString report;
            cchn_status st = cchn_solve_nlc(sc.sc, opts_text.c_str(), &report.s);
            return st == CCHN_OK ? emit(report.str(), out_path) : exit_code(st);
        }
        if (llc_cmd->parsed()) {
            OwnedString report;
            cchn_status st = cchn_solve_llc(sc.sc, opts_text.c_str(), &report.s);
            return st == CCHN_OK ? emit(report.str(), out_path) : exit_code(st);
        }
        if (compare_cmd->parsed()) {
            OwnedString nlc, llc;
            cchn_status st = cchn_solve_nlc(sc.sc, opts_text.c_str(), &nlc.s);
            if (st != CCHN_OK) return exit_code(st);
            st = cchn_solve_llc(sc.sc, opts_text.c_str(), &llc.s);
            if (st != CCHN_OK) return exit_code(st);
            json both{{"nlc", json::parse(nlc.str())}, {"llc", json::parse(llc.str())}};
            return emit(both.dump(2) + "\n", out_path);
        }
        if (scaling_cmd->parsed()) {
            json params;
            if (!points_file.empty()) {
                params = json::parse(slurp(points_file));
                if (params.is_array()) params = json{{"points", std::move(params)}};
            } else {
                json pts = json::array();
                for (double n : sn)
                    pts.push_back(json{{"n", n}, {"b", sb}, {"d", sd}, {"W", sw},
                                       {"c1", c1}, {"c2", c2}, {"c3", c3}});
                params = json{{"points", std::move(pts)}};
            }
            params["trials"] = trials;
            params["seed"] = seed;
            OwnedString csv;
            cchn_status st = cchn_scaling_eval(params.dump().c_str(), &csv.s);
            return st == CCHN_OK ? emit(csv.str(), out_path) : exit_code(st);
        }
        if (exp_cmd->parsed()) {
            json spec = json::parse(slurp(spec_file));
            if (spec.contains("scenario_file")) {
                spec["scenario"] = json::parse(slurp(spec.at("scenario_file")));
                spec.erase("scenario_file");
            }
            // Command line overrides the spec file where both are given.
            if (app.count("--seed")) spec["seed"] = seed;
            if (app.count("--mis-mode")) spec["mis_mode"] = mis_mode;
            if (app.count("--budget")) spec["budget"] = budget;
            if (app.count("--jobs")) spec["jobs"] = jobs;
            OwnedString csv, meta;
            cchn_status st = cchn_run_experiment(spec.dump().c_str(), &csv.s, &meta.s);
            if (st != CCHN_OK) return exit_code(st);
            if (out_path.empty()) {
                std::fputs(csv.str().c_str(), stdout);
                return 0;
            }
            spill(out_path, csv.str());
            spill(out_path + ".meta.json", meta.str());
            return 0;
        }
    } catch (const json::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
