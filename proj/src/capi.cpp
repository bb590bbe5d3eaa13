#include "cchn.h"

#include <cstring>
#include <string>

#include "errors.hpp"
#include "experiment.hpp"
#include "json.hpp"
#include "scaling.hpp"
#include "scenario_json.hpp"

using namespace cchn;
using nlohmann::json;

struct cchn_scenario {
    Scenario sc;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* p = new char[s.size() + 1];
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

template <typename Fn>
cchn_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return CCHN_OK;
    } catch (const ParseError& e) {
        g_last_error = e.what();
        return CCHN_E_PARSE;
    } catch (const json::exception& e) {
        g_last_error = e.what();
        return CCHN_E_PARSE;
    } catch (const GuardError& e) {
        g_last_error = e.what();
        return CCHN_E_GUARD;
    } catch (const SolverError& e) {
        g_last_error = e.what();
        return CCHN_E_SOLVER;
    } catch (const ValidationError& e) {
        g_last_error = e.what();
        return CCHN_E_INVALID;
    } catch (const std::domain_error& e) {
        g_last_error = e.what();
        return CCHN_E_INVALID;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return CCHN_E_INVALID;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CCHN_E_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return CCHN_E_INTERNAL;
    }
}

void require(bool cond, const char* what) {
    if (!cond) throw ValidationError(what);
}

json parse_options(const char* options_json) {
    if (options_json == nullptr || *options_json == '\0') return json::object();
    json j = json::parse(options_json);
    require(j.is_object(), "options must be a JSON object");
    return j;
}

PipelineOptions pipeline_options(const json& j) {
    PipelineOptions opts;
    opts.mis_mode = mis_mode_from_name(j.value("mis_mode", "augmented"));
    opts.budget = j.value("budget", 500);
    opts.seed = j.value("seed", std::uint64_t{1});
    opts.nlc.branch_and_bound = j.value("branch_and_bound", false);
    opts.nlc.theta_guard = j.value("theta_guard", 12);
    opts.nlc.verify_tol = j.value("tolerance", 1e-6);
    opts.llc.frame_s = j.value("frame_s", 0.0);
    return opts;
}

json nlc_report(const NlcRun& run, bool include_flows) {
    const NlcInstance& inst = run.instance;
    const NlcThetaSolution& best = run.result.best;
    json j;
    j["objective_bps"] = best.objective_bps;
    j["active_bps"] = run.active_bps;
    j["idle_bps"] = run.idle_bps;
    j["expected_bps"] = run.expected_bps;
    j["control"] = json{{"T_s", inst.control.T},
                        {"from_bs_conflict", inst.control.from_bs_conflict},
                        {"fallback_all_sessions", inst.control.fallback_all_sessions},
                        {"fallback_unit", inst.control.fallback_unit}};
    j["q_mis"] = inst.mis.sets.size();
    j["theta_space"] = run.result.theta_space;
    j["lp"] = json{{"rows", best.rows},
                   {"cols", best.cols},
                   {"solved", run.result.lp_solved},
                   {"iterations", run.result.lp_iterations}};
    if (inst.mis_stats.subset_iterations > 0)
        j["subset_iterations"] = inst.mis_stats.subset_iterations;

    json sessions = json::array();
    for (int p = 0; p < inst.num_sessions(); ++p) {
        const PrimarySession& s = inst.session_at(p);
        json js{{"session", s.id},
                {"selected", best.theta[p] != 0},
                {"length_s", s.length_s},
                {"volume_bits", s.volume_bits}};
        if (best.completion_s[p].has_value())
            js["completion_s"] = *best.completion_s[p];
        else
            js["completion_s"] = nullptr;
        sessions.push_back(std::move(js));
    }
    j["sessions"] = std::move(sessions);

    json ups = json::array();
    for (std::size_t l = 0; l < inst.flows.size(); ++l)
        ups.push_back(json{{"edge_router", inst.flows[l]},
                           {"bps", best.upsilon_bps[l]}});
    j["upsilon_bps"] = std::move(ups);

    if (include_flows) {
        int E = inst.num_links();
        int Q = static_cast<int>(inst.mis.sets.size());
        json fs = json::array();
        for (std::size_t l = 0; l < inst.flows.size(); ++l)
            for (int e = 0; e < E; ++e)
                if (best.f_bps[l * E + e] > 1e-9)
                    fs.push_back(json{{"edge_router", inst.flows[l]},
                                      {"link", link_label(inst.links[e])},
                                      {"bps", best.f_bps[l * E + e]}});
        j["secondary_flows"] = std::move(fs);
        json fps = json::array();
        for (int p = 0; p < inst.num_sessions(); ++p)
            for (int e = 0; e < E; ++e)
                if (best.fp_bps[p * E + e] > 1e-9)
                    fps.push_back(json{{"session", inst.session_at(p).id},
                                       {"link", link_label(inst.links[e])},
                                       {"bps", best.fp_bps[p * E + e]}});
        j["primary_flows"] = std::move(fps);
        json sched = json::array();
        for (int m = 0; m < inst.num_intervals(); ++m)
            for (int q = 0; q < Q; ++q)
                if (best.lam[m * Q + q] > 1e-12)
                    sched.push_back(json{{"interval", m},
                                         {"from_s", inst.t[m]},
                                         {"to_s", inst.t[m + 1]},
                                         {"mis", q},
                                         {"share", best.lam[m * Q + q]}});
        j["schedule"] = std::move(sched);
    }
    return j;
}

json llc_report(const LlcRun& run) {
    const LlcReport& rep = run.report;
    json j;
    j["active_bps"] = run.active_bps;
    j["idle_bps"] = run.idle_bps;
    j["expected_bps"] = run.expected_bps;
    j["T_s"] = rep.T;
    j["frame_s"] = rep.frame_s;
    json sessions = json::array();
    for (const LlcSessionPlan& pl : rep.sessions) {
        json js{{"session", pl.session_id},
                {"frames_total", pl.frames_total},
                {"frames_counted", pl.frames_counted},
                {"frame_payload_bits", pl.frame_payload_bits},
                {"subframe_s", pl.subframe_s},
                {"completion_s", pl.completion_s},
                {"secondary_bits", pl.secondary_bits}};
        json hops = json::array();
        for (const LlcHopPlan& hp : pl.hops)
            hops.push_back(json{{"hop", hp.hop},
                                {"relay", hp.relay},
                                {"cooperate", hp.cooperate},
                                {"delivery_s", hp.delivery_s},
                                {"direct_s", hp.direct_s},
                                {"leftover_s", hp.leftover_s},
                                {"secondary_rate_bps", hp.secondary_rate_bps}});
        js["hops"] = std::move(hops);
        sessions.push_back(std::move(js));
    }
    j["sessions"] = std::move(sessions);
    return j;
}

ScalingParams scaling_params(const json& j) {
    ScalingParams p;
    p.n = j.value("n", p.n);
    p.b = j.value("b", p.b);
    p.d = j.value("d", p.d);
    p.W = j.value("W", p.W);
    p.c1 = j.value("c1", p.c1);
    p.c2 = j.value("c2", p.c2);
    p.c3 = j.value("c3", p.c3);
    return p;
}

}  // namespace

extern "C" {

const char* cchn_version(void) { return kVersion; }

const char* cchn_last_error(void) { return g_last_error.c_str(); }

void cchn_string_free(char* s) { delete[] s; }

cchn_status cchn_scenario_parse(const char* json_text, cchn_scenario** out) {
    return guarded([&] {
        require(json_text != nullptr && out != nullptr, "null argument");
        *out = new cchn_scenario{scenario_from_json(json_text)};
    });
}

cchn_status cchn_scenario_grid(const char* options_json, cchn_scenario** out) {
    return guarded([&] {
        require(out != nullptr, "null argument");
        json j = parse_options(options_json);
        Rates rates;
        rates.cr_bps = j.value("rate_cr_bps", rates.cr_bps);
        rates.pcr_bps = j.value("rate_pcr_bps", rates.pcr_bps);
        rates.primary_bps = j.value("rate_primary_bps", rates.primary_bps);
        GridSessionSpec spec;
        spec.count = j.value("sessions", spec.count);
        spec.two_hop_s4 = j.value("two_hop_s4", spec.two_hop_s4);
        if (j.contains("lengths_s"))
            spec.lengths_s = j.at("lengths_s").get<std::vector<double>>();
        spec.volume_bits = j.value("volume_bits", spec.volume_bits);
        Scenario sc = make_grid_scenario(j.value("spacing_m", 200.0),
                                         j.value("alpha", 1.0), j.value("rho", 1.0),
                                         rates, spec);
        sc.llc_frame_s = j.value("llc_frame_s", sc.llc_frame_s);
        validate(sc);
        *out = new cchn_scenario{std::move(sc)};
    });
}

cchn_status cchn_scenario_toy(cchn_scenario** out) {
    return guarded([&] {
        require(out != nullptr, "null argument");
        *out = new cchn_scenario{make_toy_scenario()};
    });
}

cchn_status cchn_scenario_to_json(const cchn_scenario* sc, char** out_json) {
    return guarded([&] {
        require(sc != nullptr && out_json != nullptr, "null argument");
        *out_json = dup_string(scenario_to_json(sc->sc));
    });
}

void cchn_scenario_free(cchn_scenario* sc) { delete sc; }

cchn_status cchn_links_text(const cchn_scenario* sc, char** out_text) {
    return guarded([&] {
        require(sc != nullptr && out_text != nullptr, "null argument");
        validate(sc->sc);
        *out_text = dup_string(links_text(derive_links(sc->sc)));
    });
}

cchn_status cchn_graph_text(const cchn_scenario* sc, char** out_text) {
    return guarded([&] {
        require(sc != nullptr && out_text != nullptr, "null argument");
        validate(sc->sc);
        ConflictGraph g = build_conflict_graph(sc->sc, derive_links(sc->sc));
        *out_text = dup_string(edge_list_text(g));
    });
}

cchn_status cchn_graph_stats(const cchn_scenario* sc, int* out_vertices,
                             long long* out_edges) {
    return guarded([&] {
        require(sc != nullptr && out_vertices != nullptr && out_edges != nullptr,
                "null argument");
        validate(sc->sc);
        ConflictGraph g = build_conflict_graph(sc->sc, derive_links(sc->sc));
        *out_vertices = static_cast<int>(g.vertices.size());
        *out_edges = static_cast<long long>(g.edge_count());
    });
}

cchn_status cchn_mis_text(const cchn_scenario* sc, const char* mode, int budget,
                          uint64_t seed, char** out_text, int* out_count) {
    return guarded([&] {
        require(sc != nullptr && mode != nullptr && out_text != nullptr,
                "null argument");
        NlcInstance inst =
            build_nlc_instance(sc->sc, mis_mode_from_name(mode), budget, seed);
        *out_text = dup_string(mis_text(inst.graph, inst.mis));
        if (out_count != nullptr) *out_count = static_cast<int>(inst.mis.sets.size());
    });
}

cchn_status cchn_solve_nlc(const cchn_scenario* sc, const char* options_json,
                           char** out_report_json) {
    return guarded([&] {
        require(sc != nullptr && out_report_json != nullptr, "null argument");
        json j = parse_options(options_json);
        NlcRun run = run_nlc_pipeline(sc->sc, pipeline_options(j));
        *out_report_json =
            dup_string(nlc_report(run, j.value("include_flows", false)).dump(2) + "\n");
    });
}

cchn_status cchn_solve_llc(const cchn_scenario* sc, const char* options_json,
                           char** out_report_json) {
    return guarded([&] {
        require(sc != nullptr && out_report_json != nullptr, "null argument");
        json j = parse_options(options_json);
        LlcRun run = run_llc_pipeline(sc->sc, pipeline_options(j));
        *out_report_json = dup_string(llc_report(run).dump(2) + "\n");
    });
}

cchn_status cchn_run_experiment(const char* spec_json, char** out_csv,
                                char** out_meta_json) {
    return guarded([&] {
        require(spec_json != nullptr && out_csv != nullptr, "null argument");
        json j = json::parse(spec_json);
        require(j.is_object() && j.contains("scenario"),
                "experiment spec needs a \"scenario\" object");
        ExperimentSpec spec;
        spec.scenario = scenario_from_json(j.at("scenario").dump());
        spec.var = sweep_from_name(j.value("sweep_var", "volume_bits"));
        spec.values = j.value("values", std::vector<double>{});
        spec.mode = mode_from_name(j.value("mode", "nlc"));
        spec.mis_mode = mis_mode_from_name(j.value("mis_mode", "augmented"));
        spec.budget = j.value("budget", 500);
        spec.seed = j.value("seed", std::uint64_t{1});
        spec.jobs = j.value("jobs", 1);
        spec.nlc.branch_and_bound = j.value("branch_and_bound", false);
        spec.nlc.theta_guard = j.value("theta_guard", 12);
        spec.llc.frame_s = j.value("frame_s", 0.0);
        std::vector<ResultRow> rows = run_experiment(spec);
        *out_csv = dup_string(experiment_csv(spec, rows));
        if (out_meta_json != nullptr)
            *out_meta_json = dup_string(experiment_meta_json(spec, rows));
    });
}

cchn_status cchn_scaling_eval(const char* params_json, char** out_csv) {
    return guarded([&] {
        require(params_json != nullptr && out_csv != nullptr, "null argument");
        json j = json::parse(params_json);
        require(j.is_object(), "scaling parameters must be a JSON object");
        int trials = j.value("trials", 0);
        std::uint64_t seed = j.value("seed", std::uint64_t{1});
        std::vector<ScalingPoint> pts;
        if (j.contains("points")) {
            for (const json& pj : j.at("points"))
                pts.push_back(evaluate_scaling(scaling_params(pj), trials, seed));
        } else {
            pts.push_back(evaluate_scaling(scaling_params(j), trials, seed));
        }
        *out_csv = dup_string(scaling_csv(pts));
    });
}

}  // extern "C"
