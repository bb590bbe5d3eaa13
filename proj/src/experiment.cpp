#include "experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <thread>

#include "errors.hpp"
#include "json.hpp"

namespace cchn {

namespace {

std::string strf(const char* fmt, ...) {
    char buf[160];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

std::string join_completions(const std::vector<double>& cs) {
    std::string out;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (i) out += ';';
        out += cs[i] < 0.0 ? std::string("-") : strf("%.10g", cs[i]);
    }
    return out;
}

std::string theta_string(const std::vector<std::uint8_t>& theta) {
    std::string out;
    for (std::uint8_t t : theta) out += t ? '1' : '0';
    return out;
}

// Commas and newlines would break the row; spaces keep the message readable.
std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ' ';
    return s;
}

ResultRow run_cell(const ExperimentSpec& spec, double value, bool llc_scheme) {
    ResultRow row;
    row.sweep_value = value;
    row.scheme = llc_scheme ? "llc" : "nlc";
    auto t0 = std::chrono::steady_clock::now();

    Scenario sc;
    try {
        sc = apply_sweep(spec.scenario, spec.var, value);
        row.alpha = sc.alpha;
        row.rho = sc.rho;
        row.rate_cr_bps = sc.rates.cr_bps;
        row.rate_pcr_bps = sc.rates.pcr_bps;
        row.rate_primary_bps = sc.rates.primary_bps;
        row.volume_bits = sc.sessions.empty() ? 0.0 : sc.sessions[0].volume_bits;

        PipelineOptions opts;
        opts.mis_mode = spec.mis_mode;
        opts.budget = spec.var == SweepVar::Budget ? static_cast<int>(value) : spec.budget;
        row.budget = opts.budget;
        opts.seed = spec.seed;
        opts.nlc = spec.nlc;
        opts.llc = spec.llc;

        if (llc_scheme) {
            LlcRun run = run_llc_pipeline(sc, opts);
            row.active_bps = run.active_bps;
            row.idle_bps = run.idle_bps;
            row.expected_bps = run.expected_bps;
            row.control_T_s = run.report.T;
            for (const LlcSessionPlan& pl : run.report.sessions)
                row.completion_s.push_back(pl.completion_s);
        } else {
            NlcRun run = run_nlc_pipeline(sc, opts);
            row.active_bps = run.active_bps;
            row.idle_bps = run.idle_bps;
            row.expected_bps = run.expected_bps;
            row.control_T_s = run.instance.control.T;
            row.theta = run.result.best.theta;
            for (const auto& c : run.result.best.completion_s)
                row.completion_s.push_back(c.has_value() ? *c : -1.0);
            row.q_mis = static_cast<int>(run.instance.mis.sets.size());
            row.lp_rows = run.result.best.rows;
            row.lp_cols = run.result.best.cols;
            row.lp_solved = run.result.lp_solved;
            row.lp_iterations = run.result.lp_iterations;
        }
        row.ok = true;
    } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
    }

    auto t1 = std::chrono::steady_clock::now();
    row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return row;
}

}  // namespace

const char* sweep_name(SweepVar v) {
    switch (v) {
        case SweepVar::VolumeBits: return "volume_bits";
        case SweepVar::RatePcr: return "rate_pcr_bps";
        case SweepVar::RateCr: return "rate_cr_bps";
        case SweepVar::TCommon: return "t_common_s";
        case SweepVar::Alpha: return "alpha";
        case SweepVar::Rho: return "rho";
        case SweepVar::Budget: return "budget";
    }
    return "?";
}

const char* mode_name(RunMode m) {
    switch (m) {
        case RunMode::Nlc: return "nlc";
        case RunMode::Llc: return "llc";
        case RunMode::Both: return "both";
    }
    return "?";
}

const char* mis_mode_name(MisMode m) {
    switch (m) {
        case MisMode::Exact: return "exact";
        case MisMode::Sio: return "sio";
        case MisMode::Augmented: return "augmented";
    }
    return "?";
}

SweepVar sweep_from_name(const std::string& s) {
    for (SweepVar v : {SweepVar::VolumeBits, SweepVar::RatePcr, SweepVar::RateCr,
                       SweepVar::TCommon, SweepVar::Alpha, SweepVar::Rho,
                       SweepVar::Budget})
        if (s == sweep_name(v)) return v;
    throw ValidationError("unknown sweep variable \"" + s + "\"");
}

RunMode mode_from_name(const std::string& s) {
    for (RunMode m : {RunMode::Nlc, RunMode::Llc, RunMode::Both})
        if (s == mode_name(m)) return m;
    throw ValidationError("unknown run mode \"" + s + "\"");
}

MisMode mis_mode_from_name(const std::string& s) {
    for (MisMode m : {MisMode::Exact, MisMode::Sio, MisMode::Augmented})
        if (s == mis_mode_name(m)) return m;
    throw ValidationError("unknown mis mode \"" + s + "\"");
}

Scenario apply_sweep(Scenario sc, SweepVar var, double value) {
    switch (var) {
        case SweepVar::VolumeBits:
            for (PrimarySession& s : sc.sessions) s.volume_bits = value;
            break;
        case SweepVar::RatePcr:
            sc.rates.pcr_bps = value;
            break;
        case SweepVar::RateCr:
            sc.rates.cr_bps = value;
            break;
        case SweepVar::TCommon:
            for (PrimarySession& s : sc.sessions) s.length_s = value;
            break;
        case SweepVar::Alpha:
            sc.alpha = value;
            break;
        case SweepVar::Rho:
            sc.rho = value;
            break;
        case SweepVar::Budget:
            break;  // applied to the search options, not the scenario
    }
    return sc;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
    if (spec.values.empty())
        throw ValidationError("experiment sweep values must be non-empty");
    for (double v : spec.values)
        if (!std::isfinite(v))
            throw ValidationError("experiment sweep values must be finite");

    struct Cell {
        double value;
        bool llc;
    };
    std::vector<Cell> cells;
    for (double v : spec.values) {
        if (spec.mode != RunMode::Llc) cells.push_back({v, false});
        if (spec.mode != RunMode::Nlc) cells.push_back({v, true});
    }

    std::vector<ResultRow> rows(cells.size());
    int jobs = std::max(1, spec.jobs);
    jobs = std::min<int>(jobs, static_cast<int>(cells.size()));
    if (jobs == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            rows[i] = run_cell(spec, cells[i].value, cells[i].llc);
        return rows;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            rows[i] = run_cell(spec, cells[i].value, cells[i].llc);
        }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    return rows;
}

std::string experiment_csv(const ExperimentSpec& spec,
                           const std::vector<ResultRow>& rows) {
    std::string out =
        "sweep_var,sweep_value,scheme,mis_mode,alpha,rho,rate_cr_bps,rate_pcr_bps,"
        "rate_primary_bps,volume_bits,control_T_s,budget,seed,status,active_bps,"
        "idle_bps,expected_bps,theta,completion_s,q_mis,lp_rows,lp_cols,lp_solved,"
        "lp_iterations,error\n";
    for (const ResultRow& r : rows) {
        out += strf("%s,%.10g,%s,%s,", sweep_name(spec.var), r.sweep_value,
                    r.scheme.c_str(), mis_mode_name(spec.mis_mode));
        out += strf("%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%d,%llu,", r.alpha,
                    r.rho, r.rate_cr_bps, r.rate_pcr_bps, r.rate_primary_bps,
                    r.volume_bits, r.control_T_s, r.budget,
                    static_cast<unsigned long long>(spec.seed));
        out += r.ok ? "ok," : "error,";
        out += strf("%.10g,%.10g,%.10g,", r.active_bps, r.idle_bps, r.expected_bps);
        out += theta_string(r.theta) + "," + join_completions(r.completion_s) + ",";
        out += strf("%d,%d,%d,%d,%ld,", r.q_mis, r.lp_rows, r.lp_cols, r.lp_solved,
                    r.lp_iterations);
        out += csv_safe(r.error) + "\n";
    }
    return out;
}

std::string experiment_meta_json(const ExperimentSpec& spec,
                                 const std::vector<ResultRow>& rows) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["seed"] = spec.seed;
    j["sweep_var"] = sweep_name(spec.var);
    j["values"] = spec.values;
    j["mode"] = mode_name(spec.mode);
    j["mis_mode"] = mis_mode_name(spec.mis_mode);
    j["budget"] = spec.budget;
    j["jobs"] = spec.jobs;
    j["branch_and_bound"] = spec.nlc.branch_and_bound;
    j["rows"] = rows.size();
    double total = 0.0;
    nlohmann::json per = nlohmann::json::array();
    for (const ResultRow& r : rows) {
        total += r.wall_ms;
        per.push_back(r.wall_ms);
    }
    j["wall_ms_total"] = total;
    j["wall_ms"] = std::move(per);
    return j.dump(2) + "\n";
}

void emit_plotdata(const ExperimentSpec& spec, const std::vector<ResultRow>& rows,
                   const std::string& csv_path) {
    if (rows.empty()) throw ValidationError("emit_plotdata: no rows");
    {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + csv_path);
        f << experiment_csv(spec, rows);
        if (!f) throw std::runtime_error("write failed: " + csv_path);
    }
    std::string meta_path = csv_path + ".meta.json";
    std::ofstream f(meta_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + meta_path);
    f << experiment_meta_json(spec, rows);
    if (!f) throw std::runtime_error("write failed: " + meta_path);
}

}  // namespace cchn
