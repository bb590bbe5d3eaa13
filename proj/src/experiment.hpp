#ifndef CCHN_EXPERIMENT_HPP
#define CCHN_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "pipeline.hpp"

namespace cchn {

inline constexpr const char* kVersion = "0.1.0";

enum class SweepVar { VolumeBits, RatePcr, RateCr, TCommon, Alpha, Rho, Budget };
enum class RunMode { Nlc, Llc, Both };

const char* sweep_name(SweepVar v);
const char* mode_name(RunMode m);
const char* mis_mode_name(MisMode m);

// Throws ValidationError on unknown names.
SweepVar sweep_from_name(const std::string& s);
RunMode mode_from_name(const std::string& s);
MisMode mis_mode_from_name(const std::string& s);

struct ExperimentSpec {
    Scenario scenario;
    SweepVar var = SweepVar::VolumeBits;
    std::vector<double> values;  // non-empty, finite
    RunMode mode = RunMode::Nlc;
    MisMode mis_mode = MisMode::Augmented;
    int budget = 500;
    std::uint64_t seed = 1;
    NlcOptions nlc;
    LlcConfig llc;
    int jobs = 1;
};

// One row per (sweep value, scheme). Failures are recorded in the row and the
// sweep continues. wall_ms stays out of the CSV so reruns are byte-identical.
struct ResultRow {
    double sweep_value = 0.0;
    std::string scheme;  // "nlc" or "llc"
    bool ok = false;
    std::string error;

    double alpha = 0.0, rho = 0.0;
    double rate_cr_bps = 0.0, rate_pcr_bps = 0.0, rate_primary_bps = 0.0;
    double volume_bits = 0.0;  // first session's payload
    double control_T_s = 0.0;
    int budget = 0;

    double active_bps = 0.0, idle_bps = 0.0, expected_bps = 0.0;
    std::vector<std::uint8_t> theta;       // nlc only
    std::vector<double> completion_s;      // per session, -1 when never done
    int q_mis = 0, lp_rows = 0, lp_cols = 0, lp_solved = 0;
    long lp_iterations = 0;
    double wall_ms = 0.0;
};

// Returns the scenario with the sweep variable applied (Budget is handled by
// the runner, not the scenario).
Scenario apply_sweep(Scenario sc, SweepVar var, double value);

// Runs every (value, scheme) cell, up to spec.jobs at a time. Rows come back
// in deterministic order: values in listed order, nlc before llc.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

std::string experiment_csv(const ExperimentSpec& spec,
                           const std::vector<ResultRow>& rows);

// Run metadata (version, seed, spec echo, wall-clock) for the CSV sidecar.
std::string experiment_meta_json(const ExperimentSpec& spec,
                                 const std::vector<ResultRow>& rows);

// Writes the CSV at csv_path and the metadata at csv_path + ".meta.json".
// Throws ValidationError when rows is empty, std::runtime_error on I/O failure.
void emit_plotdata(const ExperimentSpec& spec, const std::vector<ResultRow>& rows,
                   const std::string& csv_path);

}  // namespace cchn

#endif
