#ifndef CCHN_PIPELINE_HPP
#define CCHN_PIPELINE_HPP

#include <cstdint>

#include "llc.hpp"
#include "nlc.hpp"

namespace cchn {

// Shared knobs for the end-to-end runs.
struct PipelineOptions {
    MisMode mis_mode = MisMode::Augmented;
    int budget = 500;
    std::uint64_t seed = 1;
    NlcOptions nlc;
    LlcConfig llc;
};

// Throughput of the secondary network alone (primary users silent): sessions
// and their nodes are stripped and the session-free schedule LP is solved
// with the same MIS search. Both schemes share this idle figure.
double idle_throughput(const Scenario& sc, MisMode mode, int budget,
                       std::uint64_t seed);

struct NlcRun {
    NlcInstance instance;
    NlcResult result;
    double active_bps = 0.0;    // optimum with primary users present
    double idle_bps = 0.0;      // secondary-only optimum
    double expected_bps = 0.0;  // rho * active + (1 - rho) * idle
};

NlcRun run_nlc_pipeline(const Scenario& sc, const PipelineOptions& opts);

struct LlcRun {
    LlcReport report;
    double active_bps = 0.0;
    double idle_bps = 0.0;
    double expected_bps = 0.0;
};

LlcRun run_llc_pipeline(const Scenario& sc, const PipelineOptions& opts);

}  // namespace cchn

#endif
