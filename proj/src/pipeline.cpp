#include "pipeline.hpp"

#include <algorithm>

namespace cchn {

namespace {

Scenario strip_primary(const Scenario& sc) {
    Scenario idle = sc;
    idle.sessions.clear();
    idle.nodes.erase(std::remove_if(idle.nodes.begin(), idle.nodes.end(),
                                    [](const Node& n) {
                                        return n.kind == NodeKind::PuSource ||
                                               n.kind == NodeKind::PuRelay ||
                                               n.kind == NodeKind::PuDest;
                                    }),
                     idle.nodes.end());
    return idle;
}

}  // namespace

double idle_throughput(const Scenario& sc, MisMode mode, int budget,
                       std::uint64_t seed) {
    NlcInstance inst = build_nlc_instance(strip_primary(sc), mode, budget, seed);
    return solve_nlc(inst).best.objective_bps;
}

NlcRun run_nlc_pipeline(const Scenario& sc, const PipelineOptions& opts) {
    NlcRun run;
    run.instance = build_nlc_instance(sc, opts.mis_mode, opts.budget, opts.seed);
    run.result = solve_nlc(run.instance, opts.nlc);
    run.active_bps = run.result.best.objective_bps;
    run.idle_bps = idle_throughput(sc, opts.mis_mode, opts.budget, opts.seed);
    run.expected_bps = sc.rho * run.active_bps + (1.0 - sc.rho) * run.idle_bps;
    return run;
}

LlcRun run_llc_pipeline(const Scenario& sc, const PipelineOptions& opts) {
    LlcRun run;
    run.report = llc_evaluate(sc, opts.llc);
    run.active_bps = run.report.active_bps;
    run.idle_bps = idle_throughput(sc, opts.mis_mode, opts.budget, opts.seed);
    run.expected_bps = sc.rho * run.active_bps + (1.0 - sc.rho) * run.idle_bps;
    return run;
}

}  // namespace cchn
