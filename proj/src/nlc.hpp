#ifndef CCHN_NLC_HPP
#define CCHN_NLC_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conflict_graph.hpp"
#include "lp.hpp"
#include "mis_search.hpp"
#include "net_model.hpp"

namespace cchn {

enum class MisMode { Exact, Sio, Augmented };

// Control interval T: the length of the shortest primary session whose
// session vertex conflicts with any link incident to the base station.
struct ControlInterval {
    double T = 1.0;
    bool from_bs_conflict = false;      // T taken from a BS-conflicting session
    bool fallback_all_sessions = false; // none conflict: min over all sessions
    bool fallback_unit = false;         // no sessions at all: T = 1 s
    std::vector<int> bs_conflicting;    // session ids, ascending
};

ControlInterval select_control_interval(const Scenario& sc,
                                        const std::vector<Link>& links,
                                        const ConflictGraph& g);

// Everything that stays fixed while the selection vector theta varies:
// links, conflict graph, MIS collection, session order and breakpoints.
struct NlcInstance {
    Scenario sc;
    std::vector<Link> links;       // all links, including primary ones
    ConflictGraph graph;           // vertices 0..E-1 are the non-primary links
    MisCollection mis;
    ControlInterval control;
    std::vector<int> flows;        // edge router node ids, ascending
    std::vector<int> order;        // sorted position -> index into sc.sessions
    std::vector<double> t;         // breakpoints t_0..t_{P+1}
    AugmentedStats mis_stats;      // augmented mode only

    int num_links() const;         // non-primary links E
    int num_sessions() const { return static_cast<int>(order.size()); }
    int num_intervals() const { return static_cast<int>(order.size()) + 1; }
    const PrimarySession& session_at(int pos) const {
        return sc.sessions[static_cast<size_t>(order[pos])];
    }
    double delta(int m) const { return t[m + 1] - t[m]; }  // m = 0..P
};

NlcInstance build_nlc_instance(const Scenario& sc, MisMode mode, int budget,
                               uint64_t seed);

// LP for one fixed theta, in scaled rate units (bps / rate_scale).
// Variable order: Y per flow, f per (flow, link), f^p per (session, link),
// lambda per (interval, MIS). Pinned-to-zero variables keep [0,0] bounds.
struct NlcLpModel {
    LinearProgram lp;
    double rate_scale = 1.0;  // bps per LP flow unit
    // Fixed-theta builds set this when a selected session has no MIS-covered
    // in-link or out-link, so its volume can never move and the LP is
    // infeasible without solving.
    bool trivially_infeasible = false;
    int E = 0, L = 0, P = 0, M = 0, Q = 0;
    int vy0 = 0, vf0 = 0, vfp0 = 0, vlam0 = 0, vtheta0 = -1;

    int y_var(int l) const { return vy0 + l; }
    int f_var(int l, int e) const { return vf0 + l * E + e; }
    int fp_var(int p, int e) const { return vfp0 + p * E + e; }
    int lam_var(int m, int q) const { return vlam0 + m * Q + q; }
    int theta_var(int p) const { return vtheta0 + p; }  // relaxation only
};

NlcLpModel build_nlc_lp(const NlcInstance& inst, const std::vector<uint8_t>& theta);

// Relaxed model for branch and bound: theta are [0,1] LP variables, entries
// of `fixed` are -1 (free), 0 or 1.
NlcLpModel build_nlc_lp_relaxed(const NlcInstance& inst, const std::vector<int>& fixed);

struct NlcThetaSolution {
    std::vector<uint8_t> theta;  // per sorted position
    double objective_bps = 0.0;
    std::vector<double> upsilon_bps;  // per flow
    std::vector<double> f_bps;        // [l * E + e]
    std::vector<double> fp_bps;       // [p * E + e]
    std::vector<double> lam;          // [m * Q + q], shares of T
    std::vector<std::optional<double>> completion_s;  // per sorted position
    long iterations = 0;
    int rows = 0, cols = 0;
};

NlcThetaSolution decode_nlc_solution(const NlcInstance& inst, const NlcLpModel& model,
                                     const std::vector<uint8_t>& theta,
                                     const LpSolution& sol);

struct NlcOptions {
    bool branch_and_bound = false;  // exhaustive enumeration otherwise
    int theta_guard = 12;           // max session count for enumeration
    double tie_rel_tol = 1e-7;      // objective improvements below this tie
    bool verify = true;             // replay the full constraint set
    double verify_tol = 1e-6;
    LpOptions lp;
};

struct NlcResult {
    NlcThetaSolution best;
    int lp_solved = 0;
    long lp_iterations = 0;
    uint64_t theta_space = 1;  // 2^P
};

// Maximize total secondary throughput over all theta (exhaustive enumeration
// in ascending lexicographic order, position 0 as the most significant bit;
// ties keep the lexicographically smallest theta). The branch-and-bound path
// returns the same objective; its theta may differ among exact ties.
NlcResult solve_nlc(const NlcInstance& inst, const NlcOptions& opt = {});

struct NlcCheck {
    bool ok = true;
    double max_violation = 0.0;
    std::string detail;
};

// Independent replay of the complete constraint set, including rows the
// builder dropped and variables it pinned. Tolerance applies to residuals
// in scaled units.
NlcCheck verify_nlc_solution(const NlcInstance& inst, const std::vector<uint8_t>& theta,
                             const NlcThetaSolution& s, double tol);

// Smallest breakpoint t_j by which the cumulative scheduled rate into the
// secondary network covers each selected session's volume; empty for
// unselected sessions.
std::vector<std::optional<double>> completion_times(const NlcInstance& inst,
                                                    const NlcThetaSolution& s);

}  // namespace cchn

#endif
