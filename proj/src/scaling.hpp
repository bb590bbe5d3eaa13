#ifndef CCHN_SCALING_HPP
#define CCHN_SCALING_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace cchn {

// Deployment profile for the asymptotic analysis: n users, n^b facilities
// (of which n^d are base stations) on a regular subsquare grid, harvested
// bandwidth W, and the constants c1..c3 left free by the load lemmas.
struct ScalingParams {
    double n = 1e4;
    double b = 0.8;
    double d = 0.4;
    double W = 1.0;
    double c1 = 1.0;
    double c2 = 1.0;
    double c3 = 1.0;
};

// Throws std::domain_error unless n >= 2, 0 < d <= b < 1, W > 0, c1..c3 > 0.
void validate(const ScalingParams& p);

// Rate function f(delta) = (1+delta)ln(1+delta) - delta; positive for delta > 0.
double chernoff_rate(double delta);

struct TailBound {
    double mu = 0.0;
    double delta = 0.0;
    double bound = 1.0;  // e^{-mu f(delta)}
};

// Upper bound on P(X >= (1+delta) mu) for a sum X of independent Bernoulli
// terms with mean mu. Throws std::domain_error when mu <= 0 or delta <= 0.
TailBound chernoff_bound(double mu, double delta);

struct TailEstimate {
    double mu = 0.0;         // eta * p
    double threshold = 0.0;  // (1+delta) mu
    double empirical = 0.0;  // fraction of trials with X >= threshold
    double analytic = 1.0;   // matching Chernoff bound
    int trials = 0;
    std::uint64_t seed = 0;
};

// Samples X = sum of eta Bernoulli(p) draws `trials` times and reports the
// empirical tail frequency next to the analytic bound.
// Throws std::domain_error unless eta >= 1, 0 < p < 1, delta > 0, trials >= 10000.
TailEstimate monte_carlo_tail(int eta, double p, double delta, int trials,
                              std::uint64_t seed);

// Total flow count that leaves its origin subsquare: min{n, 2n(1 - n^{d-b})}.
double inter_subsquare_flows(const ScalingParams& p);

// Per-base-station destination load bound: 2 * inter_subsquare_flows / n^d.
double dest_load_bound(const ScalingParams& p);

// Which branch of the piecewise analysis applies.
enum class ScalingRegime {
    AllBs,     // d = b: every facility is a base station, no relayed flows
    Mixed,     // b/2 < d < b
    SparseBs,  // d <= b/2
};

const char* regime_name(ScalingRegime r);

struct SubsquareBound {
    ScalingRegime regime = ScalingRegime::Mixed;
    double c_x = 0.0;       // relayed flows sharing the subsquare's column
    double c_y = 0.0;       // base stations sharing the subsquare's row
    double dest_load = 0.0; // per-BS destination load bound
    double bound = 0.0;     // c_x + dest_load * c_y
};

// Per-subsquare handled-flow bound; the c_y term vanishes when d = b.
SubsquareBound subsquare_flow_bound(const ScalingParams& p);

struct ThroughputClass {
    ScalingRegime regime = ScalingRegime::Mixed;
    double access = 0.0;    // step-1 term n^{b-1}
    double backhaul = 0.0;  // step-2 term (infinite when d = b)
    double value = 0.0;     // min of the applicable terms
    double exponent = 0.0;  // exponent of n in the binding term
    bool w_dependent = false;
    std::string binding;    // "access" or "backhaul"
};

// Piecewise per-user throughput class: d = b gives n^{b-1}; b/2 < d < b gives
// min{n^{b-1}, W n^{b/2-1}}; d <= b/2 gives min{n^{b-1}, W n^{d-1}}.
ThroughputClass throughput_class(const ScalingParams& p);

struct GridCoord {
    int x = 0;
    int y = 0;
};

inline bool operator==(GridCoord a, GridCoord b) { return a.x == b.x && a.y == b.y; }

// Two-segment route on a grid of subsquares: down src's column to dst's row,
// then along that row to dst. Includes both endpoints; src == dst gives a
// single-cell path. Throws std::domain_error on out-of-grid coordinates.
std::vector<GridCoord> grid_route(GridCoord src, GridCoord dst, int grid_w, int grid_h);

struct DestLoadReplay {
    int bs_count = 0;         // floor(n^d)
    int flows = 0;            // floor(inter_subsquare_flows)
    double max_load = 0.0;    // worst per-BS load over all trials
    double bound = 0.0;       // dest_load_bound with real-valued n
    double ok_fraction = 0.0; // trials whose max load stayed within the bound
    int trials = 0;
    std::uint64_t seed = 0;
};

// Assigns the inter-subsquare flows to base stations uniformly at random and
// checks the per-BS load against dest_load_bound. Counts use floor(n^d) and
// floor(varsigma); the bound keeps the real-valued formula.
DestLoadReplay dest_load_replay(const ScalingParams& p, int trials, std::uint64_t seed);

struct LoadReplay {
    int grid = 0;             // subsquares per side, floor(n^{b/2})
    int bs_count = 0;         // base-station subsquares placed
    int flows = 0;            // routed flows, floor(n)
    double max_load = 0.0;    // worst per-subsquare handled count over all trials
    double bound = 0.0;       // subsquare_flow_bound with real-valued n
    double ok_fraction = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
};

// Full route replay: users land uniformly in subsquares, non-BS subsquares
// forward their flows over grid_route to uniformly chosen base stations, and
// every visited subsquare counts the flow as handled. Base stations sit on a
// balanced lattice so row and column counts match the evenness assumption.
LoadReplay grid_load_replay(const ScalingParams& p, int trials, std::uint64_t seed);

struct ScalingPoint {
    ScalingParams params;
    SubsquareBound subsquare;
    double dest_bound = 0.0;
    ThroughputClass cls;
    bool has_mc = false;
    DestLoadReplay dest_mc;
    LoadReplay route_mc;
};

// Evaluates every analytic bound at p; trials > 0 adds both Monte Carlo replays.
ScalingPoint evaluate_scaling(const ScalingParams& p, int trials = 0,
                              std::uint64_t seed = 1);

// One CSV row per point: parameters, bounds, throughput class, and any
// Monte Carlo results (seed included so runs can be reproduced).
std::string scaling_csv(const std::vector<ScalingPoint>& points);

}  // namespace cchn

#endif
