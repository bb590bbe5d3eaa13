#include "scaling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

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

// 53-bit uniform in [0, 1).
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void validate(const ScalingParams& p) {
    if (!(p.n >= 2.0))
        throw std::domain_error(strf("scaling: n must be >= 2, got %.10g", p.n));
    if (!(p.d > 0.0 && p.d <= p.b && p.b < 1.0))
        throw std::domain_error(
            strf("scaling: need 0 < d <= b < 1, got d=%.10g b=%.10g", p.d, p.b));
    if (!(p.W > 0.0))
        throw std::domain_error(strf("scaling: W must be > 0, got %.10g", p.W));
    if (!(p.c1 > 0.0 && p.c2 > 0.0 && p.c3 > 0.0))
        throw std::domain_error("scaling: c1, c2, c3 must be > 0");
}

double chernoff_rate(double delta) {
    if (!(delta >= 0.0))
        throw std::domain_error(strf("chernoff_rate: delta must be >= 0, got %.10g", delta));
    return (1.0 + delta) * std::log1p(delta) - delta;
}

TailBound chernoff_bound(double mu, double delta) {
    if (!(mu > 0.0))
        throw std::domain_error(strf("chernoff_bound: mu must be > 0, got %.10g", mu));
    if (!(delta > 0.0))
        throw std::domain_error(strf("chernoff_bound: delta must be > 0, got %.10g", delta));
    TailBound tb;
    tb.mu = mu;
    tb.delta = delta;
    tb.bound = std::exp(-mu * chernoff_rate(delta));
    return tb;
}

TailEstimate monte_carlo_tail(int eta, double p, double delta, int trials,
                              std::uint64_t seed) {
    if (eta < 1)
        throw std::domain_error(strf("monte_carlo_tail: eta must be >= 1, got %d", eta));
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error(strf("monte_carlo_tail: p must be in (0,1), got %.10g", p));
    if (!(delta > 0.0))
        throw std::domain_error(strf("monte_carlo_tail: delta must be > 0, got %.10g", delta));
    if (trials < 10000)
        throw std::domain_error(strf("monte_carlo_tail: trials must be >= 10000, got %d", trials));

    TailEstimate est;
    est.mu = static_cast<double>(eta) * p;
    est.threshold = (1.0 + delta) * est.mu;
    est.analytic = chernoff_bound(est.mu, delta).bound;
    est.trials = trials;
    est.seed = seed;

    std::mt19937_64 rng(seed);
    long hits = 0;
    for (int t = 0; t < trials; ++t) {
        int x = 0;
        for (int i = 0; i < eta; ++i)
            if (uniform01(rng) < p) ++x;
        if (static_cast<double>(x) >= est.threshold - 1e-9) ++hits;
    }
    est.empirical = static_cast<double>(hits) / static_cast<double>(trials);
    return est;
}

double inter_subsquare_flows(const ScalingParams& p) {
    validate(p);
    return std::min(p.n, 2.0 * p.n * (1.0 - std::pow(p.n, p.d - p.b)));
}

double dest_load_bound(const ScalingParams& p) {
    return 2.0 * inter_subsquare_flows(p) / std::pow(p.n, p.d);
}

const char* regime_name(ScalingRegime r) {
    switch (r) {
        case ScalingRegime::AllBs: return "all-bs";
        case ScalingRegime::Mixed: return "mixed";
        case ScalingRegime::SparseBs: return "sparse-bs";
    }
    return "?";
}

namespace {

ScalingRegime classify(const ScalingParams& p) {
    if (p.d == p.b) return ScalingRegime::AllBs;
    if (p.d > p.b / 2.0) return ScalingRegime::Mixed;
    return ScalingRegime::SparseBs;
}

}  // namespace

SubsquareBound subsquare_flow_bound(const ScalingParams& p) {
    validate(p);
    SubsquareBound sb;
    sb.regime = classify(p);
    double n = p.n;
    double cap = 2.0 * std::pow(n, 1.0 - p.b / 2.0);
    if (sb.regime == ScalingRegime::SparseBs) {
        sb.c_x = std::min(
            2.0 * std::pow(n, 1.5 - p.b) - 2.0 * p.c2 * std::pow(n, 1.0 - p.b), cap);
        sb.c_y = p.c1;
    } else {
        // d = b uses the dense-BS geometry: every subsquare row holds n^{d-b/2} BSs.
        sb.c_x = std::min(
            2.0 * std::pow(n, 1.5 - p.b) - 2.0 * std::pow(n, 1.0 + p.d - 1.5 * p.b), cap);
        sb.c_y = std::pow(n, p.d - p.b / 2.0);
    }
    sb.dest_load = dest_load_bound(p);
    sb.bound = sb.c_x + sb.dest_load * sb.c_y;
    return sb;
}

ThroughputClass throughput_class(const ScalingParams& p) {
    validate(p);
    ThroughputClass tc;
    tc.regime = classify(p);
    tc.access = std::pow(p.n, p.b - 1.0);
    switch (tc.regime) {
        case ScalingRegime::AllBs:
            tc.backhaul = std::numeric_limits<double>::infinity();
            break;
        case ScalingRegime::Mixed:
            tc.backhaul = p.W * std::pow(p.n, p.b / 2.0 - 1.0);
            break;
        case ScalingRegime::SparseBs:
            tc.backhaul = p.W * std::pow(p.n, p.d - 1.0);
            break;
    }
    // Ties report the access term; only a strictly smaller backhaul binds.
    if (tc.backhaul < tc.access) {
        tc.value = tc.backhaul;
        tc.binding = "backhaul";
        tc.w_dependent = true;
        tc.exponent = tc.regime == ScalingRegime::Mixed ? p.b / 2.0 - 1.0 : p.d - 1.0;
    } else {
        tc.value = tc.access;
        tc.binding = "access";
        tc.w_dependent = false;
        tc.exponent = p.b - 1.0;
    }
    return tc;
}

std::vector<GridCoord> grid_route(GridCoord src, GridCoord dst, int grid_w, int grid_h) {
    if (grid_w < 1 || grid_h < 1)
        throw std::domain_error(strf("grid_route: bad grid %dx%d", grid_w, grid_h));
    for (GridCoord c : {src, dst})
        if (c.x < 0 || c.x >= grid_w || c.y < 0 || c.y >= grid_h)
            throw std::domain_error(
                strf("grid_route: (%d,%d) outside %dx%d grid", c.x, c.y, grid_w, grid_h));

    std::vector<GridCoord> path;
    path.reserve(static_cast<std::size_t>(std::abs(dst.y - src.y)) +
                 static_cast<std::size_t>(std::abs(dst.x - src.x)) + 1);
    GridCoord at = src;
    path.push_back(at);
    int step = dst.y > at.y ? 1 : -1;
    while (at.y != dst.y) {
        at.y += step;
        path.push_back(at);
    }
    step = dst.x > at.x ? 1 : -1;
    while (at.x != dst.x) {
        at.x += step;
        path.push_back(at);
    }
    return path;
}

DestLoadReplay dest_load_replay(const ScalingParams& p, int trials, std::uint64_t seed) {
    validate(p);
    if (trials < 1)
        throw std::domain_error(strf("dest_load_replay: trials must be >= 1, got %d", trials));

    DestLoadReplay rep;
    rep.bs_count = std::max(1, static_cast<int>(std::floor(std::pow(p.n, p.d))));
    rep.flows = static_cast<int>(std::floor(inter_subsquare_flows(p)));
    rep.bound = dest_load_bound(p);
    rep.trials = trials;
    rep.seed = seed;

    std::mt19937_64 rng(seed);
    std::vector<int> load(static_cast<std::size_t>(rep.bs_count));
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
        std::fill(load.begin(), load.end(), 0);
        for (int i = 0; i < rep.flows; ++i) {
            auto idx = static_cast<std::size_t>(uniform01(rng) * rep.bs_count);
            if (idx >= load.size()) idx = load.size() - 1;
            ++load[idx];
        }
        int worst = 0;
        for (int v : load) worst = std::max(worst, v);
        rep.max_load = std::max(rep.max_load, static_cast<double>(worst));
        if (static_cast<double>(worst) <= rep.bound + 1e-9) ++ok;
    }
    rep.ok_fraction = static_cast<double>(ok) / static_cast<double>(trials);
    return rep;
}

LoadReplay grid_load_replay(const ScalingParams& p, int trials, std::uint64_t seed) {
    validate(p);
    if (trials < 1)
        throw std::domain_error(strf("grid_load_replay: trials must be >= 1, got %d", trials));

    LoadReplay rep;
    rep.grid = std::max(1, static_cast<int>(std::floor(std::pow(p.n, p.b / 2.0))));
    int g = rep.grid;
    int cells = g * g;
    int want_bs = std::max(1, static_cast<int>(std::floor(std::pow(p.n, p.d))));
    want_bs = std::min(want_bs, cells);
    rep.flows = static_cast<int>(std::floor(p.n));
    rep.bound = subsquare_flow_bound(p).bound;
    rep.trials = trials;
    rep.seed = seed;

    // Balanced lattice: with at least one BS per row, shift a stride pattern
    // diagonally so every row and every column holds nearly the same count;
    // with fewer BSs than rows, space them out along the diagonal.
    std::vector<char> is_bs(static_cast<std::size_t>(cells), 0);
    std::vector<int> bs_cells;
    if (want_bs >= g) {
        int per_row = want_bs / g;
        int stride = std::max(1, g / per_row);
        for (int y = 0; y < g; ++y)
            for (int x = y % stride; x < g; x += stride) {
                is_bs[static_cast<std::size_t>(y) * g + x] = 1;
                bs_cells.push_back(y * g + x);
            }
    } else {
        for (int i = 0; i < want_bs; ++i) {
            int t = static_cast<int>(static_cast<double>(i) * g / want_bs);
            is_bs[static_cast<std::size_t>(t) * g + t] = 1;
            bs_cells.push_back(t * g + t);
        }
    }
    rep.bs_count = static_cast<int>(bs_cells.size());

    std::mt19937_64 rng(seed);
    std::vector<int> load(static_cast<std::size_t>(cells));
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
        std::fill(load.begin(), load.end(), 0);
        for (int i = 0; i < rep.flows; ++i) {
            auto cell = static_cast<std::size_t>(uniform01(rng) * cells);
            if (cell >= load.size()) cell = load.size() - 1;
            if (is_bs[cell]) {
                ++load[cell];
                continue;
            }
            auto pick = static_cast<std::size_t>(uniform01(rng) * bs_cells.size());
            if (pick >= bs_cells.size()) pick = bs_cells.size() - 1;
            int dst = bs_cells[pick];
            GridCoord s{static_cast<int>(cell) % g, static_cast<int>(cell) / g};
            GridCoord e{dst % g, dst / g};
            for (GridCoord c : grid_route(s, e, g, g))
                ++load[static_cast<std::size_t>(c.y) * g + c.x];
        }
        int worst = 0;
        for (int v : load) worst = std::max(worst, v);
        rep.max_load = std::max(rep.max_load, static_cast<double>(worst));
        if (static_cast<double>(worst) <= rep.bound + 1e-9) ++ok;
    }
    rep.ok_fraction = static_cast<double>(ok) / static_cast<double>(trials);
    return rep;
}

ScalingPoint evaluate_scaling(const ScalingParams& p, int trials, std::uint64_t seed) {
    ScalingPoint pt;
    pt.params = p;
    pt.subsquare = subsquare_flow_bound(p);
    pt.dest_bound = dest_load_bound(p);
    pt.cls = throughput_class(p);
    if (trials > 0) {
        pt.has_mc = true;
        pt.dest_mc = dest_load_replay(p, trials, seed);
        pt.route_mc = grid_load_replay(p, trials, seed ^ 0x9e3779b97f4a7c15ULL);
    }
    return pt;
}

std::string scaling_csv(const std::vector<ScalingPoint>& points) {
    std::string out =
        "n,b,d,W,c1,c2,c3,regime,c_x,c_y,dest_load_bound,subsquare_bound,"
        "access,backhaul,throughput,exponent,binding,w_dependent,"
        "mc_trials,mc_seed,dest_max,dest_ok,route_max,route_ok\n";
    for (const ScalingPoint& pt : points) {
        const ScalingParams& p = pt.params;
        out += strf("%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%s,", p.n, p.b, p.d,
                    p.W, p.c1, p.c2, p.c3, regime_name(pt.subsquare.regime));
        out += strf("%.10g,%.10g,%.10g,%.10g,", pt.subsquare.c_x, pt.subsquare.c_y,
                    pt.dest_bound, pt.subsquare.bound);
        out += strf("%.10g,%.10g,%.10g,%.10g,%s,%d,", pt.cls.access, pt.cls.backhaul,
                    pt.cls.value, pt.cls.exponent, pt.cls.binding.c_str(),
                    pt.cls.w_dependent ? 1 : 0);
        if (pt.has_mc) {
            out += strf("%d,%llu,%.10g,%.10g,%.10g,%.10g\n", pt.dest_mc.trials,
                        static_cast<unsigned long long>(pt.dest_mc.seed),
                        pt.dest_mc.max_load, pt.dest_mc.ok_fraction,
                        pt.route_mc.max_load, pt.route_mc.ok_fraction);
        } else {
            out += "0,,,,,\n";
        }
    }
    return out;
}

}  // namespace cchn
