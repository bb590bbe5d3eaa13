#include "lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

namespace cchn {

int LinearProgram::add_var(std::string name, double lb, double ub) {
    names.push_back(std::move(name));
    lo.push_back(lb);
    hi.push_back(ub);
    obj.push_back(0.0);
    return static_cast<int>(lo.size()) - 1;
}

int LinearProgram::add_row(Rel rel, double rhs) {
    rows.push_back({rel, rhs, {}});
    return static_cast<int>(rows.size()) - 1;
}

void LinearProgram::add_term(int row, int var, double coef) {
    rows[row].terms.emplace_back(var, coef);
}

namespace {

// Nearest power of two, exact under scaling so equilibration costs no bits.
double pow2_scale(double magnitude) {
    if (magnitude <= 0.0 || !std::isfinite(magnitude)) return 1.0;
    int e = 0;
    std::frexp(magnitude, &e);
    return std::ldexp(1.0, 1 - e);
}

struct Simplex {
    // Problem in internal (minimization) form.
    int m = 0;               // rows
    int ncols = 0;           // structural + logical + artificial
    int nstruct = 0;
    std::vector<std::vector<std::pair<int, double>>> cols;
    std::vector<double> lo, hi, cost, phase1_cost, b;
    std::vector<int> basis;          // column per row
    std::vector<int8_t> in_basis;    // -1 not, else row
    std::vector<uint8_t> at_upper;
    std::vector<double> xb;          // basic values
    std::vector<double> binv;        // column-major: binv[c*m + i] = B^-1[i][c]
    long iterations = 0;
    // Degenerate-stall escalation: 0 Dantzig, 1 randomized improving, 2 Bland.
    // Any non-degenerate step drops back to 0, so Bland never outlives a stall.
    int stall_level = 0;
    int degenerate_run = 0;
    std::mt19937_64 rng{0x9e3779b97f4a7c15ull};
    double tol = 1e-9;
    long max_iterations = 0;

    double nonbasic_value(int j) const {
        if (lo[j] == hi[j]) return lo[j];
        if (at_upper[j]) return hi[j];
        return std::isfinite(lo[j]) ? lo[j] : (std::isfinite(hi[j]) ? hi[j] : 0.0);
    }

    void refactor() {
        std::vector<double> mtx(static_cast<size_t>(m) * m, 0.0);
        for (int c = 0; c < m; ++c)
            for (auto [r, a] : cols[basis[c]]) mtx[static_cast<size_t>(c) * m + r] = a;
        // Gauss-Jordan with partial pivoting into binv (column-major).
        binv.assign(static_cast<size_t>(m) * m, 0.0);
        for (int i = 0; i < m; ++i) binv[static_cast<size_t>(i) * m + i] = 1.0;
        std::vector<int> perm(m);
        for (int i = 0; i < m; ++i) perm[i] = i;
        for (int k = 0; k < m; ++k) {
            int piv = -1;
            double best = 0.0;
            for (int i = k; i < m; ++i) {
                double v = std::fabs(mtx[static_cast<size_t>(k) * m + i]);
                if (v > best) {
                    best = v;
                    piv = i;
                }
            }
            if (piv < 0 || best < 1e-12) throw SolverError("simplex basis is singular");
            if (piv != k) {
                for (int c = 0; c < m; ++c) {
                    std::swap(mtx[static_cast<size_t>(c) * m + piv],
                              mtx[static_cast<size_t>(c) * m + k]);
                    std::swap(binv[static_cast<size_t>(c) * m + piv],
                              binv[static_cast<size_t>(c) * m + k]);
                }
            }
            double inv = 1.0 / mtx[static_cast<size_t>(k) * m + k];
            for (int c = 0; c < m; ++c) {
                mtx[static_cast<size_t>(c) * m + k] *= inv;
                binv[static_cast<size_t>(c) * m + k] *= inv;
            }
            for (int i = 0; i < m; ++i) {
                if (i == k) continue;
                double f = mtx[static_cast<size_t>(k) * m + i];
                if (f == 0.0) continue;
                for (int c = 0; c < m; ++c) {
                    mtx[static_cast<size_t>(c) * m + i] -=
                        f * mtx[static_cast<size_t>(c) * m + k];
                    binv[static_cast<size_t>(c) * m + i] -=
                        f * binv[static_cast<size_t>(c) * m + k];
                }
            }
        }
        recompute_xb();
    }

    void recompute_xb() {
        std::vector<double> rhs = b;
        for (int j = 0; j < ncols; ++j) {
            if (in_basis[j] >= 0) continue;
            double v = nonbasic_value(j);
            if (v == 0.0) continue;
            for (auto [r, a] : cols[j]) rhs[r] -= a * v;
        }
        xb.assign(m, 0.0);
        for (int r = 0; r < m; ++r) {
            double v = rhs[r];
            if (v == 0.0) continue;
            const double* col = &binv[static_cast<size_t>(r) * m];
            for (int i = 0; i < m; ++i) xb[i] += col[i] * v;
        }
    }

    void ftran(int j, std::vector<double>& w) const {
        std::fill(w.begin(), w.end(), 0.0);
        for (auto [r, a] : cols[j]) {
            const double* col = &binv[static_cast<size_t>(r) * m];
            for (int i = 0; i < m; ++i) w[i] += col[i] * a;
        }
    }

    void compute_y(const std::vector<double>& cc, std::vector<double>& y) const {
        std::fill(y.begin(), y.end(), 0.0);
        for (int k = 0; k < m; ++k) {
            double ck = cc[basis[k]];
            if (ck == 0.0) continue;
            for (int i = 0; i < m; ++i) y[i] += ck * binv[static_cast<size_t>(i) * m + k];
        }
    }

    double reduced_cost(const std::vector<double>& cc, const std::vector<double>& y,
                        int j) const {
        double d = cc[j];
        for (auto [r, a] : cols[j]) d -= y[r] * a;
        return d;
    }

    // Runs one phase to optimality of cost vector cc.
    // Returns Optimal or Unbounded.
    LpStatus run(const std::vector<double>& cc) {
        std::vector<double> y(m), w(m), alpha_row(m);
        std::vector<double> gamma(ncols, 1.0);  // Devex reference weights
        std::vector<uint8_t> banned(ncols, 0);
        int since_refactor = 0;
        const double dtol = 1e-9;
        for (;;) {
            if (iterations > max_iterations)
                throw SolverError("simplex iteration cap exceeded");
            compute_y(cc, y);
            int enter = -1, dir = 0;
            double best = 0.0;
            std::vector<std::pair<int, int>> pool;  // (col, dir) for randomized stage
            for (int j = 0; j < ncols; ++j) {
                if (in_basis[j] >= 0 || lo[j] == hi[j] || banned[j]) continue;
                double d = reduced_cost(cc, y, j);
                bool free_var = std::isinf(lo[j]) && std::isinf(hi[j]);
                // A (-inf, hi] column rests at hi whatever its flag says.
                bool upper = std::isfinite(hi[j]) && (at_upper[j] || std::isinf(lo[j]));
                int cand_dir = 0;
                // candidate directions: increase when sitting at/below lower,
                // decrease when sitting at upper, either way when free
                if (free_var) {
                    if (std::fabs(d) > dtol) cand_dir = d < 0 ? 1 : -1;
                } else if (upper) {
                    if (d > dtol) cand_dir = -1;
                } else {
                    if (d < -dtol) cand_dir = 1;
                }
                if (cand_dir == 0) continue;
                if (stall_level >= 2) {
                    enter = j;
                    dir = cand_dir;
                    break;
                }
                if (stall_level == 1) {
                    pool.emplace_back(j, cand_dir);
                    continue;
                }
                double score = d * d / gamma[j];  // Devex pricing
                if (score > best) {
                    best = score;
                    enter = j;
                    dir = cand_dir;
                }
            }
            if (stall_level == 1 && !pool.empty()) {
                auto pick = pool[rng() % pool.size()];
                enter = pick.first;
                dir = pick.second;
            }
            if (enter < 0) {
                bool had_banned = std::any_of(banned.begin(), banned.end(),
                                              [](uint8_t v) { return v != 0; });
                if (had_banned) throw SolverError("simplex: no numerically safe pivot");
                return LpStatus::Optimal;
            }

            ftran(enter, w);
            double ve = nonbasic_value(enter);
            double span = hi[enter] - lo[enter];
            double tmax = std::isfinite(span) ? span : kInf;
            int leave_row = -1;
            double leave_w = 0.0;
            const double piv_eps = 1e-9;
            for (int k = 0; k < m; ++k) {
                double wk = dir * w[k];
                int bk = basis[k];
                double t;
                if (wk > piv_eps) {
                    if (!std::isfinite(lo[bk])) continue;
                    t = (xb[k] - lo[bk]) / wk;
                } else if (wk < -piv_eps) {
                    if (!std::isfinite(hi[bk])) continue;
                    t = (hi[bk] - xb[k]) / (-wk);
                } else {
                    continue;
                }
                if (t < 0.0) t = 0.0;
                if (t > tmax + 1e-12) continue;
                bool strictly_better = t < tmax - 1e-12 || leave_row < 0;
                bool wins_tie = !strictly_better &&
                                (stall_level >= 2 ? basis[k] < basis[leave_row]
                                                  : std::fabs(w[k]) > std::fabs(leave_w) + 1e-12);
                if (strictly_better || wins_tie) {
                    leave_row = k;
                    leave_w = w[k];
                }
                if (t < tmax) tmax = t;
            }

            if (!std::isfinite(tmax)) return LpStatus::Unbounded;

            ++iterations;
            if (leave_row < 0 || (std::isfinite(span) && span <= tmax)) {
                // Bound flip: the entering variable crosses to its other bound.
                double t = span;
                for (int k = 0; k < m; ++k) xb[k] -= dir * t * w[k];
                at_upper[enter] ^= 1;
                degenerate_run = t <= 1e-10 ? degenerate_run + 1 : 0;
            } else {
                if (std::fabs(leave_w) < 1e-7) {
                    // Tiny pivot: try once with a fresh inverse, then skip the column.
                    if (since_refactor > 0) {
                        refactor();
                        since_refactor = 0;
                    } else {
                        banned[enter] = 1;
                    }
                    continue;
                }
                // Devex update against the outgoing inverse's pivot row.
                double gq = std::max(gamma[enter], 1.0);
                double piv2 = leave_w * leave_w;
                for (int c = 0; c < m; ++c)
                    alpha_row[c] = binv[static_cast<size_t>(c) * m + leave_row];
                double gmax = 0.0;
                for (int j = 0; j < ncols; ++j) {
                    if (in_basis[j] >= 0 || j == enter || lo[j] == hi[j]) continue;
                    double aj = 0.0;
                    for (auto [r2, a2] : cols[j]) aj += alpha_row[r2] * a2;
                    if (aj == 0.0) continue;
                    double cand = aj * aj / piv2 * gq;
                    if (cand > gamma[j]) gamma[j] = cand;
                    if (gamma[j] > gmax) gmax = gamma[j];
                }
                gamma[basis[leave_row]] = std::max(gq / piv2, 1.0);
                gamma[enter] = 1.0;
                if (gmax > 1e8) std::fill(gamma.begin(), gamma.end(), 1.0);
                double t = tmax;
                for (int k = 0; k < m; ++k) xb[k] -= dir * t * w[k];
                int leave = basis[leave_row];
                at_upper[leave] = dir * leave_w < 0 ? 1 : 0;
                in_basis[leave] = -1;
                basis[leave_row] = enter;
                in_basis[enter] = 1;
                xb[leave_row] = ve + dir * t;
                at_upper[enter] = 0;
                // Pivot update of the explicit inverse.
                double inv = 1.0 / leave_w;
                for (int c = 0; c < m; ++c) {
                    double* col = &binv[static_cast<size_t>(c) * m];
                    double pr = col[leave_row] * inv;
                    if (pr == 0.0) continue;
                    col[leave_row] = pr;
                    for (int i = 0; i < m; ++i)
                        if (i != leave_row) col[i] -= w[i] * pr;
                }
                std::fill(banned.begin(), banned.end(), 0);
                degenerate_run = t <= 1e-10 ? degenerate_run + 1 : 0;
                if (++since_refactor >= 700) {
                    refactor();
                    since_refactor = 0;
                }
            }
            if (degenerate_run == 0)
                stall_level = 0;
            else if (degenerate_run > 20000)
                stall_level = 2;
            else if (degenerate_run > 60)
                stall_level = 1;
        }
    }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opt) {
    const int n = lp.num_vars();
    const int m = lp.num_rows();
    for (int j = 0; j < n; ++j)
        if (lp.lo[j] > lp.hi[j]) return {LpStatus::Infeasible, 0.0, {}, {}, {}, 0};

    // Column assembly with duplicate-term accumulation; free variables are
    // split internally into a difference of two nonnegative columns.
    std::vector<std::map<int, double>> colmap(n);
    for (int r = 0; r < m; ++r)
        for (auto [v, c] : lp.rows[r].terms) colmap[v][r] += c;

    std::vector<int> split(n, -1);
    int nstruct = n;
    for (int j = 0; j < n; ++j)
        if (std::isinf(lp.lo[j]) && std::isinf(lp.hi[j])) split[j] = nstruct++;

    // Equilibration scales, powers of two.
    std::vector<double> rscale(m, 1.0), cscale(n, 1.0);
    if (opt.scale) {
        for (int r = 0; r < m; ++r) {
            double mx = 0.0;
            for (auto [v, c] : lp.rows[r].terms) mx = std::max(mx, std::fabs(c));
            rscale[r] = pow2_scale(mx);
        }
        for (int j = 0; j < n; ++j) {
            double mx = 0.0;
            for (auto [r, c] : colmap[j]) mx = std::max(mx, std::fabs(c) * rscale[r]);
            cscale[j] = pow2_scale(mx);
        }
    }

    Simplex sx;
    sx.m = m;
    sx.nstruct = nstruct;
    sx.tol = opt.tol;
    sx.cols.resize(nstruct);
    sx.lo.resize(nstruct);
    sx.hi.resize(nstruct);
    sx.cost.assign(nstruct, 0.0);
    for (int j = 0; j < n; ++j) {
        for (auto [r, c] : colmap[j]) sx.cols[j].emplace_back(r, c * rscale[r] * cscale[j]);
        sx.lo[j] = lp.lo[j] / cscale[j];
        sx.hi[j] = lp.hi[j] / cscale[j];
        sx.cost[j] = -lp.obj[j] * cscale[j];  // maximize -> minimize
        if (split[j] >= 0) {
            int k = split[j];
            for (auto [r, c] : sx.cols[j]) sx.cols[k].emplace_back(r, -c);
            sx.lo[j] = 0.0;
            sx.hi[j] = kInf;
            sx.lo[k] = 0.0;
            sx.hi[k] = kInf;
            sx.cost[k] = -sx.cost[j];
        }
    }
    sx.b.resize(m);
    for (int r = 0; r < m; ++r) sx.b[r] = lp.rows[r].rhs * rscale[r];

    // Logical column per row.
    std::vector<int> logical(m);
    for (int r = 0; r < m; ++r) {
        int j = static_cast<int>(sx.cols.size());
        logical[r] = j;
        sx.cols.push_back({{r, 1.0}});
        switch (lp.rows[r].rel) {
            case Rel::Le:
                sx.lo.push_back(0.0);
                sx.hi.push_back(kInf);
                break;
            case Rel::Ge:
                sx.lo.push_back(-kInf);
                sx.hi.push_back(0.0);
                break;
            case Rel::Eq:
                sx.lo.push_back(0.0);
                sx.hi.push_back(0.0);
                break;
        }
        sx.cost.push_back(0.0);
    }

    sx.ncols = static_cast<int>(sx.cols.size());
    sx.at_upper.assign(sx.ncols, 0);
    for (int j = 0; j < sx.ncols; ++j)
        if (!std::isfinite(sx.lo[j]) && std::isfinite(sx.hi[j])) sx.at_upper[j] = 1;
    sx.in_basis.assign(sx.ncols, -1);

    // Initial basis: the row's logical when its bounds admit the residual,
    // otherwise a fresh artificial.
    std::vector<double> residual = sx.b;
    for (int j = 0; j < sx.ncols; ++j) {
        double v = sx.nonbasic_value(j);
        if (v == 0.0) continue;
        for (auto [r, a] : sx.cols[j]) residual[r] -= a * v;
    }
    sx.basis.assign(m, -1);
    std::vector<int> artificials;
    for (int r = 0; r < m; ++r) {
        double res = residual[r];
        int lg = logical[r];
        bool fits = res >= sx.lo[lg] - 1e-12 && res <= sx.hi[lg] + 1e-12;
        if (fits) {
            sx.basis[r] = lg;
        } else {
            int j = static_cast<int>(sx.cols.size());
            sx.cols.push_back({{r, res >= 0 ? 1.0 : -1.0}});
            sx.lo.push_back(0.0);
            sx.hi.push_back(kInf);
            sx.cost.push_back(0.0);
            sx.basis[r] = j;
            artificials.push_back(j);
        }
    }
    sx.ncols = static_cast<int>(sx.cols.size());
    sx.at_upper.resize(sx.ncols, 0);
    sx.in_basis.assign(sx.ncols, -1);
    for (int r = 0; r < m; ++r) sx.in_basis[sx.basis[r]] = 1;

    sx.max_iterations =
        opt.max_iterations > 0 ? opt.max_iterations : 200L * (m + sx.ncols) + 20000;

    sx.binv.assign(static_cast<size_t>(m) * m, 0.0);
    for (int r = 0; r < m; ++r) {
        double diag = sx.cols[sx.basis[r]][0].second;
        sx.binv[static_cast<size_t>(r) * m + r] = 1.0 / diag;
    }
    sx.recompute_xb();

    double bnorm = 1.0;
    for (double v : sx.b) bnorm = std::max(bnorm, std::fabs(v));

    if (!artificials.empty()) {
        // Distinct artificial costs break phase-1 objective ties; the
        // feasibility verdict below reads values, not this objective.
        std::vector<double> p1(sx.ncols, 0.0);
        for (size_t i = 0; i < artificials.size(); ++i)
            p1[artificials[i]] = 1.0 + 1e-5 * ((i * 2654435761u % 8191) / 8191.0);
        LpStatus st = sx.run(p1);
        if (st == LpStatus::Unbounded) throw SolverError("phase 1 reported unbounded");
        sx.refactor();
        double infeas = 0.0;
        for (int r = 0; r < m; ++r) {
            int bj = sx.basis[r];
            if (p1[bj] != 0.0) infeas += std::fabs(sx.xb[r]);
        }
        for (int j = 0; j < sx.ncols; ++j)
            if (p1[j] != 0.0 && sx.in_basis[j] < 0) infeas += std::fabs(sx.nonbasic_value(j));
        if (infeas > 1e-8 * bnorm)
            return {LpStatus::Infeasible, 0.0, {}, {}, {}, sx.iterations};
        for (int a : artificials) {
            sx.lo[a] = 0.0;
            sx.hi[a] = 0.0;
        }
        sx.stall_level = 0;
        sx.degenerate_run = 0;
    }

    sx.cost.resize(sx.ncols, 0.0);
    LpStatus st = sx.run(sx.cost);
    if (st == LpStatus::Unbounded) return {LpStatus::Unbounded, 0.0, {}, {}, {}, sx.iterations};
    sx.refactor();

    LpSolution sol;
    sol.status = LpStatus::Optimal;
    sol.iterations = sx.iterations;
    sol.x.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double v = sx.in_basis[j] >= 0 ? 0.0 : sx.nonbasic_value(j);
        if (split[j] >= 0) {
            int k = split[j];
            double v2 = sx.in_basis[k] >= 0 ? 0.0 : sx.nonbasic_value(k);
            v -= v2;
        }
        sol.x[j] = v;
    }
    for (int r = 0; r < m; ++r) {
        int bj = sx.basis[r];
        if (bj < n)
            sol.x[bj] += sx.xb[r];
        else {
            for (int j = 0; j < n; ++j)
                if (split[j] == bj) sol.x[j] -= sx.xb[r];
        }
    }
    for (int j = 0; j < n; ++j) sol.x[j] *= cscale[j];

    sol.objective = 0.0;
    for (int j = 0; j < n; ++j) sol.objective += lp.obj[j] * sol.x[j];

    std::vector<double> y(m);
    sx.compute_y(sx.cost, y);
    sol.y.assign(m, 0.0);
    for (int r = 0; r < m; ++r) sol.y[r] = -y[r] * rscale[r];
    sol.reduced_cost.assign(n, 0.0);
    for (int j = 0; j < n; ++j)
        sol.reduced_cost[j] = -sx.reduced_cost(sx.cost, y, j) / cscale[j];
    return sol;
}

LpVerify verify_solution(const LinearProgram& lp, const std::vector<double>& x,
                         double tol) {
    LpVerify out;
    for (int j = 0; j < lp.num_vars(); ++j) {
        double lo_v = std::isfinite(lp.lo[j]) ? std::max(0.0, lp.lo[j] - x[j]) : 0.0;
        double hi_v = std::isfinite(lp.hi[j]) ? std::max(0.0, x[j] - lp.hi[j]) : 0.0;
        out.max_bound_violation = std::max({out.max_bound_violation, lo_v, hi_v});
    }
    for (const auto& row : lp.rows) {
        double a = 0.0;
        for (auto [v, c] : row.terms) a += c * x[v];
        double viol = 0.0;
        switch (row.rel) {
            case Rel::Le: viol = std::max(0.0, a - row.rhs); break;
            case Rel::Ge: viol = std::max(0.0, row.rhs - a); break;
            case Rel::Eq: viol = std::fabs(a - row.rhs); break;
        }
        double scale = std::max(1.0, std::fabs(row.rhs));
        out.max_row_residual = std::max(out.max_row_residual, viol / scale);
    }
    out.ok = out.max_bound_violation <= tol && out.max_row_residual <= tol;
    return out;
}

namespace {

std::string fmt_bound(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_bound(const std::string& s) {
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    return std::stod(s);
}

}  // namespace

std::string dump_lp(const LinearProgram& lp) {
    std::ostringstream os;
    os << "# cchn lp v1\n";
    os << "vars " << lp.num_vars() << '\n';
    for (int j = 0; j < lp.num_vars(); ++j)
        os << "var " << j << ' ' << lp.names[j] << ' ' << fmt_bound(lp.lo[j]) << ' '
           << fmt_bound(lp.hi[j]) << ' ' << fmt_bound(lp.obj[j]) << '\n';
    os << "rows " << lp.num_rows() << '\n';
    for (const auto& row : lp.rows) {
        os << "row " << (row.rel == Rel::Le ? "le" : row.rel == Rel::Eq ? "eq" : "ge")
           << ' ' << fmt_bound(row.rhs) << ' ' << row.terms.size();
        for (auto [v, c] : row.terms) os << ' ' << v << ' ' << fmt_bound(c);
        os << '\n';
    }
    return os.str();
}

LinearProgram parse_lp(const std::string& text) {
    LinearProgram lp;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "vars" || tag == "rows") continue;
        if (tag == "var") {
            int j;
            std::string name, lo_s, hi_s, obj_s;
            if (!(ls >> j >> name >> lo_s >> hi_s >> obj_s))
                throw ValidationError("bad lp var line: " + line);
            int got = lp.add_var(name, parse_bound(lo_s), parse_bound(hi_s));
            if (got != j) throw ValidationError("lp vars must be dense and ordered");
            lp.set_obj(j, parse_bound(obj_s));
        } else if (tag == "row") {
            std::string rel_s, rhs_s;
            size_t k;
            if (!(ls >> rel_s >> rhs_s >> k)) throw ValidationError("bad lp row line: " + line);
            Rel rel = rel_s == "le" ? Rel::Le : rel_s == "eq" ? Rel::Eq : Rel::Ge;
            int r = lp.add_row(rel, parse_bound(rhs_s));
            for (size_t t = 0; t < k; ++t) {
                int v;
                std::string c_s;
                if (!(ls >> v >> c_s)) throw ValidationError("bad lp row terms: " + line);
                lp.add_term(r, v, parse_bound(c_s));
            }
        } else {
            throw ValidationError("unknown lp line: " + line);
        }
    }
    return lp;
}

}  // namespace cchn
