#ifndef CCHN_LP_HPP
#define CCHN_LP_HPP

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace cchn {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Rel { Le, Eq, Ge };
enum class LpStatus { Optimal, Infeasible, Unbounded };

// Maximization problem over named bounded variables and linear rows.
struct LinearProgram {
    struct Row {
        Rel rel = Rel::Le;
        double rhs = 0.0;
        std::vector<std::pair<int, double>> terms;
    };

    std::vector<std::string> names;
    std::vector<double> lo, hi, obj;
    std::vector<Row> rows;

    int add_var(std::string name, double lb = 0.0, double ub = kInf);
    void set_obj(int var, double coef) { obj[var] = coef; }
    int add_row(Rel rel, double rhs);
    void add_term(int row, int var, double coef);

    int num_vars() const { return static_cast<int>(lo.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }
};

struct LpSolution {
    LpStatus status = LpStatus::Optimal;
    double objective = 0.0;
    std::vector<double> x;
    // Row duals and variable reduced costs in maximization convention
    // (binding <= rows have y >= 0).
    std::vector<double> y;
    std::vector<double> reduced_cost;
    long iterations = 0;
};

struct LpOptions {
    double tol = 1e-9;           // feasibility residual, scaled data
    double obj_rel_tol = 1e-7;   // relative objective comparisons
    long max_iterations = 0;     // 0: automatic cap
    bool scale = true;           // powers-of-two equilibration
};

// Two-phase revised simplex over bounded variables, dense basis inverse,
// Dantzig pricing that escalates to randomized improving columns and then to
// Bland's rule during degenerate stalls, dropping back once progress resumes.
// Deterministic (fixed internal seed). Throws SolverError instead of
// returning an uncertified result.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opt = {});

struct LpVerify {
    bool ok = true;
    double max_bound_violation = 0.0;
    double max_row_residual = 0.0;
};

LpVerify verify_solution(const LinearProgram& lp, const std::vector<double>& x,
                         double tol);

std::string dump_lp(const LinearProgram& lp);
LinearProgram parse_lp(const std::string& text);

}  // namespace cchn

#endif
