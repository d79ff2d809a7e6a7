#pragma once

#include <vector>

namespace decon {

/// Maximize c^T x subject to a_ub x <= b_ub, a_eq x = b_eq, x >= 0.
struct LpProblem {
    std::vector<double> c;
    std::vector<std::vector<double>> a_ub;
    std::vector<double> b_ub;
    std::vector<std::vector<double>> a_eq;
    std::vector<double> b_eq;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

/// Dense two-phase simplex with Bland's rule (anti-cycling), pivot
/// tolerance 1e-11, iteration cap 10 * (columns + rows). Problems in this
/// library are tiny (tens of variables), so a textbook tableau is the right
/// tool. Throws NumericalError if the pivot budget is exhausted.
LpSolution lp_solve(const LpProblem& problem);

}  // namespace decon
