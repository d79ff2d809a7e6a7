#include "decon/lp.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "decon/errors.hpp"

namespace decon {
namespace {

constexpr double kPivotTol = 1e-11;

// Row-major (rows+1) x (cols+1) tableau; last row is the objective row
// (z - c^T x form), last column the right-hand side.
struct Tableau {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> t;
    std::vector<std::size_t> basis;  // basic column per row

    double& at(std::size_t r, std::size_t c) { return t[r * (cols + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return t[r * (cols + 1) + c]; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double p = at(pr, pc);
        for (std::size_t c = 0; c <= cols; ++c) at(pr, c) /= p;
        for (std::size_t r = 0; r <= rows; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c <= cols; ++c) at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
        }
        basis[pr] = pc;
    }
};

// Runs simplex iterations until the objective row is nonnegative on the
// allowed columns. Bland's rule: smallest eligible entering column, smallest
// basis index among ratio ties. Returns false on unboundedness.
bool run_simplex(Tableau& tab, std::size_t allowed_cols, std::size_t max_iter) {
    for (std::size_t iter = 0;; ++iter) {
        if (iter > max_iter) throw NumericalError("simplex: pivot budget exhausted");

        std::size_t enter = allowed_cols;
        for (std::size_t c = 0; c < allowed_cols; ++c) {
            if (tab.at(tab.rows, c) < -kPivotTol) {
                enter = c;
                break;
            }
        }
        if (enter == allowed_cols) return true;  // optimal

        std::size_t leave = tab.rows;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < tab.rows; ++r) {
            const double a = tab.at(r, enter);
            if (a > kPivotTol) {
                const double ratio = tab.at(r, tab.cols) / a;
                if (ratio < best_ratio - kPivotTol ||
                    (ratio < best_ratio + kPivotTol &&
                     (leave == tab.rows || tab.basis[r] < tab.basis[leave]))) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
        }
        if (leave == tab.rows) return false;  // unbounded
        tab.pivot(leave, enter);
    }
}

}  // namespace

LpSolution lp_solve(const LpProblem& problem) {
    const std::size_t n = problem.c.size();
    const std::size_t m_ub = problem.a_ub.size();
    const std::size_t m_eq = problem.a_eq.size();
    const std::size_t m = m_ub + m_eq;
    if (problem.b_ub.size() != m_ub || problem.b_eq.size() != m_eq)
        throw InputError("lp_solve: constraint sizes inconsistent");

    // Normalized rows: coeffs, rhs >= 0, and whether a slack is usable as the
    // initial basic variable (only for <= rows that kept their sign).
    struct Row {
        std::vector<double> a;
        double b;
        int slack_sign;  // +1: slack basic; -1: surplus, needs artificial; 0: equality
    };
    std::vector<Row> rows;
    rows.reserve(m);
    for (std::size_t i = 0; i < m_ub; ++i) {
        Row r{problem.a_ub[i], problem.b_ub[i], +1};
        if (r.a.size() != n) throw InputError("lp_solve: a_ub row width mismatch");
        if (r.b < 0.0) {
            for (auto& v : r.a) v = -v;
            r.b = -r.b;
            r.slack_sign = -1;
        }
        rows.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < m_eq; ++i) {
        Row r{problem.a_eq[i], problem.b_eq[i], 0};
        if (r.a.size() != n) throw InputError("lp_solve: a_eq row width mismatch");
        if (r.b < 0.0) {
            for (auto& v : r.a) v = -v;
            r.b = -r.b;
        }
        rows.push_back(std::move(r));
    }

    std::size_t n_art = 0;
    for (const auto& r : rows)
        if (r.slack_sign <= 0) ++n_art;

    const std::size_t slack_base = n;
    const std::size_t art_base = n + m_ub;
    const std::size_t cols = n + m_ub + n_art;

    Tableau tab;
    tab.rows = m;
    tab.cols = cols;
    tab.t.assign((m + 1) * (cols + 1), 0.0);
    tab.basis.assign(m, 0);

    std::size_t art_next = art_base;
    std::size_t ub_index = 0;
    for (std::size_t r = 0; r < m; ++r) {
        const Row& row = rows[r];
        for (std::size_t c = 0; c < n; ++c) tab.at(r, c) = row.a[c];
        tab.at(r, cols) = row.b;
        if (row.slack_sign != 0) {
            tab.at(r, slack_base + ub_index) = static_cast<double>(row.slack_sign);
            ++ub_index;
        }
        if (row.slack_sign == +1) {
            tab.basis[r] = slack_base + ub_index - 1;
        } else {
            tab.at(r, art_next) = 1.0;
            tab.basis[r] = art_next;
            ++art_next;
        }
    }

    const std::size_t max_iter = 10 * (cols + m) + 64;

    // Phase 1: drive artificials to zero (maximize -sum of artificials).
    if (n_art > 0) {
        for (std::size_t c = art_base; c < cols; ++c) tab.at(m, c) = 1.0;
        for (std::size_t r = 0; r < m; ++r) {
            if (tab.basis[r] >= art_base)
                for (std::size_t c = 0; c <= cols; ++c) tab.at(m, c) -= tab.at(r, c);
        }
        if (!run_simplex(tab, cols, max_iter))
            throw NumericalError("simplex: phase 1 unbounded");
        if (tab.at(m, cols) < -1e-9) return {LpStatus::infeasible, 0.0, {}};

        // Pivot lingering zero-level artificials out of the basis when possible.
        for (std::size_t r = 0; r < m; ++r) {
            if (tab.basis[r] < art_base) continue;
            for (std::size_t c = 0; c < art_base; ++c) {
                if (std::fabs(tab.at(r, c)) > kPivotTol) {
                    tab.pivot(r, c);
                    break;
                }
            }
        }
    }

    // Phase 2 objective row: z - c^T x, then cancel basic columns.
    for (std::size_t c = 0; c <= cols; ++c) tab.at(m, c) = 0.0;
    for (std::size_t c = 0; c < n; ++c) tab.at(m, c) = -problem.c[c];
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t b = tab.basis[r];
        const double f = tab.at(m, b);
        if (f != 0.0)
            for (std::size_t c = 0; c <= cols; ++c) tab.at(m, c) -= f * tab.at(r, c);
    }
    // Artificial columns are excluded from phase 2 (allowed_cols = art_base).
    if (!run_simplex(tab, art_base, max_iter)) return {LpStatus::unbounded, 0.0, {}};

    LpSolution sol;
    sol.status = LpStatus::optimal;
    sol.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        if (tab.basis[r] < n) sol.x[tab.basis[r]] = tab.at(r, cols);
    sol.objective = tab.at(m, cols);
    return sol;
}

}  // namespace decon
