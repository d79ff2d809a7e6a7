#include "decon/kappa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "decon/lp.hpp"
#include "decon/parallel.hpp"

namespace decon {

namespace {

// Clamp tiny negative residue mass produced by the (1 - kappa) division.
// Exact arithmetic gives >= 0; anything below the guard means the operands
// were numerically indistinguishable for this purpose.
constexpr double kResidueNegGuard = 1e-9;

SimplexPoint clamp_residue(std::vector<double> mass) {
    double sum = 0.0;
    for (auto& m : mass) {
        if (m < 0.0) {
            if (m < -kResidueNegGuard) throw NumericalError("residue has negative mass");
            m = 0.0;
        }
        sum += m;
    }
    if (sum <= 0.0) throw NumericalError("residue collapsed to zero mass");
    return SimplexPoint::normalized(std::move(mass));
}

}  // namespace

KappaResult kappa_two_exact(const SimplexPoint& f, const SimplexPoint& h) {
    if (f.size() != h.size()) throw InputError("kappa_two_exact: dimension mismatch");
    if (linf_distance(f, h) <= kDistinctTol)
        throw DegenerateError("kappa_two_exact: F == H");

    double kappa = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < h.size(); ++x)
        if (h[x] > 0.0) kappa = std::min(kappa, f[x] / h[x]);
    kappa = std::min(std::max(kappa, 0.0), 1.0);
    if (kappa > 1.0 - kDistinctTol)
        throw DegenerateError("kappa_two_exact: distributions numerically identical");

    std::vector<double> g(f.size());
    const double scale = 1.0 / (1.0 - kappa);
    for (std::size_t x = 0; x < f.size(); ++x) g[x] = (f[x] - kappa * h[x]) * scale;

    KappaResult out;
    out.kappa = kappa;
    out.residue = clamp_residue(std::move(g));
    return out;
}

SimplexPoint residue_exact(const SimplexPoint& f, const SimplexPoint& h) {
    return kappa_two_exact(f, h).residue;
}

KappaResult kappa_multi_exact(const SimplexPoint& f0, const std::vector<SimplexPoint>& others) {
    if (others.empty()) throw InputError("kappa_multi_exact: need at least one F_i");
    const std::size_t dim = f0.size();
    const std::size_t k = others.size();
    for (const auto& h : others)
        if (h.size() != dim) throw InputError("kappa_multi_exact: dimension mismatch");

    LpProblem lp;
    lp.c.assign(k, 1.0);
    lp.a_ub.assign(dim, std::vector<double>(k, 0.0));
    lp.b_ub.assign(dim, 0.0);
    for (std::size_t x = 0; x < dim; ++x) {
        for (std::size_t j = 0; j < k; ++j) lp.a_ub[x][j] = others[j][x];
        lp.b_ub[x] = f0[x];
    }
    const LpSolution sol = lp_solve(lp);
    if (sol.status != LpStatus::optimal)
        throw NumericalError("kappa_multi_exact: LP did not reach an optimum");

    KappaResult out;
    out.nus = sol.x;
    for (auto& nu : out.nus) nu = std::max(nu, 0.0);
    double total = 0.0;
    for (double nu : out.nus) total += nu;
    out.kappa = std::min(total, 1.0);

    if (out.kappa >= 1.0 - kKappaOneTol) {
        // f0 is exactly a mixture of the others: the decomposition places no
        // mass on G, so any distribution is feasible; report f0 and flag.
        out.kappa = 1.0;
        out.residue = f0;
        return out;
    }
    std::vector<double> g(dim);
    const double scale = 1.0 / (1.0 - total);
    for (std::size_t x = 0; x < dim; ++x) {
        double mixed = 0.0;
        for (std::size_t j = 0; j < k; ++j) mixed += out.nus[j] * others[j][x];
        g[x] = (f0[x] - mixed) * scale;
    }
    out.residue = clamp_residue(std::move(g));
    return out;
}

bool check_joint_irreducibility(const std::vector<SimplexPoint>& bases) {
    if (bases.size() < 2) throw InputError("joint irreducibility needs L >= 2");
    const std::size_t l = bases.size();
    const std::size_t dim = bases[0].size();
    for (const auto& b : bases)
        if (b.size() != dim) throw InputError("joint irreducibility: dimension mismatch");

    // Variables gamma = u - v with u, v >= 0 (2L columns).
    for (std::size_t target = 0; target < l; ++target) {
        LpProblem lp;
        lp.c.assign(2 * l, 0.0);
        lp.c[target] = -1.0;      // maximize -gamma_target = minimize gamma_target
        lp.c[l + target] = 1.0;
        lp.a_ub.assign(dim, std::vector<double>(2 * l, 0.0));
        lp.b_ub.assign(dim, 0.0);
        for (std::size_t x = 0; x < dim; ++x) {
            for (std::size_t j = 0; j < l; ++j) {
                lp.a_ub[x][j] = -bases[j][x];     // -(sum gamma_j P_j(x)) <= 0
                lp.a_ub[x][l + j] = bases[j][x];
            }
        }
        lp.a_eq.assign(1, std::vector<double>(2 * l, 0.0));
        for (std::size_t j = 0; j < l; ++j) {
            lp.a_eq[0][j] = 1.0;
            lp.a_eq[0][l + j] = -1.0;
        }
        lp.b_eq.assign(1, 1.0);

        const LpSolution sol = lp_solve(lp);
        if (sol.status == LpStatus::unbounded) return false;  // linearly dependent bases
        if (sol.status != LpStatus::optimal)
            throw NumericalError("joint irreducibility: LP failed");
        const double min_gamma = -sol.objective;
        if (min_gamma < -1e-9) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

double KappaHatEngine::kappa_hat(const SignedMixtureEstimate& f, const SignedMixtureEstimate& h,
                                 std::size_t* argmin) const {
    if (table_.n_candidates == 0) throw InputError("kappa_hat: empty candidate list");
    if (f.n_sources() != table_.n_sources || h.n_sources() != table_.n_sources)
        throw InputError("kappa_hat: estimate does not match the evaluation table");
    if (f.dependency_set().empty() || h.dependency_set().empty())
        throw InputError("kappa_hat: empty dependency set");

    const double gamma_f = gamma(f.dependency_set());
    const double gamma_h = gamma(h.dependency_set());

    const unsigned workers = std::max(1u, config_.workers);
    const std::size_t n_chunks =
        std::min<std::size_t>(workers, std::max<std::size_t>(table_.n_candidates, 1));
    std::vector<double> chunk_min(n_chunks, std::numeric_limits<double>::infinity());

    auto ratio_at = [&](std::size_t c) {
        const double den = table_.evaluate(h, c) - gamma_h;
        if (den <= 0.0) return std::numeric_limits<double>::infinity();
        return (table_.evaluate(f, c) + gamma_f) / den;
    };

    parallel_for(table_.n_candidates, workers,
                 [&](std::size_t begin, std::size_t end, std::size_t chunk) {
                     double local = std::numeric_limits<double>::infinity();
                     for (std::size_t c = begin; c < end; ++c) local = std::min(local, ratio_at(c));
                     chunk_min[chunk] = local;
                 });

    double best = std::numeric_limits<double>::infinity();
    for (double v : chunk_min) best = std::min(best, v);
    if (!std::isfinite(best))
        throw EstimationError(
            "kappa_hat: every candidate denominator clamped to zero (n too small "
            "for the penalty)");

    if (argmin != nullptr) {
        // Smallest candidate index within 1e-12 of the minimum; scan chunks in
        // order so the answer matches a serial scan for any worker count.
        std::vector<std::size_t> chunk_arg(n_chunks, table_.n_candidates);
        parallel_for(table_.n_candidates, workers,
                     [&](std::size_t begin, std::size_t end, std::size_t chunk) {
                         for (std::size_t c = begin; c < end; ++c) {
                             if (ratio_at(c) <= best + 1e-12) {
                                 chunk_arg[chunk] = c;
                                 break;
                             }
                         }
                     });
        *argmin = table_.n_candidates;
        for (std::size_t k = 0; k < n_chunks; ++k) {
            if (chunk_arg[k] < table_.n_candidates) {
                *argmin = chunk_arg[k];
                break;
            }
        }
    }
    return std::min(std::max(best, 0.0), 1.0);
}

SignedMixtureEstimate KappaHatEngine::residue_hat(const SignedMixtureEstimate& f,
                                                  const SignedMixtureEstimate& h) const {
    const double kappa = kappa_hat(f, h);
    if (kappa >= 1.0 - kKappaOneTol)
        throw DegenerateError("residue_hat: estimated distributions indistinguishable");
    const double scale = 1.0 / (1.0 - kappa);
    std::vector<double> w(table_.n_sources, 0.0);
    for (std::size_t i = 0; i < table_.n_sources; ++i)
        w[i] = (f.weights()[i] - kappa * h.weights()[i]) * scale;
    return SignedMixtureEstimate(std::move(w),
                                 union_of(f.dependency_set(), h.dependency_set()));
}

}  // namespace decon
