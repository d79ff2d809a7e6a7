#pragma once

#include <cstddef>
#include <vector>

#include "decon/measure.hpp"
#include "decon/simplex.hpp"

namespace decon {

/// Result of a kappa computation on the exact engine. For the multi-sample
/// operator, nus holds the attaining proportions (sum(nus) == kappa).
struct KappaResult {
    double kappa = 0.0;
    SimplexPoint residue;
    std::vector<double> nus;
};

inline constexpr double kDistinctTol = 1e-12;
inline constexpr double kKappaOneTol = 1e-9;

/// Two-sample kappa*: the maximal proportion of h contained in f. On
/// discrete masses the infimum over measurable sets is attained on a single
/// atom, so kappa = min over atoms x with h(x) > 0 of f(x)/h(x), and the
/// residue is (f - kappa h) / (1 - kappa), clamped and renormalized.
/// Throws DegenerateError when f == h (L-inf <= 1e-12).
KappaResult kappa_two_exact(const SimplexPoint& f, const SimplexPoint& h);

/// The residue component of kappa_two_exact.
SimplexPoint residue_exact(const SimplexPoint& f, const SimplexPoint& h);

/// Multi-sample kappa*: maximize sum(nu) subject to
/// sum_k nu_k h_k <= f0 componentwise, nu >= 0 (a small dense LP).
/// When sum(nu) == 1 the residue is not defined by the decomposition; f0
/// itself is reported with kappa flagged as exactly 1.
KappaResult kappa_multi_exact(const SimplexPoint& f0, const std::vector<SimplexPoint>& others);

/// Joint irreducibility, definition (b): every signed combination of the
/// bases that is a distribution has nonnegative coefficients. Checked by L
/// linear programs: min gamma_i subject to sum_j gamma_j P_j(x) >= 0 for all
/// atoms and sum gamma = 1; true iff every optimum is >= -1e-9.
bool check_joint_irreducibility(const std::vector<SimplexPoint>& bases);

// ---------------------------------------------------------------------------
// Penalized empirical estimator

struct KappaHatConfig {
    double penalty_scale = 1.0;  // 0.0 = plug-in mode (no penalties)
    unsigned workers = 1;
};

/// kappa-hat and ResidueHat over a precomputed evaluation table. All scans
/// are deterministic: the minimum is an exact fold and ties resolve to the
/// smallest candidate index within 1e-12 of the minimum, independent of the
/// worker count.
class KappaHatEngine {
public:
    KappaHatEngine(EvalTable table, KappaHatConfig config)
        : table_(std::move(table)), config_(config) {}

    const EvalTable& table() const { return table_; }
    const KappaHatConfig& config() const { return config_; }
    std::size_t n_sources() const { return table_.n_sources; }

    double gamma(const std::vector<int>& dependency_set) const {
        if (config_.penalty_scale == 0.0) return 0.0;
        return config_.penalty_scale * vc_penalty(dependency_set, table_.sizes, table_.vc_dim);
    }

    double evaluate(const SignedMixtureEstimate& e, std::size_t candidate) const {
        return table_.evaluate(e, candidate);
    }

    /// min over candidates S of (F(S) + gamma(D(F))) / (H(S) - gamma(D(H)))_+,
    /// clamped to [0, 1]. Candidates with a clamped denominator are skipped;
    /// if every candidate clamps, throws EstimationError. If argmin is
    /// non-null it receives the first candidate within 1e-12 of the minimum.
    double kappa_hat(const SignedMixtureEstimate& f, const SignedMixtureEstimate& h,
                     std::size_t* argmin = nullptr) const;

    /// (F - kappa H) / (1 - kappa) as a signed mixture; dependency set is the
    /// union. Throws DegenerateError when kappa-hat >= 1 - 1e-9.
    SignedMixtureEstimate residue_hat(const SignedMixtureEstimate& f,
                                      const SignedMixtureEstimate& h) const;

private:
    EvalTable table_;
    KappaHatConfig config_;
};

}  // namespace decon
