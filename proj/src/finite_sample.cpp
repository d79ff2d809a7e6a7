#include "decon/finite_sample.hpp"

#include <algorithm>
#include <cmath>

#include "decon/errors.hpp"
#include "decon/rng.hpp"

namespace decon {

namespace {

constexpr int kPartialLabelHatCap = 64;

SignedMixtureEstimate affine_combine(const std::vector<SignedMixtureEstimate>& parts,
                                     const std::vector<double>& alpha) {
    const std::size_t n = parts.at(0).n_sources();
    std::vector<double> w(n, 0.0);
    std::vector<int> dep;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) w[i] += alpha[k] * parts[k].weights()[i];
        dep = union_of(dep, parts[k].dependency_set());
    }
    return SignedMixtureEstimate(std::move(w), std::move(dep));
}

SignedMixtureEstimate mix_estimates(const SignedMixtureEstimate& a,
                                    const SignedMixtureEstimate& b, double nu) {
    return affine_combine({a, b}, {1.0 - nu, nu});
}

void demix_hat_recurse(const std::vector<SignedMixtureEstimate>& s, int level, Rng& rng,
                       const KappaHatEngine& engine, const DemixHatConfig& config,
                       std::vector<HatTraceRow>& trace,
                       std::vector<SignedMixtureEstimate>& out) {
    const std::size_t k = s.size();
    if (k == 2) {
        out.push_back(engine.residue_hat(s[0], s[1]));
        out.push_back(engine.residue_hat(s[1], s[0]));
        return;
    }

    std::vector<SignedMixtureEstimate> tail(s.begin() + 1, s.end());
    const SignedMixtureEstimate q = affine_combine(tail, rng.dirichlet_uniform(k - 1));

    std::vector<SignedMixtureEstimate> residues;
    int n = 1;
    bool passed = false;
    while (!passed) {
        ++n;
        if (n > config.resample_cap)
            throw ConvergenceError("demix_hat: FaceTestHat did not pass within the cap");
        const double nu = static_cast<double>(n - 1) / static_cast<double>(n);
        residues.clear();
        for (std::size_t i = 1; i < k; ++i)
            residues.push_back(engine.residue_hat(mix_estimates(s[i], q, nu), s[0]));
        const double epsilon = std::ldexp(1.0, -(n + 1));  // 1 / 2^(n+1)
        passed = face_test_hat(residues, epsilon, engine);
        trace.push_back({level, n, epsilon, passed});
    }

    std::vector<SignedMixtureEstimate> inner;
    demix_hat_recurse(residues, level + 1, rng, engine, config, trace, inner);

    SignedMixtureEstimate last =
        affine_combine(s, std::vector<double>(k, 1.0 / static_cast<double>(k)));
    for (std::size_t i = 0; i + 1 < k; ++i) last = engine.residue_hat(last, inner[i]);

    out = std::move(inner);
    out.push_back(std::move(last));
}

bool is_permutation_matrix(const std::vector<std::vector<int>>& m) {
    const std::size_t l = m.size();
    std::vector<int> col_count(l, 0);
    for (std::size_t i = 0; i < l; ++i) {
        int row_count = 0;
        for (std::size_t j = 0; j < l; ++j)
            if (m[i][j] != 0) {
                ++row_count;
                ++col_count[j];
            }
        if (row_count != 1) return false;
    }
    for (std::size_t j = 0; j < l; ++j)
        if (col_count[j] != 1) return false;
    return true;
}

}  // namespace

bool face_test_hat(const std::vector<SignedMixtureEstimate>& q, double epsilon,
                   const KappaHatEngine& engine) {
    if (epsilon <= 0.0 || epsilon >= 1.0)
        throw InputError("face_test_hat: epsilon must be in (0, 1)");
    for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) {
            if (i == j) continue;
            const SignedMixtureEstimate r = engine.residue_hat(q[i], q[j]);
            if (engine.kappa_hat(q[i], r) >= 1.0 - epsilon) return false;
        }
    }
    return true;
}

bool face_contain_hat(const SignedMixtureEstimate& q1, const SignedMixtureEstimate& q2,
                      double epsilon, const KappaHatEngine& engine) {
    if (epsilon <= 0.0 || epsilon >= 1.0)
        throw InputError("face_contain_hat: epsilon must be in (0, 1)");
    const SignedMixtureEstimate r = engine.residue_hat(q1, q2);
    return engine.kappa_hat(q1, r) <= 1.0 - epsilon;
}

EstimateBundle demix_hat_from(const std::vector<SignedMixtureEstimate>& inputs,
                              const KappaHatEngine& engine, std::uint64_t seed,
                              const DemixHatConfig& config) {
    if (inputs.size() < 2) throw InputError("demix_hat: need at least 2 inputs");
    if (engine.config().penalty_scale > 0.0) {
        for (std::size_t n : engine.table().sizes)
            if (n < config.min_samples)
                throw InputError("demix_hat: a source sample is below the configured minimum");
    }
    Rng rng(seed);
    EstimateBundle bundle;
    demix_hat_recurse(inputs, 0, rng, engine, config, bundle.trace, bundle.estimates);
    return bundle;
}

EstimateBundle demix_hat(const KappaHatEngine& engine, std::uint64_t seed,
                         const DemixHatConfig& config) {
    const std::size_t l = engine.n_sources();
    std::vector<SignedMixtureEstimate> sources;
    sources.reserve(l);
    for (std::size_t i = 0; i < l; ++i)
        sources.push_back(SignedMixtureEstimate::source(l, static_cast<int>(i)));
    return demix_hat_from(sources, engine, seed, config);
}

VertexTestHatResult vertex_test_hat(const PartialLabelMatrix& s,
                                    const std::vector<SignedMixtureEstimate>& q,
                                    double epsilon, const KappaHatEngine& engine) {
    const std::size_t l = q.size();
    if (s.cols() != l || s.rows() != engine.n_sources())
        throw InputError("vertex_test_hat: label matrix shape mismatch");

    std::vector<std::vector<int>> d(l, std::vector<int>(l, 1));
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < s.rows(); ++j) {
            const auto source =
                SignedMixtureEstimate::source(engine.n_sources(), static_cast<int>(j));
            bool contained = false;
            try {
                contained = face_contain_hat(source, q[i], epsilon, engine);
            } catch (const DegenerateError&) {
                contained = true;  // estimates indistinguishable: same face
            } catch (const EstimationError&) {
                contained = false;  // penalties swamp the data: no evidence
            }
            if (contained)
                for (std::size_t col = 0; col < l; ++col)
                    d[i][col] = std::min(d[i][col], s.at(j, col));
        }
    }

    for (std::size_t round = 0; round < l; ++round) {
        for (std::size_t i = 0; i < l; ++i) {
            int ones = 0;
            std::size_t hit = 0;
            for (std::size_t col = 0; col < l; ++col)
                if (d[i][col] != 0) {
                    ++ones;
                    hit = col;
                }
            if (ones == 1)
                for (std::size_t row = 0; row < l; ++row) d[row][hit] = (row == i) ? 1 : 0;
        }
    }

    VertexTestHatResult out;
    out.accepted = is_permutation_matrix(d);
    out.matrix.assign(l, std::vector<int>(l, 0));
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < l; ++j) out.matrix[j][i] = d[i][j];
    return out;
}

PartialLabelHatResult partial_label_hat(const PartialLabelMatrix& s,
                                        const KappaHatEngine& engine, std::uint64_t seed,
                                        const DemixHatConfig& config) {
    if (!check_condition_C(s))
        throw InputError("partial_label_hat: label matrix has identical columns (condition C)");
    if (!check_condition_D(s))
        throw InputError(
            "partial_label_hat: label matrix has a pure row; run reduce_to_condition_D first");

    EstimateBundle bundle = demix_hat(engine, seed, config);

    PartialLabelHatResult out;
    out.demix_trace = std::move(bundle.trace);
    for (int k = 2;; ++k) {
        if (k > kPartialLabelHatCap)
            throw ConvergenceError("partial_label_hat: vertex test did not accept within the cap");
        const VertexTestHatResult vt =
            vertex_test_hat(s, bundle.estimates, 1.0 / static_cast<double>(k), engine);
        if (vt.accepted) {
            out.accepted_k = k;
            out.estimates.clear();
            for (const auto& row : vt.matrix) {
                std::size_t pick = row.size();
                for (std::size_t j = 0; j < row.size(); ++j)
                    if (row[j] != 0) pick = j;
                out.estimates.push_back(bundle.estimates.at(pick));
            }
            return out;
        }
    }
}

ConditionDReduction reduce_to_condition_D(const PartialLabelMatrix& s,
                                          const std::vector<SignedMixtureEstimate>& estimates,
                                          const KappaHatEngine& engine) {
    if (!check_condition_C(s))
        throw InputError("reduce_to_condition_D: condition (C) must hold");
    if (estimates.size() != s.rows())
        throw InputError("reduce_to_condition_D: one estimate per label row required");

    std::vector<std::vector<int>> grid = s.entries();
    std::vector<SignedMixtureEstimate> est = estimates;
    std::vector<bool> row_alive(s.rows(), true);
    std::vector<bool> col_resolved(s.cols(), false);

    ConditionDReduction out;
    for (;;) {
        std::size_t pure = s.rows();
        std::size_t label = s.cols();
        for (std::size_t i = 0; i < s.rows() && pure == s.rows(); ++i) {
            if (!row_alive[i]) continue;
            int ones = 0;
            std::size_t hit = 0;
            for (std::size_t j = 0; j < s.cols(); ++j)
                if (grid[i][j] != 0) {
                    ++ones;
                    hit = j;
                }
            if (ones == 1) {
                pure = i;
                label = hit;
            }
        }
        if (pure == s.rows()) break;

        if (col_resolved[label])
            throw DegenerateError("reduce_to_condition_D: two pure rows estimate the same base");
        col_resolved[label] = true;
        out.resolved.emplace_back(label, est[pure]);
        row_alive[pure] = false;

        for (std::size_t i = 0; i < s.rows(); ++i) {
            if (!row_alive[i] || grid[i][label] == 0) continue;
            est[i] = engine.residue_hat(est[i], est[pure]);
            grid[i][label] = 0;
        }
    }

    for (std::size_t j = 0; j < s.cols(); ++j)
        if (!col_resolved[j]) out.surviving_columns.push_back(j);
    for (std::size_t i = 0; i < s.rows(); ++i) {
        if (!row_alive[i]) continue;
        out.surviving_rows.push_back(i);
        std::vector<int> row;
        row.reserve(out.surviving_columns.size());
        for (std::size_t j : out.surviving_columns) row.push_back(grid[i][j]);
        out.reduced_label_rows.push_back(std::move(row));
        out.reduced_estimates.push_back(est[i]);
    }
    return out;
}

}  // namespace decon
