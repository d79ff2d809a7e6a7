#include "decon/harness.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "decon/errors.hpp"
#include "decon/kappa.hpp"
#include "decon/rng.hpp"

namespace decon {

namespace {

double normal_cdf(double x, double mean, double sigma) {
    return 0.5 * std::erfc(-(x - mean) / (sigma * std::sqrt(2.0)));
}

std::size_t sample_categorical(Rng& rng, const std::vector<double>& probs) {
    double u = rng.uniform();
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
        if (u < probs[i]) return i;
        u -= probs[i];
    }
    return probs.size() - 1;
}

/// Draw from base i: N(mean_i, sigma_i) conditioned to avoid every other
/// base's slab.
double sample_truncated(Rng& rng, const std::vector<GaussianBase>& bases, std::size_t i) {
    for (int tries = 0; tries < 100000; ++tries) {
        const double x = bases[i].mean + bases[i].sigma * rng.normal();
        bool excluded = false;
        for (std::size_t j = 0; j < bases.size() && !excluded; ++j)
            excluded = (j != i) && x > bases[j].slab_lo && x < bases[j].slab_hi;
        if (!excluded) return x;
    }
    throw GenerationError("truncated gaussian rejection sampling stalled");
}

MixingMatrix random_mixing(Rng& rng, std::size_t m, std::size_t l, double min_sv,
                           const std::optional<PartialLabelMatrix>& labels) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        MixingMatrix pi;
        pi.rows.assign(m, std::vector<double>(l, 0.0));
        for (std::size_t i = 0; i < m; ++i) {
            if (labels.has_value()) {
                std::vector<std::size_t> supp;
                for (std::size_t j = 0; j < l; ++j)
                    if (labels->at(i, j) != 0) supp.push_back(j);
                const auto w = rng.dirichlet_uniform(supp.size());
                for (std::size_t k = 0; k < supp.size(); ++k) pi.rows[i][supp[k]] = w[k];
            } else {
                pi.rows[i] = rng.dirichlet_uniform(l);
            }
        }
        if (pi.min_singular_value() >= min_sv) return pi;
    }
    throw GenerationError("random mixing matrix failed the singular value floor");
}

}  // namespace

void MixingMatrix::validate() const {
    if (rows.empty()) throw InputError("mixing matrix: no rows");
    const std::size_t cols = rows[0].size();
    if (cols == 0) throw InputError("mixing matrix: no columns");
    for (const auto& row : rows) {
        if (row.size() != cols) throw InputError("mixing matrix: ragged rows");
        double sum = 0.0;
        for (double v : row) {
            if (v < -1e-12) throw InputError("mixing matrix: negative entry");
            sum += v;
        }
        if (std::fabs(sum - 1.0) > 1e-9)
            throw InputError("mixing matrix: rows must sum to 1");
    }
}

double MixingMatrix::min_singular_value() const {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(m()), static_cast<Eigen::Index>(l()));
    for (std::size_t i = 0; i < m(); ++i)
        for (std::size_t j = 0; j < l(); ++j)
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

std::vector<GaussianBase> default_gaussians(std::size_t l) {
    std::vector<GaussianBase> out(l);
    const double spread = 2.5;
    for (std::size_t i = 0; i < l; ++i) {
        double mean = spread * (static_cast<double>(i) - static_cast<double>(l - 1) / 2.0);
        if (l == 2) mean = (i == 0) ? -2.0 : 2.0;
        out[i].mean = mean;
        out[i].sigma = 1.0;
        out[i].slab_lo = mean - 0.5;
        out[i].slab_hi = mean + 0.5;
    }
    return out;
}

double truncated_gaussian_mass(const std::vector<GaussianBase>& bases, std::size_t i,
                               double lo, double hi) {
    // Excluded slabs are pairwise disjoint, so removed mass adds up.
    const auto& b = bases[i];
    auto raw = [&](double a, double z) {
        if (z <= a) return 0.0;
        return normal_cdf(z, b.mean, b.sigma) - normal_cdf(a, b.mean, b.sigma);
    };
    double kept = raw(lo, hi);
    double removed_total = 0.0;
    for (std::size_t j = 0; j < bases.size(); ++j) {
        if (j == i) continue;
        removed_total += raw(bases[j].slab_lo, bases[j].slab_hi);
        kept -= raw(std::max(lo, bases[j].slab_lo), std::min(hi, bases[j].slab_hi));
    }
    return kept / (1.0 - removed_total);
}

PartialLabelMatrix sample_partial_labels(std::size_t m, std::size_t l, std::uint64_t seed) {
    if (l < 2 || m < l) throw InputError("sample_partial_labels: need M >= L >= 2");
    Rng rng(seed);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<std::vector<int>> rows(m, std::vector<int>(l, 0));
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t ones = 2 + rng.uniform_index(l - 1);  // in [2, L]
            std::vector<std::size_t> cols(l);
            std::iota(cols.begin(), cols.end(), 0);
            for (std::size_t k = 0; k < ones; ++k) {
                const std::size_t pick = k + rng.uniform_index(l - k);
                std::swap(cols[k], cols[pick]);
                rows[i][cols[k]] = 1;
            }
        }
        PartialLabelMatrix s(rows);
        if (check_condition_C(s)) return s;
    }
    throw GenerationError("sample_partial_labels: no matrix satisfied (C) within the budget");
}

SynthInstance synth_instance(const InstanceSpec& spec) {
    if (spec.l < 2) throw InputError("synth_instance: L must be >= 2");
    if (spec.m < spec.l) throw InputError("synth_instance: M must be >= L");

    SynthInstance out;
    out.spec = spec;
    Rng rng(spec.seed);
    Rng label_rng = rng.fork(1);
    Rng mixing_rng = rng.fork(2);
    Rng base_rng = rng.fork(3);
    Rng sample_rng = rng.fork(4);
    Rng oracle_rng = rng.fork(5);

    if (spec.with_labels) {
        if (spec.labels.has_value())
            out.labels = PartialLabelMatrix(*spec.labels);
        else
            out.labels = sample_partial_labels(spec.m, spec.l, label_rng.next_u64());
        if (out.labels->rows() != spec.m || out.labels->cols() != spec.l)
            throw InputError("synth_instance: label matrix shape mismatch");
    }

    if (spec.mixing.has_value()) {
        out.mixing = *spec.mixing;
        out.mixing.validate();
        if (out.mixing.m() != spec.m || out.mixing.l() != spec.l)
            throw InputError("synth_instance: mixing matrix shape mismatch");
    } else {
        out.mixing = random_mixing(mixing_rng, spec.m, spec.l, spec.min_singular_value,
                                   out.labels);
    }

    out.conditions.mixing_min_singular = out.mixing.min_singular_value();
    out.conditions.full_rank = out.conditions.mixing_min_singular > 1e-10;
    if (out.labels.has_value()) {
        out.conditions.condition_c = check_condition_C(*out.labels);
        out.conditions.condition_d = check_condition_D(*out.labels);
    }

    if (spec.base_kind == BaseKind::anchored_discrete) {
        const std::size_t a = spec.n_atoms;
        if (a < spec.l) throw InputError("synth_instance: need at least L atoms");
        out.atoms.reserve(a);
        for (std::size_t x = 0; x < a; ++x) out.atoms.push_back("atom" + std::to_string(x));

        // Base j: anchor mass at atom j plus random mass on the shared block.
        for (std::size_t j = 0; j < spec.l; ++j) {
            std::vector<double> mass(a, 0.0);
            const double anchor = (a > spec.l) ? 0.25 + 0.35 * base_rng.uniform() : 1.0;
            mass[j] = anchor;
            if (a > spec.l) {
                const auto w = base_rng.dirichlet_uniform(a - spec.l);
                for (std::size_t x = spec.l; x < a; ++x)
                    mass[x] = (1.0 - anchor) * w[x - spec.l];
            }
            out.bases.emplace_back(SimplexPoint::normalized(std::move(mass)));
        }
        out.conditions.base_condition_name = "joint_irreducibility";
        out.conditions.base_condition = check_joint_irreducibility(out.bases);

        for (std::size_t i = 0; i < spec.m; ++i) {
            std::vector<double> mass(a, 0.0);
            for (std::size_t j = 0; j < spec.l; ++j)
                for (std::size_t x = 0; x < a; ++x)
                    mass[x] += out.mixing.rows[i][j] * out.bases[j][x];
            out.contaminated.emplace_back(SimplexPoint::normalized(std::move(mass)));
        }

        out.discrete_dataset.atoms = out.atoms;
        if (spec.n_per_source == 0) {
            out.discrete_dataset.sources = out.contaminated;
            out.discrete_dataset.counts_total.assign(spec.m, 0);
        } else {
            for (std::size_t i = 0; i < spec.m; ++i) {
                std::vector<double> counts(a, 0.0);
                for (std::size_t t = 0; t < spec.n_per_source; ++t) {
                    const std::size_t j = sample_categorical(sample_rng, out.mixing.rows[i]);
                    counts[sample_categorical(sample_rng, out.bases[j].mass())] += 1.0;
                }
                for (auto& c : counts) c /= static_cast<double>(spec.n_per_source);
                out.discrete_dataset.sources.emplace_back(SimplexPoint::normalized(std::move(counts)));
                out.discrete_dataset.counts_total.push_back(spec.n_per_source);
            }
        }
        return out;
    }

    // Truncated gaussians.
    out.gaussians = spec.gaussians.empty() ? default_gaussians(spec.l) : spec.gaussians;
    if (out.gaussians.size() != spec.l)
        throw InputError("synth_instance: need one gaussian per base");
    for (std::size_t i = 0; i < spec.l; ++i)
        for (std::size_t j = i + 1; j < spec.l; ++j)
            if (std::max(out.gaussians[i].slab_lo, out.gaussians[j].slab_lo) <
                std::min(out.gaussians[i].slab_hi, out.gaussians[j].slab_hi))
                throw InputError("synth_instance: exclusive slabs must be disjoint");
    out.conditions.base_condition_name = "support_condition";
    out.conditions.base_condition = true;  // holds by construction

    if (spec.n_per_source == 0)
        throw InputError("synth_instance: continuous bases need a sample size");
    out.empirical_dataset.dim = 1;
    for (std::size_t i = 0; i < spec.m; ++i) {
        std::vector<double> pts;
        pts.reserve(spec.n_per_source);
        for (std::size_t t = 0; t < spec.n_per_source; ++t) {
            const std::size_t j = sample_categorical(sample_rng, out.mixing.rows[i]);
            pts.push_back(sample_truncated(sample_rng, out.gaussians, j));
        }
        out.empirical_dataset.sources.emplace_back(std::move(pts), 1, static_cast<int>(i));
    }

    out.oracle_points.resize(spec.l);
    for (std::size_t j = 0; j < spec.l; ++j) {
        out.oracle_points[j].reserve(spec.n_oracle);
        for (std::size_t t = 0; t < spec.n_oracle; ++t)
            out.oracle_points[j].push_back(sample_truncated(oracle_rng, out.gaussians, j));
    }
    return out;
}

AlignmentResult align_and_score(const std::vector<std::vector<double>>& estimate_values,
                                const std::vector<std::vector<double>>& oracle_values,
                                bool exact_mode) {
    const std::size_t l = estimate_values.size();
    if (l == 0 || oracle_values.size() != l)
        throw InputError("align_and_score: need matching estimate and oracle counts");
    if (l > 8) throw InputError("align_and_score: L > 8 not supported (brute force)");

    std::vector<std::vector<double>> dist(l, std::vector<double>(l, 0.0));
    for (std::size_t i = 0; i < l; ++i) {
        if (estimate_values[i].size() != oracle_values[0].size())
            throw InputError("align_and_score: value columns mismatch");
        for (std::size_t j = 0; j < l; ++j) {
            double d = 0.0;
            for (std::size_t c = 0; c < estimate_values[i].size(); ++c)
                d = std::max(d, std::fabs(estimate_values[i][c] - oracle_values[j][c]));
            dist[i][j] = d;
        }
    }

    AlignmentResult out;
    std::vector<std::size_t> perm(l);
    std::iota(perm.begin(), perm.end(), 0);
    if (exact_mode) {
        out.permutation = perm;
    } else {
        std::vector<std::size_t> best = perm;
        double best_max = std::numeric_limits<double>::infinity();
        do {
            double worst = 0.0;
            for (std::size_t i = 0; i < l; ++i) worst = std::max(worst, dist[i][perm[i]]);
            if (worst < best_max) {
                best_max = worst;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        out.permutation = best;
    }
    out.distances.resize(l);
    for (std::size_t i = 0; i < l; ++i) {
        out.distances[i] = dist[i][out.permutation[i]];
        out.max_distance = std::max(out.max_distance, out.distances[i]);
    }
    return out;
}

}  // namespace decon
