#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "decon/measure.hpp"
#include "decon/partial_label.hpp"
#include "decon/simplex.hpp"

namespace decon {

/// M x L row-stochastic mixing matrix.
struct MixingMatrix {
    std::vector<std::vector<double>> rows;

    std::size_t m() const { return rows.size(); }
    std::size_t l() const { return rows.empty() ? 0 : rows[0].size(); }
    void validate() const;
    double min_singular_value() const;
};

enum class BaseKind { anchored_discrete, truncated_gaussian };

/// Gaussian base with an exclusive slab: base i is N(mean, sigma) conditioned
/// to avoid every other base's slab, so slab i belongs to base i alone. This
/// realizes the support condition by construction.
struct GaussianBase {
    double mean = 0.0;
    double sigma = 1.0;
    double slab_lo = 0.0;
    double slab_hi = 0.0;
};

struct InstanceSpec {
    std::size_t l = 2;
    std::size_t m = 2;
    BaseKind base_kind = BaseKind::anchored_discrete;

    std::size_t n_atoms = 10;               // anchored_discrete
    std::vector<GaussianBase> gaussians;    // truncated_gaussian; empty = defaults

    std::optional<MixingMatrix> mixing;     // absent = random full-rank
    double min_singular_value = 0.05;

    bool with_labels = false;
    std::optional<std::vector<std::vector<int>>> labels;  // absent + with_labels = random

    std::size_t n_per_source = 0;  // 0 = exact masses (discrete engine)
    std::size_t n_oracle = 100000;
    std::uint64_t seed = 0;
};

struct ConditionReport {
    bool base_condition = false;  // (A') for discrete, (A'') by construction for gaussian
    std::string base_condition_name;
    double mixing_min_singular = 0.0;
    bool full_rank = false;
    std::optional<bool> condition_c;
    std::optional<bool> condition_d;
};

struct SynthInstance {
    InstanceSpec spec;
    MixingMatrix mixing;
    std::optional<PartialLabelMatrix> labels;
    ConditionReport conditions;

    // Discrete engine payload.
    std::vector<std::string> atoms;
    std::vector<SimplexPoint> bases;          // ground-truth base masses
    std::vector<SimplexPoint> contaminated;   // exact masses pi_i^T P
    DiscreteDataset discrete_dataset;         // exact masses or sampled counts

    // Continuous engine payload.
    std::vector<GaussianBase> gaussians;
    EmpiricalDataset empirical_dataset;
    std::vector<std::vector<double>> oracle_points;  // per base, 1-d draws
};

/// Default gaussian layout for L bases: means 2.5 apart centred at 0 (L = 2
/// uses +-2), unit sigmas, exclusive slabs of half-width 0.5 around each mean.
std::vector<GaussianBase> default_gaussians(std::size_t l);

/// Mass of base i's truncated gaussian inside [lo, hi], from the analytic CDF.
double truncated_gaussian_mass(const std::vector<GaussianBase>& bases, std::size_t i,
                               double lo, double hi);

SynthInstance synth_instance(const InstanceSpec& spec);

/// Rejection-samples an M x L binary matrix whose rows have >= 2 ones
/// (condition D) until no two columns are identical (condition C).
PartialLabelMatrix sample_partial_labels(std::size_t m, std::size_t l, std::uint64_t seed);

struct AlignmentResult {
    std::vector<std::size_t> permutation;  // estimate i matches oracle permutation[i]
    std::vector<double> distances;         // per estimate, against its match
    double max_distance = 0.0;
};

/// distance(i, j) = max over shared candidate columns of
/// |estimate_values[i][c] - oracle_values[j][c]|; picks the permutation
/// minimizing the maximum pair distance (brute force, L <= 8). Exact mode
/// scores the identity assignment only.
AlignmentResult align_and_score(const std::vector<std::vector<double>>& estimate_values,
                                const std::vector<std::vector<double>>& oracle_values,
                                bool exact_mode);

}  // namespace decon
