#pragma once

#include <cstdint>
#include <vector>

#include "decon/kappa.hpp"
#include "decon/measure.hpp"
#include "decon/partial_label.hpp"

namespace decon {

struct HatTraceRow {
    int level = 0;
    int n = 0;
    double epsilon = 0.0;  // 1 / 2^(n+1)
    bool verdict = false;
};

struct EstimateBundle {
    std::vector<SignedMixtureEstimate> estimates;
    std::vector<HatTraceRow> trace;
};

struct DemixHatConfig {
    std::size_t min_samples = 200;
    int resample_cap = 64;
};

/// False iff some ordered pair has kappa-hat(Q_i | ResidueHat(Q_i | Q_j))
/// at least 1 - epsilon.
bool face_test_hat(const std::vector<SignedMixtureEstimate>& q, double epsilon,
                   const KappaHatEngine& engine);

/// 1 iff kappa-hat(Q_1 | ResidueHat(Q_1 | Q_2)) <= 1 - epsilon, i.e. the
/// support of Q_2 looks contained in the support of Q_1's face.
bool face_contain_hat(const SignedMixtureEstimate& q1, const SignedMixtureEstimate& q2,
                      double epsilon, const KappaHatEngine& engine);

/// Finite-sample demixing: structurally the exact algorithm with
/// Residue -> residue_hat, FaceTest -> face_test_hat(..., 1/2^(n+1)) and
/// Dirichlet hull draws realized as weighted signed mixtures. The _from
/// variant starts from arbitrary ResidueHat estimates (used on reduced
/// instances); the plain variant starts from the raw source estimates.
EstimateBundle demix_hat_from(const std::vector<SignedMixtureEstimate>& inputs,
                              const KappaHatEngine& engine, std::uint64_t seed,
                              const DemixHatConfig& config = {});
EstimateBundle demix_hat(const KappaHatEngine& engine, std::uint64_t seed,
                         const DemixHatConfig& config = {});

struct VertexTestHatResult {
    bool accepted = false;
    std::vector<std::vector<int>> matrix;
};

/// Empirical vertex test: FaceContainHat(contaminated_j, Q_i | eps) plays the
/// support-containment role; the elimination rounds are identical to the
/// exact version. Never throws on mere rejection.
VertexTestHatResult vertex_test_hat(const PartialLabelMatrix& s,
                                    const std::vector<SignedMixtureEstimate>& contaminated,
                                    const std::vector<SignedMixtureEstimate>& q,
                                    double epsilon, const KappaHatEngine& engine);

struct PartialLabelHatResult {
    std::vector<SignedMixtureEstimate> estimates;  // index order
    int accepted_k = 0;
    std::vector<HatTraceRow> demix_trace;
};

/// DemixHat followed by vertex_test_hat at eps = 1/k for k = 2, 3, ... until
/// acceptance; returns the estimates permuted into index order. Requires (C)
/// and (D) on the label matrix (reduce first if (D) fails).
PartialLabelHatResult partial_label_hat_from(const PartialLabelMatrix& s,
                                             const std::vector<SignedMixtureEstimate>& contaminated,
                                             const KappaHatEngine& engine, std::uint64_t seed,
                                             const DemixHatConfig& config = {});
PartialLabelHatResult partial_label_hat(const PartialLabelMatrix& s,
                                        const KappaHatEngine& engine, std::uint64_t seed,
                                        const DemixHatConfig& config = {});

struct ConditionDReduction {
    // Rows x surviving columns; empty when every source resolved to a base.
    std::vector<std::vector<int>> reduced_label_rows;
    std::vector<SignedMixtureEstimate> reduced_estimates;
    std::vector<std::size_t> surviving_rows;
    std::vector<std::size_t> surviving_columns;
    std::vector<std::pair<std::size_t, SignedMixtureEstimate>> resolved;  // (base, estimate)
};

/// Peels pure rows (rows equal to a standard basis row): each remaining row
/// sharing the pure row's label is replaced by its ResidueHat against the
/// pure row's estimate and that label is zeroed. Repeats until no pure rows
/// remain; the surviving instance satisfies (D) on its face.
ConditionDReduction reduce_to_condition_D(const PartialLabelMatrix& s,
                                          const std::vector<SignedMixtureEstimate>& estimates,
                                          const KappaHatEngine& engine);

}  // namespace decon
