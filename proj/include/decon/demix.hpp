#pragma once

#include <cstdint>
#include <vector>

#include "decon/rng.hpp"
#include "decon/simplex.hpp"

namespace decon {

/// One recursion record of the exact demix loop: the data behind the
/// resampling-figure traces.
struct DemixTraceRow {
    int level = 0;        // recursion level, K at that level
    int n = 0;            // resampling index
    double nu = 0.0;      // (n - 1) / n
    bool verdict = false;  // FaceTest outcome for this n
    std::vector<std::vector<double>> residues;  // residues' mass vectors
};

struct DemixTrace {
    std::vector<DemixTraceRow> rows;
};

struct DemixResult {
    std::vector<SimplexPoint> bases;
    DemixTrace trace;
};

/// True iff Q_1..Q_K lie on the interior of the same face: every pairwise
/// residue R_ij = Residue(Q_i | Q_j) satisfies kappa*(Q_i | R_ij) < 1 - 1e-9.
bool face_test(const std::vector<SimplexPoint>& q);

/// Exact demixing. K = 2 returns the two mutual residues. K > 2 draws a
/// Dirichlet-uniform point Q of co(S_2..S_K), walks the resampling schedule
/// nu_n = (n-1)/n until the residues of m_nu(S_i, Q) wrt S_1 pass FaceTest,
/// recurses, then peels the remaining base with the sequential residue loop.
/// The iteration cap is 64 per level (ConvergenceError beyond it); linearly
/// dependent inputs raise AssumptionError.
DemixResult demix(const std::vector<SimplexPoint>& contaminated, std::uint64_t seed);

/// M > L case: draws L Dirichlet-uniform points of co(inputs) and demixes
/// those. L == M runs the same path; L > M is an InputError.
DemixResult nonsquare_demix(const std::vector<SimplexPoint>& contaminated, std::size_t l,
                            std::uint64_t seed);

}  // namespace decon
