#pragma once

#include <cstdint>
#include <vector>

#include "decon/simplex.hpp"

namespace decon {

/// Binary M x L matrix: row i marks which bases may contaminate source i.
class PartialLabelMatrix {
public:
    explicit PartialLabelMatrix(std::vector<std::vector<int>> entries);

    std::size_t rows() const { return entries_.size(); }
    std::size_t cols() const { return cols_; }
    int at(std::size_t i, std::size_t j) const { return entries_[i][j]; }
    const std::vector<int>& row(std::size_t i) const { return entries_[i]; }
    const std::vector<std::vector<int>>& entries() const { return entries_; }

private:
    std::vector<std::vector<int>> entries_;
    std::size_t cols_ = 0;
};

/// Condition (C): no two identical columns.
bool check_condition_C(const PartialLabelMatrix& s);

/// Condition (D): no row is a standard basis row (no source is pure).
bool check_condition_D(const PartialLabelMatrix& s);

/// Greedy running componentwise-min over rows, accepting a row's min only if
/// the running vector keeps at least one 1. With pairwise-distinct columns
/// the result has exactly one 1. All-zero input is an InputError.
std::vector<int> find_set(const std::vector<std::vector<int>>& b);

struct VertexTestResult {
    bool accepted = false;
    // The returned matrix C: when accepted, a permutation matrix with
    // C (Q_1..Q_L)^T = (P_1..P_L)^T in index order.
    std::vector<std::vector<int>> matrix;
};

/// Tests whether the candidates Q are a permutation of the bases behind the
/// contaminated sources, using only kappa* queries and the partial label
/// matrix. Stage 1 rejects any pair with kappa*(Q_i | Q_j) > 0; stage 2
/// intersects label rows along support containments kappa*(Ptilde_j | Q_i) > 0;
/// stage 3 runs L rounds of singleton-row column elimination.
VertexTestResult vertex_test(const PartialLabelMatrix& s,
                             const std::vector<SimplexPoint>& contaminated,
                             const std::vector<SimplexPoint>& candidates);

struct PartialLabelTraceRow {
    int k = 0;
    bool verdict = false;
    std::vector<std::vector<double>> candidates;  // W_1..W_L at this k
};

struct PartialLabelResult {
    std::vector<SimplexPoint> bases;  // P_1..P_L in index order
    int accepted_k = 0;
    std::vector<PartialLabelTraceRow> trace;
};

/// Exact partial-label decontamination (requires (A'), (B'), (C) for the
/// guarantee). Draws Q_1..Q_L Dirichlet-uniform in co(contaminated), then for
/// k = 2, 3, ... rebuilds each W_i as the multi-sample residue of
/// (1/k) Q_i + (1 - 1/k) Qbar_i against {Q_j}_{j>i} and {W_j}_{j<i} until
/// vertex_test accepts. Cap 64 on k (ConvergenceError).
PartialLabelResult partial_label(const PartialLabelMatrix& s,
                                 const std::vector<SimplexPoint>& contaminated,
                                 std::uint64_t seed);

/// result_i = sum_j C_ij q_j for a binary matrix C from vertex_test.
std::vector<SimplexPoint> apply_permutation(const std::vector<std::vector<int>>& c,
                                            const std::vector<SimplexPoint>& q);

}  // namespace decon
