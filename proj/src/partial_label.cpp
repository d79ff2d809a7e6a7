#include "decon/partial_label.hpp"

#include <algorithm>

#include "decon/errors.hpp"
#include "decon/kappa.hpp"
#include "decon/rng.hpp"

namespace decon {

namespace {

constexpr double kKappaPositiveTol = 1e-9;
constexpr int kPartialLabelCap = 64;

/// kappa*(f | h) > 0 with the strict-positivity tolerance; equality of the
/// operands counts as kappa = 1.
bool kappa_positive(const SimplexPoint& f, const SimplexPoint& h) {
    if (linf_distance(f, h) <= kDistinctTol) return true;
    return kappa_two_exact(f, h).kappa > kKappaPositiveTol;
}

bool is_permutation_matrix(const std::vector<std::vector<int>>& m) {
    const std::size_t l = m.size();
    std::vector<int> col_count(l, 0);
    for (std::size_t i = 0; i < l; ++i) {
        int row_count = 0;
        for (std::size_t j = 0; j < l; ++j) {
            if (m[i][j] != 0) {
                ++row_count;
                ++col_count[j];
            }
        }
        if (row_count != 1) return false;
    }
    for (std::size_t j = 0; j < l; ++j)
        if (col_count[j] != 1) return false;
    return true;
}

std::vector<std::vector<int>> identity_matrix(std::size_t l) {
    std::vector<std::vector<int>> m(l, std::vector<int>(l, 0));
    for (std::size_t i = 0; i < l; ++i) m[i][i] = 1;
    return m;
}

}  // namespace

PartialLabelMatrix::PartialLabelMatrix(std::vector<std::vector<int>> entries)
    : entries_(std::move(entries)) {
    if (entries_.empty()) throw InputError("partial label matrix: no rows");
    cols_ = entries_[0].size();
    if (cols_ == 0) throw InputError("partial label matrix: no columns");
    for (const auto& row : entries_) {
        if (row.size() != cols_) throw InputError("partial label matrix: ragged rows");
        int ones = 0;
        for (int v : row) {
            if (v != 0 && v != 1) throw InputError("partial label matrix: entries must be 0/1");
            ones += v;
        }
        if (ones == 0) throw InputError("partial label matrix: every row needs at least one 1");
    }
}

bool check_condition_C(const PartialLabelMatrix& s) {
    for (std::size_t a = 0; a < s.cols(); ++a) {
        for (std::size_t b = a + 1; b < s.cols(); ++b) {
            bool equal = true;
            for (std::size_t i = 0; i < s.rows() && equal; ++i)
                equal = (s.at(i, a) == s.at(i, b));
            if (equal) return false;
        }
    }
    return true;
}

bool check_condition_D(const PartialLabelMatrix& s) {
    for (std::size_t i = 0; i < s.rows(); ++i) {
        int ones = 0;
        for (std::size_t j = 0; j < s.cols(); ++j) ones += s.at(i, j);
        if (ones == 1) return false;
    }
    return true;
}

std::vector<int> find_set(const std::vector<std::vector<int>>& b) {
    if (b.empty() || b[0].empty()) throw InputError("find_set: empty matrix");
    const std::size_t cols = b[0].size();
    std::size_t first = b.size();
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i].size() != cols) throw InputError("find_set: ragged rows");
        int ones = 0;
        for (int v : b[i]) ones += v;
        if (ones > 0 && first == b.size()) first = i;
    }
    if (first == b.size()) throw InputError("find_set: all-zero matrix");

    std::vector<int> v = b[first];
    for (std::size_t k = 0; k < b.size(); ++k) {
        if (k == first) continue;
        std::vector<int> candidate(cols);
        int ones = 0;
        for (std::size_t j = 0; j < cols; ++j) {
            candidate[j] = std::min(v[j], b[k][j]);
            ones += candidate[j];
        }
        if (ones >= 1) v = std::move(candidate);
    }
    return v;
}

VertexTestResult vertex_test(const PartialLabelMatrix& s,
                             const std::vector<SimplexPoint>& contaminated,
                             const std::vector<SimplexPoint>& candidates) {
    const std::size_t l = candidates.size();
    if (contaminated.size() != s.rows() || s.cols() != l)
        throw InputError("vertex_test: label matrix shape mismatch");

    // Stage 1: a permutation of the bases is pairwise mutually irreducible.
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < l; ++j)
            if (i != j && kappa_positive(candidates[i], candidates[j]))
                return {false, identity_matrix(l)};

    // Stage 2: intersect label rows along support containments.
    std::vector<std::vector<int>> c(l, std::vector<int>(l, 1));
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < contaminated.size(); ++j)
            if (kappa_positive(contaminated[j], candidates[i]))
                for (std::size_t col = 0; col < l; ++col)
                    c[i][col] = std::min(c[i][col], s.at(j, col));

    // Stage 3: L rounds of singleton-row column elimination.
    for (std::size_t round = 0; round < l; ++round) {
        for (std::size_t i = 0; i < l; ++i) {
            int ones = 0;
            std::size_t j = 0;
            for (std::size_t col = 0; col < l; ++col) {
                if (c[i][col] != 0) {
                    ++ones;
                    j = col;
                }
            }
            if (ones == 1)
                for (std::size_t row = 0; row < l; ++row) c[row][j] = (row == i) ? 1 : 0;
        }
    }

    VertexTestResult out;
    out.accepted = is_permutation_matrix(c);
    out.matrix.assign(l, std::vector<int>(l, 0));
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < l; ++j) out.matrix[j][i] = c[i][j];
    return out;
}

std::vector<SimplexPoint> apply_permutation(const std::vector<std::vector<int>>& c,
                                            const std::vector<SimplexPoint>& q) {
    std::vector<SimplexPoint> out;
    out.reserve(c.size());
    for (const auto& row : c) {
        std::size_t pick = row.size();
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j] != 0) pick = j;
        if (pick == row.size()) throw InputError("apply_permutation: zero row");
        out.push_back(q.at(pick));
    }
    return out;
}

PartialLabelResult partial_label(const PartialLabelMatrix& s,
                                 const std::vector<SimplexPoint>& contaminated,
                                 std::uint64_t seed) {
    const std::size_t l = contaminated.size();
    if (l < 2) throw InputError("partial_label: need at least 2 sources");
    if (s.rows() != l || s.cols() != l)
        throw InputError("partial_label: expected a square label matrix");
    if (!check_condition_C(s))
        throw InputError("partial_label: label matrix has identical columns (condition C)");

    Rng rng(seed);
    std::vector<SimplexPoint> q;
    q.reserve(l);
    for (std::size_t i = 0; i < l; ++i)
        q.push_back(convex_combination(contaminated, rng.dirichlet_uniform(l)));
    std::vector<SimplexPoint> w = q;

    PartialLabelResult result;
    for (int k = 2;; ++k) {
        if (k > kPartialLabelCap)
            throw ConvergenceError("partial_label: vertex test did not accept within the cap");
        for (std::size_t i = 0; i < l; ++i) {
            std::vector<SimplexPoint> pool;
            pool.reserve(l - 1);
            for (std::size_t j = i + 1; j < l; ++j) pool.push_back(q[j]);
            for (std::size_t j = 0; j < i; ++j) pool.push_back(w[j]);
            const SimplexPoint q_bar = mean_of(pool);
            const SimplexPoint target = mix(q[i], q_bar, 1.0 - 1.0 / static_cast<double>(k));
            w[i] = kappa_multi_exact(target, pool).residue;
        }
        const VertexTestResult vt = vertex_test(s, contaminated, w);

        PartialLabelTraceRow row;
        row.k = k;
        row.verdict = vt.accepted;
        for (const auto& wi : w) row.candidates.push_back(wi.mass());
        result.trace.push_back(std::move(row));

        if (vt.accepted) {
            result.bases = apply_permutation(vt.matrix, w);
            result.accepted_k = k;
            return result;
        }
    }
}

}  // namespace decon
