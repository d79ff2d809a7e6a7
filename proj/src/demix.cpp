#include "decon/demix.hpp"

#include <Eigen/Dense>

#include "decon/errors.hpp"
#include "decon/kappa.hpp"

namespace decon {

namespace {

constexpr int kResampleCap = 64;

bool rows_linearly_independent(const std::vector<SimplexPoint>& points) {
    const std::size_t k = points.size();
    const std::size_t dim = points[0].size();
    if (k > dim) return false;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = points[i][j];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(static_cast<Eigen::Index>(k) - 1) > 1e-10;
}

void demix_recurse(const std::vector<SimplexPoint>& s, int level, Rng& rng, DemixTrace& trace,
                   std::vector<SimplexPoint>& out) {
    const std::size_t k = s.size();
    if (k == 2) {
        out.push_back(residue_exact(s[0], s[1]));
        out.push_back(residue_exact(s[1], s[0]));
        return;
    }

    std::vector<SimplexPoint> tail(s.begin() + 1, s.end());
    const SimplexPoint q = convex_combination(tail, rng.dirichlet_uniform(k - 1));

    std::vector<SimplexPoint> residues(k - 1);
    int n = 1;
    bool passed = false;
    while (!passed) {
        ++n;
        if (n > kResampleCap)
            throw ConvergenceError("demix: FaceTest did not pass within the resampling cap");
        const double nu = static_cast<double>(n - 1) / static_cast<double>(n);
        for (std::size_t i = 1; i < k; ++i)
            residues[i - 1] = residue_exact(mix(s[i], q, nu), s[0]);
        passed = face_test(residues);

        DemixTraceRow row;
        row.level = level;
        row.n = n;
        row.nu = nu;
        row.verdict = passed;
        for (const auto& r : residues) row.residues.push_back(r.mass());
        trace.rows.push_back(std::move(row));
    }

    std::vector<SimplexPoint> inner;
    demix_recurse(residues, level + 1, rng, trace, inner);

    SimplexPoint last = mean_of(s);
    for (std::size_t i = 0; i + 1 < k; ++i) last = residue_exact(last, inner[i]);

    out = std::move(inner);
    out.push_back(std::move(last));
}

}  // namespace

bool face_test(const std::vector<SimplexPoint>& q) {
    const std::size_t k = q.size();
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            if (linf_distance(q[i], q[j]) <= kDistinctTol)
                throw DegenerateError("face_test: inputs must be pairwise distinct");
            const SimplexPoint r = residue_exact(q[i], q[j]);
            if (linf_distance(q[i], r) <= kDistinctTol) return false;  // residue equals Q_i
            if (kappa_two_exact(q[i], r).kappa >= 1.0 - kKappaOneTol) return false;
        }
    }
    return true;
}

DemixResult demix(const std::vector<SimplexPoint>& contaminated, std::uint64_t seed) {
    const std::size_t k = contaminated.size();
    if (k < 2) throw InputError("demix: need at least 2 contaminated distributions");
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (linf_distance(contaminated[i], contaminated[j]) <= kDistinctTol)
                throw InputError("demix: inputs must be pairwise distinct");
    if (!rows_linearly_independent(contaminated))
        throw AssumptionError("demix: contaminated distributions are rank-deficient");

    Rng rng(seed);
    DemixResult result;
    demix_recurse(contaminated, 0, rng, result.trace, result.bases);
    return result;
}

DemixResult nonsquare_demix(const std::vector<SimplexPoint>& contaminated, std::size_t l,
                            std::uint64_t seed) {
    if (l > contaminated.size())
        throw InputError("nonsquare_demix: L exceeds the number of contaminated sources");
    if (l < 2) throw InputError("nonsquare_demix: L must be >= 2");
    Rng rng(seed);
    std::vector<SimplexPoint> resampled;
    resampled.reserve(l);
    for (std::size_t i = 0; i < l; ++i)
        resampled.push_back(
            convex_combination(contaminated, rng.dirichlet_uniform(contaminated.size())));
    const std::uint64_t inner_seed = rng.next_u64();
    return demix(resampled, inner_seed);
}

}  // namespace decon
