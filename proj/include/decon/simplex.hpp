#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "decon/errors.hpp"

namespace decon {

inline constexpr double kSimplexSumTol = 1e-12;
inline constexpr double kSimplexNegTol = -1e-12;

/// A point of a probability simplex: entries >= 0 summing to 1.
///
/// The same representation backs both domain types of the exact engine:
/// a mixture proportion (entry j = coefficient of base j) and a discrete
/// distribution (entry a = mass of atom a). Construction clamps entries in
/// [-1e-12, 0) to zero and rejects anything worse.
class SimplexPoint {
public:
    SimplexPoint() = default;

    explicit SimplexPoint(std::vector<double> mass) : mass_(std::move(mass)) {
        double sum = 0.0;
        for (auto& m : mass_) {
            if (m < 0.0) {
                if (m < kSimplexNegTol) throw InputError("simplex entry below -1e-12");
                m = 0.0;
            }
            sum += m;
        }
        if (sum < 1.0 - kSimplexSumTol || sum > 1.0 + kSimplexSumTol)
            throw InputError("simplex entries must sum to 1 within 1e-12");
    }

    /// Rescale a nonnegative vector to sum exactly 1 (used after residue
    /// clamping, where arithmetic noise perturbs the sum).
    static SimplexPoint normalized(std::vector<double> mass) {
        double sum = 0.0;
        for (auto& m : mass) {
            if (m < 0.0) {
                if (m < kSimplexNegTol) throw InputError("simplex entry below -1e-12");
                m = 0.0;
            }
            sum += m;
        }
        if (sum <= 0.0) throw InputError("cannot normalize a zero vector");
        for (auto& m : mass) m /= sum;
        SimplexPoint p;
        p.mass_ = std::move(mass);
        return p;
    }

    static SimplexPoint unit(std::size_t dim, std::size_t index) {
        std::vector<double> m(dim, 0.0);
        m.at(index) = 1.0;
        SimplexPoint p;
        p.mass_ = std::move(m);
        return p;
    }

    std::size_t size() const { return mass_.size(); }
    double operator[](std::size_t i) const { return mass_[i]; }
    const std::vector<double>& mass() const { return mass_; }
    std::span<const double> span() const { return mass_; }

    /// Indices of strictly positive entries above tol.
    std::vector<std::size_t> support(double tol = 1e-9) const {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < mass_.size(); ++i)
            if (mass_[i] > tol) s.push_back(i);
        return s;
    }

    double min_entry() const {
        double m = mass_.empty() ? 0.0 : mass_[0];
        for (double v : mass_)
            if (v < m) m = v;
        return m;
    }

private:
    std::vector<double> mass_;
};

using MixtureProportion = SimplexPoint;
using DiscreteDistribution = SimplexPoint;

inline double linf_distance(const SimplexPoint& a, const SimplexPoint& b) {
    if (a.size() != b.size()) throw InputError("dimension mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double v = a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
        if (v > d) d = v;
    }
    return d;
}

/// m_nu(a, b) = (1-nu) a + nu b, the resampling map.
inline SimplexPoint mix(const SimplexPoint& a, const SimplexPoint& b, double nu) {
    if (a.size() != b.size()) throw InputError("dimension mismatch");
    std::vector<double> m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) m[i] = (1.0 - nu) * a[i] + nu * b[i];
    return SimplexPoint::normalized(std::move(m));
}

/// Convex combination sum_i w[i] points[i]; w must be a simplex point itself.
inline SimplexPoint convex_combination(const std::vector<SimplexPoint>& points,
                                       std::span<const double> w) {
    if (points.empty() || points.size() != w.size())
        throw InputError("convex_combination: size mismatch");
    std::vector<double> m(points[0].size(), 0.0);
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (points[k].size() != m.size()) throw InputError("dimension mismatch");
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += w[k] * points[k][i];
    }
    return SimplexPoint::normalized(std::move(m));
}

inline SimplexPoint mean_of(const std::vector<SimplexPoint>& points) {
    std::vector<double> w(points.size(), 1.0 / static_cast<double>(points.size()));
    return convex_combination(points, w);
}

}  // namespace decon
