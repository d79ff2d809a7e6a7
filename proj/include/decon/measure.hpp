#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "decon/errors.hpp"
#include "decon/simplex.hpp"

namespace decon {

/// An i.i.d. sample from one contaminated source: n points in R^d.
class EmpiricalDistribution {
public:
    EmpiricalDistribution(std::vector<double> points_row_major, std::size_t dim,
                          int source_index);

    std::size_t size() const { return n_; }
    std::size_t dim() const { return d_; }
    int source_index() const { return source_index_; }
    const double* data() const { return points_.data(); }
    const std::vector<double>& points() const { return points_; }

private:
    std::vector<double> points_;
    std::size_t n_ = 0;
    std::size_t d_ = 0;
    int source_index_ = 0;
};

/// Affine combination of the source samples: weights sum to 1 and may be
/// negative. The dependency set D(F) records which source samples the
/// estimate transitively relies on; it is carried explicitly so that weight
/// cancellation cannot shrink it.
class SignedMixtureEstimate {
public:
    SignedMixtureEstimate(std::vector<double> weights, std::vector<int> dependency_set);

    /// The trivial estimate: source i itself.
    static SignedMixtureEstimate source(std::size_t n_sources, int i);

    const std::vector<double>& weights() const { return weights_; }
    const std::vector<int>& dependency_set() const { return dependency_; }
    std::size_t n_sources() const { return weights_.size(); }

    /// (source index, weight) pairs over the dependency set.
    std::vector<std::pair<int, double>> components() const;

private:
    std::vector<double> weights_;
    std::vector<int> dependency_;  // sorted, unique
};

std::vector<int> union_of(const std::vector<int>& a, const std::vector<int>& b);

// ---------------------------------------------------------------------------
// Candidate sets

struct BallSet {
    std::vector<double> center;
    double radius = 0.0;  // open ball: |x - center|^2 < radius^2
};

struct RectSet {
    std::vector<double> lo;
    std::vector<double> hi;  // open box: lo < x < hi per axis
};

struct AtomSet {
    std::vector<std::uint32_t> atoms;  // sorted atom ids
};

using SetDescriptor = std::variant<BallSet, RectSet, AtomSet>;

enum class SetClass { balls, axis_rectangles, ratio_sublevel };

/// A finite, data-anchored family standing in for the VC class S. The true
/// class is a continuum; every infimum this library takes is over such a
/// finite family, which keeps results computable and deterministic.
struct CandidateSetList {
    SetClass kind = SetClass::balls;
    std::vector<SetDescriptor> sets;
    int vc_dimension = 1;
};

/// Balls: centers at pooled points, radii = distances to the other pooled
/// points, deterministically subsampled to <= cap by a seeded stride.
/// Axis rectangles (d <= 3): per-axis open intervals between data
/// coordinates, all products, same stride subsampling. Breakpoint lists are
/// rank-thinned to 512 per axis before pairing so index arithmetic stays in
/// 64 bits.
CandidateSetList build_candidates(SetClass kind, const std::vector<double>& pooled_points,
                                  std::size_t n, std::size_t dim, std::size_t cap,
                                  std::uint64_t seed);

/// Discrete engine: the A prefix sets of atoms sorted by the ratio of source
/// 0 mass to the mean mass of the remaining sources (ascending).
CandidateSetList build_candidates_sublevel(const std::vector<SimplexPoint>& sources,
                                           std::size_t cap);

/// All singleton atom sets {x}. Realizes every per-atom ratio, which makes
/// plug-in kappa estimates coincide with the exact engine.
CandidateSetList singleton_candidates(std::size_t n_atoms);

// ---------------------------------------------------------------------------
// Evaluation

double evaluate(const DiscreteDistribution& dist, const SetDescriptor& set);
double evaluate(const EmpiricalDistribution& dist, const SetDescriptor& set);

/// gamma(I) = sum_{i in I} 3 sqrt((V log(n_i + 1) + log(2 n_i)) / n_i),
/// the VC penalty with per-source confidence delta_i = 1/n_i.
double vc_penalty(const std::vector<int>& dependency_set,
                  const std::vector<std::size_t>& sample_sizes, int vc_dim);

// ---------------------------------------------------------------------------
// Datasets and the evaluation table

struct EmpiricalDataset {
    std::size_t dim = 0;
    std::vector<EmpiricalDistribution> sources;

    std::vector<double> pooled() const;
    std::size_t total_points() const;
};

struct DiscreteDataset {
    std::vector<std::string> atoms;
    std::vector<SimplexPoint> sources;
    std::vector<std::size_t> counts_total;  // per-source sample size (0 if exact)
};

/// Per-candidate, per-source masses, precomputed once: everything downstream
/// (kappa-hat scans, scoring) is dot products against these columns.
struct EvalTable {
    std::size_t n_candidates = 0;
    std::size_t n_sources = 0;
    std::vector<double> values;  // row-major [candidate][source]
    std::vector<std::size_t> sizes;
    int vc_dim = 1;

    double value(std::size_t c, std::size_t i) const { return values[c * n_sources + i]; }

    double evaluate(const SignedMixtureEstimate& e, std::size_t c) const {
        const double* row = values.data() + c * n_sources;
        double v = 0.0;
        for (std::size_t i = 0; i < n_sources; ++i) v += e.weights()[i] * row[i];
        return v;
    }
};

EvalTable build_eval_table(const EmpiricalDataset& data, const CandidateSetList& candidates,
                           unsigned workers);
EvalTable build_eval_table(const DiscreteDataset& data, const CandidateSetList& candidates);

}  // namespace decon
