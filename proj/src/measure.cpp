#include "decon/measure.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "decon/kernels.hpp"
#include "decon/parallel.hpp"
#include "decon/rng.hpp"

namespace decon {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> points_row_major,
                                             std::size_t dim, int source_index)
    : points_(std::move(points_row_major)), d_(dim), source_index_(source_index) {
    if (d_ == 0) throw InputError("empirical distribution: dim must be positive");
    if (points_.empty() || points_.size() % d_ != 0)
        throw InputError("empirical distribution: need at least one full point");
    n_ = points_.size() / d_;
    for (double v : points_)
        if (!std::isfinite(v)) throw InputError("empirical distribution: non-finite point");
}

SignedMixtureEstimate::SignedMixtureEstimate(std::vector<double> weights,
                                             std::vector<int> dependency_set)
    : weights_(std::move(weights)), dependency_(std::move(dependency_set)) {
    double sum = 0.0;
    for (double w : weights_) sum += w;
    if (std::fabs(sum - 1.0) > 1e-9)
        throw InputError("signed mixture weights must sum to 1 within 1e-9");
    std::sort(dependency_.begin(), dependency_.end());
    dependency_.erase(std::unique(dependency_.begin(), dependency_.end()), dependency_.end());
    for (int i : dependency_)
        if (i < 0 || static_cast<std::size_t>(i) >= weights_.size())
            throw InputError("dependency set index out of range");
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (weights_[i] != 0.0 &&
            !std::binary_search(dependency_.begin(), dependency_.end(), static_cast<int>(i)))
            throw InputError("nonzero weight outside the dependency set");
    }
}

SignedMixtureEstimate SignedMixtureEstimate::source(std::size_t n_sources, int i) {
    std::vector<double> w(n_sources, 0.0);
    w.at(static_cast<std::size_t>(i)) = 1.0;
    return SignedMixtureEstimate(std::move(w), {i});
}

std::vector<std::pair<int, double>> SignedMixtureEstimate::components() const {
    std::vector<std::pair<int, double>> out;
    out.reserve(dependency_.size());
    for (int i : dependency_) out.emplace_back(i, weights_[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<int> union_of(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// ---------------------------------------------------------------------------
// Candidate construction

namespace {

// Exactly `take` strided indices out of [0, total), all distinct, starting at
// a seeded offset. floor(t * total / take) increments by at least 1.
std::vector<std::uint64_t> stride_sample(std::uint64_t total, std::uint64_t take,
                                         std::uint64_t seed) {
    std::vector<std::uint64_t> idx;
    idx.reserve(take);
    if (total <= take) {
        for (std::uint64_t k = 0; k < total; ++k) idx.push_back(k);
        return idx;
    }
    Rng rng(seed);
    const std::uint64_t offset = rng.uniform_index(total);
    for (std::uint64_t t = 0; t < take; ++t) {
        const auto step = static_cast<std::uint64_t>(
            (static_cast<__uint128_t>(t) * total) / take);
        std::uint64_t k = offset + step;
        if (k >= total) k -= total;
        idx.push_back(k);
    }
    std::sort(idx.begin(), idx.end());
    return idx;
}

// Rank-thin a sorted list to at most `limit` values, keeping the extremes.
std::vector<double> thin_breakpoints(std::vector<double> sorted_unique, std::size_t limit) {
    if (sorted_unique.size() <= limit) return sorted_unique;
    std::vector<double> out;
    out.reserve(limit);
    const std::size_t n = sorted_unique.size();
    for (std::size_t t = 0; t < limit; ++t)
        out.push_back(sorted_unique[(t * (n - 1)) / (limit - 1)]);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Decode triangular pair index p in [0, B(B-1)/2) to (l, h) with l < h.
std::pair<std::size_t, std::size_t> decode_interval(std::uint64_t p, std::size_t b) {
    std::size_t lo = 0, hi = b - 1;  // candidate l in [0, b-2]
    auto cum = [b](std::size_t l) {  // pairs with first index < l
        return static_cast<std::uint64_t>(l) * b - l - (static_cast<std::uint64_t>(l) * (l - 1)) / 2;
    };
    while (lo + 1 < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (cum(mid) <= p)
            lo = mid;
        else
            hi = mid;
    }
    const std::size_t l = (cum(hi) <= p) ? hi : lo;
    const auto h = static_cast<std::size_t>(p - cum(l)) + l + 1;
    return {l, h};
}

double sq_distance(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        const double dx = a[k] - b[k];
        s += dx * dx;
    }
    return s;
}

}  // namespace

CandidateSetList build_candidates(SetClass kind, const std::vector<double>& pooled_points,
                                  std::size_t n, std::size_t dim, std::size_t cap,
                                  std::uint64_t seed) {
    if (n < 2) throw InputError("build_candidates: need at least 2 pooled points");
    if (cap < n) throw InputError("build_candidates: cap must be >= number of points");
    if (pooled_points.size() != n * dim)
        throw InputError("build_candidates: pooled point buffer size mismatch");

    CandidateSetList out;
    out.kind = kind;

    if (kind == SetClass::balls) {
        out.vc_dimension = static_cast<int>(dim) + 1;
        const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1);
        const auto picks = stride_sample(total, cap, seed);
        out.sets.reserve(picks.size());
        for (std::uint64_t k : picks) {
            const std::size_t i = static_cast<std::size_t>(k / (n - 1));
            std::size_t j = static_cast<std::size_t>(k % (n - 1));
            if (j >= i) ++j;
            BallSet ball;
            ball.center.assign(pooled_points.begin() + static_cast<std::ptrdiff_t>(i * dim),
                               pooled_points.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim));
            ball.radius = std::sqrt(
                sq_distance(pooled_points.data() + i * dim, pooled_points.data() + j * dim, dim));
            out.sets.emplace_back(std::move(ball));
        }
        return out;
    }

    if (kind == SetClass::axis_rectangles) {
        if (dim > 3) throw UnsupportedError("axis rectangles supported only for d <= 3");
        out.vc_dimension = 2 * static_cast<int>(dim);
        std::vector<std::vector<double>> axis(dim);
        for (std::size_t a = 0; a < dim; ++a) {
            std::vector<double> coords(n);
            for (std::size_t i = 0; i < n; ++i) coords[i] = pooled_points[i * dim + a];
            std::sort(coords.begin(), coords.end());
            coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
            axis[a] = thin_breakpoints(std::move(coords), 512);
            if (axis[a].size() < 2)
                throw InputError("axis rectangles: axis has a single distinct coordinate");
        }
        std::uint64_t total = 1;
        std::vector<std::uint64_t> per_axis(dim);
        for (std::size_t a = 0; a < dim; ++a) {
            const std::uint64_t b = axis[a].size();
            per_axis[a] = b * (b - 1) / 2;
            total *= per_axis[a];
        }
        const auto picks = stride_sample(total, cap, seed);
        out.sets.reserve(picks.size());
        for (std::uint64_t k : picks) {
            RectSet rect;
            rect.lo.resize(dim);
            rect.hi.resize(dim);
            std::uint64_t rest = k;
            for (std::size_t a = 0; a < dim; ++a) {
                const std::uint64_t p = rest % per_axis[a];
                rest /= per_axis[a];
                const auto [l, h] = decode_interval(p, axis[a].size());
                rect.lo[a] = axis[a][l];
                rect.hi[a] = axis[a][h];
            }
            out.sets.emplace_back(std::move(rect));
        }
        return out;
    }

    throw InputError("build_candidates: ratio_sublevel requires the discrete overload");
}

CandidateSetList build_candidates_sublevel(const std::vector<SimplexPoint>& sources,
                                           std::size_t cap) {
    if (sources.empty()) throw InputError("sublevel candidates: no sources");
    const std::size_t a_count = sources[0].size();
    if (a_count < 2) throw InputError("sublevel candidates: need at least 2 atoms");
    if (cap < a_count) throw InputError("sublevel candidates: cap must be >= atom count");
    for (const auto& s : sources)
        if (s.size() != a_count) throw InputError("sublevel candidates: atom count mismatch");

    std::vector<double> rest(a_count, 0.0);
    for (std::size_t s = 1; s < sources.size(); ++s)
        for (std::size_t x = 0; x < a_count; ++x) rest[x] += sources[s][x];
    if (sources.size() > 1)
        for (auto& v : rest) v /= static_cast<double>(sources.size() - 1);

    std::vector<std::uint32_t> order(a_count);
    for (std::size_t x = 0; x < a_count; ++x) order[x] = static_cast<std::uint32_t>(x);
    // Ascending mass ratio sources[0][x] / rest[x], zeros-safe cross product.
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
        const double lhs = sources[0][x] * rest[y];
        const double rhs = sources[0][y] * rest[x];
        if (lhs != rhs) return lhs < rhs;
        return x < y;
    });

    CandidateSetList out;
    out.kind = SetClass::ratio_sublevel;
    out.vc_dimension = 1;  // nested chain
    out.sets.reserve(a_count);
    std::vector<std::uint32_t> prefix;
    for (std::uint32_t x : order) {
        prefix.push_back(x);
        AtomSet s;
        s.atoms = prefix;
        std::sort(s.atoms.begin(), s.atoms.end());
        out.sets.emplace_back(std::move(s));
    }
    return out;
}

CandidateSetList singleton_candidates(std::size_t n_atoms) {
    CandidateSetList out;
    out.kind = SetClass::ratio_sublevel;
    out.vc_dimension = 1;
    out.sets.reserve(n_atoms);
    for (std::size_t x = 0; x < n_atoms; ++x)
        out.sets.emplace_back(AtomSet{{static_cast<std::uint32_t>(x)}});
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

double evaluate(const DiscreteDistribution& dist, const SetDescriptor& set) {
    const auto* atoms = std::get_if<AtomSet>(&set);
    if (atoms == nullptr)
        throw InputError("discrete distribution evaluated on a continuous set descriptor");
    double mass = 0.0;
    for (std::uint32_t x : atoms->atoms) {
        if (x >= dist.size()) throw InputError("atom id out of range");
        mass += dist[x];
    }
    return mass;
}

double evaluate(const EmpiricalDistribution& dist, const SetDescriptor& set) {
    if (const auto* ball = std::get_if<BallSet>(&set)) {
        if (ball->center.size() != dist.dim())
            throw InputError("ball dimension does not match points");
        const std::size_t c = kernels::count_in_ball(dist.data(), dist.size(), dist.dim(),
                                                     ball->center.data(),
                                                     ball->radius * ball->radius);
        return static_cast<double>(c) / static_cast<double>(dist.size());
    }
    if (const auto* rect = std::get_if<RectSet>(&set)) {
        if (rect->lo.size() != dist.dim() || rect->hi.size() != dist.dim())
            throw InputError("rectangle dimension does not match points");
        const std::size_t c = kernels::count_in_rect(dist.data(), dist.size(), dist.dim(),
                                                     rect->lo.data(), rect->hi.data());
        return static_cast<double>(c) / static_cast<double>(dist.size());
    }
    throw InputError("empirical distribution evaluated on an atom-set descriptor");
}

double vc_penalty(const std::vector<int>& dependency_set,
                  const std::vector<std::size_t>& sample_sizes, int vc_dim) {
    if (vc_dim < 1) throw InputError("vc_penalty: V must be >= 1");
    double total = 0.0;
    for (int i : dependency_set) {
        if (i < 0 || static_cast<std::size_t>(i) >= sample_sizes.size())
            throw InputError("vc_penalty: dependency index out of range");
        const auto n = static_cast<double>(sample_sizes[static_cast<std::size_t>(i)]);
        if (n < 1.0) throw InputError("vc_penalty: sample sizes must be >= 1");
        total += 3.0 * std::sqrt((vc_dim * std::log(n + 1.0) + std::log(2.0 * n)) / n);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Datasets / eval table

std::vector<double> EmpiricalDataset::pooled() const {
    std::vector<double> all;
    all.reserve(total_points() * dim);
    for (const auto& s : sources) all.insert(all.end(), s.points().begin(), s.points().end());
    return all;
}

std::size_t EmpiricalDataset::total_points() const {
    std::size_t n = 0;
    for (const auto& s : sources) n += s.size();
    return n;
}

EvalTable build_eval_table(const EmpiricalDataset& data, const CandidateSetList& candidates,
                           unsigned workers) {
    EvalTable table;
    table.n_candidates = candidates.sets.size();
    table.n_sources = data.sources.size();
    table.vc_dim = candidates.vc_dimension;
    table.values.assign(table.n_candidates * table.n_sources, 0.0);
    table.sizes.reserve(table.n_sources);
    for (const auto& s : data.sources) table.sizes.push_back(s.size());

    // Each candidate's counts land in dedicated slots, so the result does not
    // depend on how candidates are partitioned across workers.
    parallel_for(table.n_candidates, workers,
                 [&](std::size_t begin, std::size_t end, std::size_t) {
                     for (std::size_t c = begin; c < end; ++c)
                         for (std::size_t i = 0; i < table.n_sources; ++i)
                             table.values[c * table.n_sources + i] =
                                 evaluate(data.sources[i], candidates.sets[c]);
                 });
    return table;
}

EvalTable build_eval_table(const DiscreteDataset& data, const CandidateSetList& candidates) {
    EvalTable table;
    table.n_candidates = candidates.sets.size();
    table.n_sources = data.sources.size();
    table.vc_dim = candidates.vc_dimension;
    table.values.assign(table.n_candidates * table.n_sources, 0.0);
    for (std::size_t i = 0; i < data.sources.size(); ++i) {
        const std::size_t n = i < data.counts_total.size() ? data.counts_total[i] : 0;
        table.sizes.push_back(n > 0 ? n : 1);
    }
    for (std::size_t c = 0; c < table.n_candidates; ++c)
        for (std::size_t i = 0; i < table.n_sources; ++i)
            table.values[c * table.n_sources + i] = evaluate(data.sources[i], candidates.sets[c]);
    return table;
}

}  // namespace decon
