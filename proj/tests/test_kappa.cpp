#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "decon/kappa.hpp"
#include "decon/measure.hpp"
#include "decon/rng.hpp"
#include "oracles.hpp"

using namespace decon;

TEST_CASE("two-sample kappa on pinned cases") {
    SUBCASE("disjoint supports") {
        const SimplexPoint f = SimplexPoint::unit(2, 0);
        const SimplexPoint h = SimplexPoint::unit(2, 1);
        const auto r = kappa_two_exact(f, h);
        CHECK(r.kappa == 0.0);
        CHECK(linf_distance(r.residue, f) == 0.0);
    }
    SUBCASE("half mass overlap") {
        const auto r = kappa_two_exact(SimplexPoint({0.5, 0.5}), SimplexPoint({1.0, 0.0}));
        CHECK(r.kappa == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(r.residue[0] == doctest::Approx(0.0));
        CHECK(r.residue[1] == doctest::Approx(1.0));
    }
    SUBCASE("2/7 case against the subset brute force") {
        const SimplexPoint f({0.8, 0.2});
        const SimplexPoint h({0.3, 0.7});
        const auto r = kappa_two_exact(f, h);
        CHECK(r.kappa == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
        CHECK(r.kappa == doctest::Approx(oracles::kappa_subset_bruteforce(f, h)).epsilon(1e-12));
        CHECK(r.residue[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.residue[1] == doctest::Approx(0.0));
    }
    SUBCASE("equal inputs rejected") {
        const SimplexPoint f({0.4, 0.6});
        CHECK_THROWS_AS(kappa_two_exact(f, f), DegenerateError);
    }
}

TEST_CASE("two-sample kappa matches subset brute force on random pairs") {
    Rng rng(1001);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t atoms = 2 + rng.uniform_index(11);  // up to 12
        const auto f = oracles::random_simplex_point(rng, atoms);
        const auto h = oracles::random_simplex_point(rng, atoms);
        if (linf_distance(f, h) <= 1e-12) continue;
        CHECK(kappa_two_exact(f, h).kappa ==
              doctest::Approx(oracles::kappa_subset_bruteforce(f, h)).epsilon(1e-9));
    }
}

TEST_CASE("residue reconstruction identity") {
    SUBCASE("pinned case verifies (1-k)G + kH == F") {
        const SimplexPoint f({0.5, 0.5});
        const SimplexPoint h({1.0, 0.0});
        const auto r = kappa_two_exact(f, h);
        for (std::size_t x = 0; x < 2; ++x)
            CHECK((1.0 - r.kappa) * r.residue[x] + r.kappa * h[x] ==
                  doctest::Approx(f[x]).epsilon(1e-12));
    }
    SUBCASE("property over 1000 random pairs, L in 2..6") {
        Rng rng(77);
        int done = 0;
        while (done < 1000) {
            const std::size_t dim = 2 + rng.uniform_index(5);
            const auto f = oracles::random_simplex_point(rng, dim);
            const auto h = oracles::random_simplex_point(rng, dim);
            if (linf_distance(f, h) <= 1e-9) continue;
            const auto r = kappa_two_exact(f, h);
            for (std::size_t x = 0; x < dim; ++x)
                CHECK((1.0 - r.kappa) * r.residue[x] + r.kappa * h[x] ==
                      doctest::Approx(f[x]).epsilon(5e-11));
            // boundary law: residues sit on the simplex boundary
            CHECK(r.residue.min_entry() <= 1e-9);
            ++done;
        }
    }
}

TEST_CASE("support criterion: kappa zero iff support(H) escapes support(F)") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t dim = 3 + rng.uniform_index(4);
        auto f_mass = rng.dirichlet_uniform(dim);
        f_mass[rng.uniform_index(dim)] = 0.0;  // punch a hole in F's support
        const auto f = SimplexPoint::normalized(std::move(f_mass));
        const auto h = oracles::random_simplex_point(rng, dim);  // full support a.s.
        if (linf_distance(f, h) <= 1e-12) continue;
        const auto supp_f = f.support(1e-12);
        const auto supp_h = h.support(1e-12);
        const bool contained =
            std::includes(supp_f.begin(), supp_f.end(), supp_h.begin(), supp_h.end());
        const double kappa = kappa_two_exact(f, h).kappa;
        if (contained)
            CHECK(kappa > 1e-9);
        else
            CHECK(kappa <= 1e-9);
    }
}

TEST_CASE("multi-sample kappa pinned cases") {
    SUBCASE("uniform against two vertices") {
        const SimplexPoint f0({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
        const std::vector<SimplexPoint> others = {SimplexPoint::unit(3, 1),
                                                  SimplexPoint::unit(3, 2)};
        const auto r = kappa_multi_exact(f0, others);
        CHECK(r.kappa == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
        REQUIRE(r.nus.size() == 2);
        CHECK(r.nus[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
        CHECK(r.nus[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
        CHECK(r.residue[0] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.kappa ==
              doctest::Approx(oracles::kappa_multi_lattice(f0, others)).epsilon(2e-3));
    }
    SUBCASE("vertex against another vertex") {
        const auto r = kappa_multi_exact(SimplexPoint::unit(3, 0), {SimplexPoint::unit(3, 1)});
        CHECK(r.kappa == 0.0);
        CHECK(r.residue[0] == doctest::Approx(1.0));
    }
}

TEST_CASE("multi-sample kappa: nus sum to kappa and residue reconstructs") {
    Rng rng(555);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = 3 + rng.uniform_index(3);
        const std::size_t k = 1 + rng.uniform_index(3);
        const auto f0 = oracles::random_simplex_point(rng, dim);
        std::vector<SimplexPoint> others;
        for (std::size_t j = 0; j < k; ++j)
            others.push_back(oracles::random_simplex_point(rng, dim));
        const auto r = kappa_multi_exact(f0, others);
        double total = 0.0;
        for (double nu : r.nus) {
            CHECK(nu >= 0.0);
            total += nu;
        }
        CHECK(std::min(total, 1.0) == doctest::Approx(r.kappa).epsilon(1e-9));
        if (r.kappa < 1.0 - 1e-9) {
            for (std::size_t x = 0; x < dim; ++x) {
                double mixed = (1.0 - total) * r.residue[x];
                for (std::size_t j = 0; j < k; ++j) mixed += r.nus[j] * others[j][x];
                CHECK(mixed == doctest::Approx(f0[x]).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("multi-sample kappa matches the lattice oracle, K <= 3") {
    Rng rng(9019);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = 3;
        const std::size_t k = 1 + rng.uniform_index(3);
        const auto f0 = oracles::random_simplex_point(rng, dim);
        std::vector<SimplexPoint> others;
        for (std::size_t j = 0; j < k; ++j)
            others.push_back(oracles::random_simplex_point(rng, dim));
        const double lp = kappa_multi_exact(f0, others).kappa;
        const double grid = oracles::kappa_multi_lattice(f0, others);
        CHECK(std::fabs(lp - grid) <= 2e-3);
    }
}

TEST_CASE("K=1 multi-sample agrees with two-sample") {
    Rng rng(404);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = 2 + rng.uniform_index(4);
        const auto f = oracles::random_simplex_point(rng, dim);
        const auto h = oracles::random_simplex_point(rng, dim);
        if (linf_distance(f, h) <= 1e-12) continue;
        const double two = kappa_two_exact(f, h).kappa;
        const double multi = kappa_multi_exact(f, {h}).kappa;
        CHECK(two == doctest::Approx(multi).epsilon(1e-9));
    }
}

TEST_CASE("proportion equivalence: kappa on eta^T P equals kappa on eta") {
    Rng rng(8888);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t l = 2 + rng.uniform_index(3);
        const auto bases = oracles::random_anchored_bases(rng, l, l + 4);
        REQUIRE(check_joint_irreducibility(bases));
        const auto pi = oracles::random_full_rank_mixing(rng, l);
        const auto contaminated = oracles::contaminate(pi, bases);

        const SimplexPoint eta0(pi[0]);
        const SimplexPoint eta1(pi[1]);
        const auto on_props = kappa_two_exact(eta0, eta1);
        const auto on_dists = kappa_two_exact(contaminated[0], contaminated[1]);
        CHECK(on_props.kappa == doctest::Approx(on_dists.kappa).epsilon(1e-9));

        // residues correspond under gamma -> gamma^T P
        std::vector<double> mapped(bases[0].size(), 0.0);
        for (std::size_t j = 0; j < l; ++j)
            for (std::size_t x = 0; x < mapped.size(); ++x)
                mapped[x] += on_props.residue[j] * bases[j][x];
        const auto mapped_res = SimplexPoint::normalized(std::move(mapped));
        CHECK(linf_distance(mapped_res, on_dists.residue) <= 1e-9);
    }
}

TEST_CASE("joint irreducibility checker") {
    SUBCASE("anchored bases pass") {
        Rng rng(2);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t l = 2 + rng.uniform_index(3);
            CHECK(check_joint_irreducibility(oracles::random_anchored_bases(rng, l, l + 3)));
        }
    }
    SUBCASE("convex-redundant triples fail") {
        Rng rng(3);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t atoms = 4 + rng.uniform_index(3);
            const auto p2 = oracles::random_simplex_point(rng, atoms);
            const auto p3 = oracles::random_simplex_point(rng, atoms);
            const double t = 0.2 + 0.6 * rng.uniform();
            const auto p1 = mix(p2, p3, t);  // p1 in co(p2, p3)
            CHECK_FALSE(check_joint_irreducibility({p1, p2, p3}));
        }
    }
    SUBCASE("pinned counterexample over two atoms") {
        const SimplexPoint p1({0.5, 0.5});
        const SimplexPoint p2({1.0, 0.0});
        const SimplexPoint p3({0.0, 1.0});
        CHECK_FALSE(check_joint_irreducibility({p1, p2, p3}));
    }
}

// ---------------------------------------------------------------------------
// kappa-hat

namespace {

/// Table whose "sources" are two known discretes with singleton candidates:
/// plug-in kappa-hat then equals the exact per-atom minimum.
KappaHatEngine plugin_engine(const SimplexPoint& f, const SimplexPoint& h,
                             double penalty_scale, std::size_t n_f = 1000,
                             std::size_t n_h = 1000) {
    DiscreteDataset data;
    data.atoms.resize(f.size());
    data.sources = {f, h};
    data.counts_total = {n_f, n_h};
    const auto cands = singleton_candidates(f.size());
    EvalTable table = build_eval_table(data, cands);
    return KappaHatEngine(std::move(table), {penalty_scale, 1});
}

}  // namespace

TEST_CASE("kappa-hat: denominator always clamped raises EstimationError") {
    // Penalties of this size exceed every candidate mass.
    const SimplexPoint f({0.5, 0.5});
    const SimplexPoint h({0.9, 0.1});
    auto engine = plugin_engine(f, h, 1.0, 4, 4);  // gamma(.) > 1 at n = 4
    const auto fe = SignedMixtureEstimate::source(2, 0);
    const auto he = SignedMixtureEstimate::source(2, 1);
    CHECK_THROWS_AS(engine.kappa_hat(fe, he), EstimationError);
}

TEST_CASE("kappa-hat plug-in equals exact kappa") {
    Rng rng(606);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t atoms = 2 + rng.uniform_index(9);
        const auto f = oracles::random_simplex_point(rng, atoms);
        const auto h = oracles::random_simplex_point(rng, atoms);
        if (linf_distance(f, h) <= 1e-12) continue;
        auto engine = plugin_engine(f, h, 0.0);
        const double khat = engine.kappa_hat(SignedMixtureEstimate::source(2, 0),
                                             SignedMixtureEstimate::source(2, 1));
        CHECK(khat == doctest::Approx(kappa_two_exact(f, h).kappa).epsilon(1e-9));
    }
}

TEST_CASE("kappa-hat never increases when candidates are added") {
    Rng rng(607);
    const auto f = oracles::random_simplex_point(rng, 6);
    const auto h = oracles::random_simplex_point(rng, 6);
    DiscreteDataset data;
    data.atoms.resize(6);
    data.sources = {f, h};
    data.counts_total = {200000, 200000};  // keeps the penalty below atom masses
    const auto all = singleton_candidates(6);
    CandidateSetList fewer;
    fewer.kind = all.kind;
    fewer.vc_dimension = all.vc_dimension;
    fewer.sets.assign(all.sets.begin(), all.sets.begin() + 3);
    KappaHatEngine big(build_eval_table(data, all), {1.0, 1});
    KappaHatEngine small(build_eval_table(data, fewer), {1.0, 1});
    const auto fe = SignedMixtureEstimate::source(2, 0);
    const auto he = SignedMixtureEstimate::source(2, 1);
    double k_small = 1.0, k_big = 1.0;
    bool small_ok = true;
    try {
        k_small = small.kappa_hat(fe, he);
    } catch (const EstimationError&) {
        small_ok = false;
    }
    k_big = big.kappa_hat(fe, he);
    if (small_ok) CHECK(k_big <= k_small + 1e-12);
}

TEST_CASE("residue-hat algebra") {
    const SimplexPoint f({0.5, 0.25, 0.25});
    const SimplexPoint h({0.1, 0.6, 0.3});
    auto engine = plugin_engine(f, h, 0.0);
    const auto fe = SignedMixtureEstimate::source(2, 0);
    const auto he = SignedMixtureEstimate::source(2, 1);

    SUBCASE("kappa zero keeps F's weights") {
        // disjoint-ish: force kappa 0 via supports
        const SimplexPoint f2({1.0, 0.0});
        const SimplexPoint h2({0.0, 1.0});
        auto e2 = plugin_engine(f2, h2, 0.0);
        const auto r = e2.residue_hat(SignedMixtureEstimate::source(2, 0),
                                      SignedMixtureEstimate::source(2, 1));
        CHECK(r.weights()[0] == 1.0);
        CHECK(r.weights()[1] == 0.0);
        CHECK(r.dependency_set() == std::vector<int>{0, 1});  // union bookkeeping
    }
    SUBCASE("weight sum is 1 and dependency set is the union") {
        const auto r = engine.residue_hat(fe, he);
        double sum = 0.0;
        for (double w : r.weights()) sum += w;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.dependency_set() == std::vector<int>{0, 1});
    }
    SUBCASE("identical estimates degenerate") {
        CHECK_THROWS_AS(engine.residue_hat(fe, fe), DegenerateError);
    }
}

TEST_CASE("kappa-hat is deterministic across worker counts") {
    Rng rng(4242);
    EmpiricalDataset data;
    data.dim = 1;
    for (int s = 0; s < 2; ++s) {
        std::vector<double> pts(400);
        for (auto& x : pts) x = rng.uniform(-2.0, 2.0) + (s == 0 ? -0.7 : 0.7);
        data.sources.emplace_back(std::move(pts), 1, s);
    }
    const auto cands = build_candidates(SetClass::balls, data.pooled(), 800, 1, 900, 3);
    const EvalTable table = build_eval_table(data, cands, 2);
    const auto fe = SignedMixtureEstimate::source(2, 0);
    const auto he = SignedMixtureEstimate::source(2, 1);
    std::size_t arg1 = 0, arg4 = 0;
    KappaHatEngine e1(table, {1.0, 1});
    KappaHatEngine e4(table, {1.0, 4});
    const double k1 = e1.kappa_hat(fe, he, &arg1);
    const double k4 = e4.kappa_hat(fe, he, &arg4);
    CHECK(k1 == k4);
    CHECK(arg1 == arg4);
}
