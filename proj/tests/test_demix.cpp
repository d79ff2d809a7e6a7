#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "decon/demix.hpp"
#include "decon/kappa.hpp"
#include "decon/rng.hpp"
#include "oracles.hpp"

using namespace decon;

TEST_CASE("face_test on pinned proportion triples") {
    SUBCASE("same 2-face interior") {
        CHECK(face_test({SimplexPoint({0.3, 0.7, 0.0}), SimplexPoint({0.6, 0.4, 0.0})}));
    }
    SUBCASE("different supports") {
        CHECK_FALSE(face_test({SimplexPoint({0.3, 0.7, 0.0}), SimplexPoint({0.3, 0.3, 0.4})}));
    }
    SUBCASE("disjoint singletons") {
        CHECK_FALSE(face_test({SimplexPoint::unit(3, 0), SimplexPoint::unit(3, 1)}));
    }
}

TEST_CASE("L=2 demix is the closed-form residue pair") {
    // Pi = ((0.8, 0.2), (0.3, 0.7)) over anchored bases
    Rng rng(5);
    const auto bases = oracles::random_anchored_bases(rng, 2, 6);
    const std::vector<std::vector<double>> pi = {{0.8, 0.2}, {0.3, 0.7}};
    const auto contaminated = oracles::contaminate(pi, bases);
    const auto result = demix(contaminated, 123);
    CHECK(oracles::aligned_linf(result.bases, bases) <= 1e-12);
    // the two outputs are exactly the mutual residues
    CHECK(linf_distance(result.bases[0], residue_exact(contaminated[0], contaminated[1])) == 0.0);
    CHECK(linf_distance(result.bases[1], residue_exact(contaminated[1], contaminated[0])) == 0.0);
}

TEST_CASE("identity mixing returns inputs unchanged") {
    Rng rng(6);
    const auto bases = oracles::random_anchored_bases(rng, 2, 5);
    const auto result = demix(bases, 9);
    CHECK(oracles::aligned_linf(result.bases, bases) <= 1e-12);
}

TEST_CASE("L=3 demix recovers anchored bases across seeds") {
    Rng rng(700);
    for (int trial = 0; trial < 25; ++trial) {
        const auto bases = oracles::random_anchored_bases(rng, 3, 8);
        const auto pi = oracles::random_full_rank_mixing(rng, 3);
        const auto contaminated = oracles::contaminate(pi, bases);
        const auto result = demix(contaminated, 1000 + static_cast<std::uint64_t>(trial));
        CHECK(oracles::aligned_linf(result.bases, bases) <= 1e-7);
    }
}

TEST_CASE("demix trace structure") {
    Rng rng(13);
    const auto bases = oracles::random_anchored_bases(rng, 4, 9);
    const auto pi = oracles::random_full_rank_mixing(rng, 4);
    const auto contaminated = oracles::contaminate(pi, bases);
    const auto result = demix(contaminated, 77);
    CHECK(oracles::aligned_linf(result.bases, bases) <= 1e-7);

    // nu strictly increasing within each level, final verdict true per level,
    // and exactly K-2 face-test-gated levels for a K-input demix.
    std::vector<int> levels;
    for (const auto& row : result.trace.rows)
        if (levels.empty() || levels.back() != row.level) levels.push_back(row.level);
    CHECK(levels.size() == 2);  // K - 2 = 2
    for (int level : levels) {
        double last_nu = -1.0;
        bool final_verdict = false;
        for (const auto& row : result.trace.rows) {
            if (row.level != level) continue;
            CHECK(row.nu > last_nu);
            last_nu = row.nu;
            final_verdict = row.verdict;
        }
        CHECK(final_verdict);
    }
    // residues recorded in the trace stay on the simplex boundary
    for (const auto& row : result.trace.rows)
        for (const auto& res : row.residues) {
            double least = res[0];
            for (double v : res) least = std::min(least, v);
            CHECK(least <= 1e-9);
        }
}

TEST_CASE("determinism: same seed, same output; aligned output stable across seeds") {
    Rng rng(999);
    const auto bases = oracles::random_anchored_bases(rng, 3, 7);
    const auto pi = oracles::random_full_rank_mixing(rng, 3);
    const auto contaminated = oracles::contaminate(pi, bases);
    const auto a = demix(contaminated, 42);
    const auto b = demix(contaminated, 42);
    REQUIRE(a.bases.size() == b.bases.size());
    for (std::size_t i = 0; i < a.bases.size(); ++i)
        CHECK(linf_distance(a.bases[i], b.bases[i]) == 0.0);
    const auto c = demix(contaminated, 43);
    CHECK(oracles::aligned_linf(c.bases, a.bases) <= 1e-7);
}

TEST_CASE("peel loop recovers the remaining base directly") {
    // With Q_1..Q_{K-1} already equal to bases, the sequential residue loop
    // applied to the source mean must return the missing base.
    Rng rng(1414);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t l = 3 + rng.uniform_index(2);
        const auto bases = oracles::random_anchored_bases(rng, l, l + 5);
        const auto pi = oracles::random_full_rank_mixing(rng, l);
        const auto contaminated = oracles::contaminate(pi, bases);
        SimplexPoint peeled = mean_of(contaminated);
        for (std::size_t i = 0; i + 1 < l; ++i) peeled = residue_exact(peeled, bases[i]);
        CHECK(linf_distance(peeled, bases[l - 1]) <= 1e-9);
    }
}

TEST_CASE("rank-deficient inputs raise AssumptionError") {
    Rng rng(21);
    const auto bases = oracles::random_anchored_bases(rng, 2, 6);
    const auto p12 = mix(bases[0], bases[1], 0.5);
    const auto p13 = mix(bases[0], bases[1], 0.25);
    const auto p23 = mix(bases[0], bases[1], 0.75);  // three points on one segment
    CHECK_THROWS_AS(demix({p12, p13, p23}, 5), AssumptionError);
}

TEST_CASE("duplicate inputs rejected") {
    const SimplexPoint a({0.5, 0.5});
    CHECK_THROWS_AS(demix({a, a}, 1), InputError);
}

TEST_CASE("nonsquare demix") {
    SUBCASE("M=4, L=3 recovery") {
        Rng rng(31);
        for (int trial = 0; trial < 10; ++trial) {
            const auto bases = oracles::random_anchored_bases(rng, 3, 8);
            // 4 contaminated rows: 3 full-rank + 1 extra random row
            auto pi = oracles::random_full_rank_mixing(rng, 3);
            pi.push_back(rng.dirichlet_uniform(3));
            const auto contaminated = oracles::contaminate(pi, bases);
            const auto result = nonsquare_demix(contaminated, 3, 500 + trial);
            CHECK(oracles::aligned_linf(result.bases, bases) <= 1e-7);
        }
    }
    SUBCASE("L greater than M rejected") {
        const SimplexPoint a({0.4, 0.6});
        const SimplexPoint b({0.7, 0.3});
        CHECK_THROWS_AS(nonsquare_demix({a, b}, 3, 1), InputError);
    }
}
