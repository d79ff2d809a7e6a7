#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "decon/kernels.hpp"
#include "decon/rng.hpp"

using namespace decon;

namespace {

std::vector<double> random_cloud(Rng& rng, std::size_t n, std::size_t d) {
    std::vector<double> pts(n * d);
    for (auto& x : pts) x = rng.uniform(-3.0, 3.0);
    return pts;
}

}  // namespace

TEST_CASE("scalar ball counts on hand data") {
    // points 0.1 and 0.9; open interval of radius 0.5 around 0.15 catches one
    const std::vector<double> pts = {0.1, 0.9};
    const double center = 0.15;
    CHECK(kernels::count_in_ball_scalar(pts.data(), 2, 1, &center, 0.25) == 1);
    // boundary is excluded: point at exact radius does not count
    const double c2 = 0.0;
    const std::vector<double> pts2 = {1.0, -1.0, 0.5};
    CHECK(kernels::count_in_ball_scalar(pts2.data(), 3, 1, &c2, 1.0) == 1);
}

TEST_CASE("scalar rect counts strict on both sides") {
    const std::vector<double> pts = {0.0, 0.5, 1.0};
    const double lo = 0.0, hi = 1.0;
    CHECK(kernels::count_in_rect_scalar(pts.data(), 3, 1, &lo, &hi) == 1);
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 matches scalar bit-exactly") {
    if (!__builtin_cpu_supports("avx2")) return;
    Rng rng(20240817);
    for (std::size_t d : {std::size_t{1}, std::size_t{2}, std::size_t{3}}) {
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 1 + rng.uniform_index(257);
            const auto pts = random_cloud(rng, n, d);
            std::vector<double> center(d), lo(d), hi(d);
            for (std::size_t k = 0; k < d; ++k) {
                center[k] = rng.uniform(-3.0, 3.0);
                lo[k] = rng.uniform(-3.0, 0.5);
                hi[k] = lo[k] + rng.uniform(0.0, 3.0);
            }
            const double r2 = rng.uniform(0.0, 9.0);
            CHECK(kernels::count_in_ball_scalar(pts.data(), n, d, center.data(), r2) ==
                  kernels::count_in_ball_avx2(pts.data(), n, d, center.data(), r2));
            CHECK(kernels::count_in_rect_scalar(pts.data(), n, d, lo.data(), hi.data()) ==
                  kernels::count_in_rect_avx2(pts.data(), n, d, lo.data(), hi.data()));
        }
    }
}

TEST_CASE("avx2 matches scalar on exact-boundary points") {
    if (!__builtin_cpu_supports("avx2")) return;
    // Points placed exactly at the radius: strict < must agree across
    // backends, which is why the kernels are built without FMA contraction.
    std::vector<double> pts;
    for (int i = 0; i < 64; ++i) pts.push_back((i % 2 == 0) ? 1.0 : 0.25 * i);
    const double c = 0.0;
    for (double r2 : {1.0, 0.0625, 4.0, 16.0}) {
        CHECK(kernels::count_in_ball_scalar(pts.data(), pts.size(), 1, &c, r2) ==
              kernels::count_in_ball_avx2(pts.data(), pts.size(), 1, &c, r2));
    }
    // d = 2 boundary: squared distance 0.5^2 + 0.5^2 == 0.5 exactly
    std::vector<double> pts2;
    for (int i = 0; i < 32; ++i) {
        pts2.push_back(0.5);
        pts2.push_back((i % 3 == 0) ? 0.5 : -0.5);
    }
    const double c2[2] = {0.0, 0.0};
    CHECK(kernels::count_in_ball_scalar(pts2.data(), 32, 2, c2, 0.5) ==
          kernels::count_in_ball_avx2(pts2.data(), 32, 2, c2, 0.5));
}

TEST_CASE("dispatch honors the backend override") {
    const auto saved = kernels::active_backend();
    kernels::set_backend(kernels::Backend::scalar);
    CHECK(kernels::backend_name() == "scalar");
    const std::vector<double> pts = {0.0, 1.0, 2.0};
    const double c = 0.0;
    CHECK(kernels::count_in_ball(pts.data(), 3, 1, &c, 2.0) == 2);
    kernels::set_backend(saved);
}
#endif
