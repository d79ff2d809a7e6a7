#include "decon/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace decon::kernels {

std::size_t count_in_ball_scalar(const double* pts, std::size_t n, std::size_t d,
                                 const double* center, double r2) {
    std::size_t count = 0;
    if (d == 1) {
        const double c0 = center[0];
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = pts[i] - c0;
            count += (dx * dx < r2) ? 1 : 0;
        }
    } else if (d == 2) {
        const double c0 = center[0], c1 = center[1];
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = pts[2 * i] - c0;
            const double dy = pts[2 * i + 1] - c1;
            const double s = dx * dx + dy * dy;
            count += (s < r2) ? 1 : 0;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double* p = pts + i * d;
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double dx = p[k] - center[k];
                s += dx * dx;
            }
            count += (s < r2) ? 1 : 0;
        }
    }
    return count;
}

std::size_t count_in_rect_scalar(const double* pts, std::size_t n, std::size_t d,
                                 const double* lo, const double* hi) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* p = pts + i * d;
        bool inside = true;
        for (std::size_t k = 0; k < d; ++k) inside = inside && (lo[k] < p[k]) && (p[k] < hi[k]);
        count += inside ? 1 : 0;
    }
    return count;
}

namespace {

Backend detect_backend() {
    if (const char* env = std::getenv("DECON_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
#if defined(__x86_64__) || defined(_M_X64)
        if (std::strcmp(env, "avx2") == 0) return Backend::avx2;
#endif
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) return Backend::avx2;
#endif
    return Backend::scalar;
}

Backend g_backend = detect_backend();

}  // namespace

Backend active_backend() { return g_backend; }

void set_backend(Backend backend) {
#if !defined(__x86_64__) && !defined(_M_X64)
    backend = Backend::scalar;
#endif
    g_backend = backend;
}

std::string backend_name() { return g_backend == Backend::avx2 ? "avx2" : "scalar"; }

std::size_t count_in_ball(const double* pts, std::size_t n, std::size_t d,
                          const double* center, double r2) {
#if defined(__x86_64__) || defined(_M_X64)
    if (g_backend == Backend::avx2) return count_in_ball_avx2(pts, n, d, center, r2);
#endif
    return count_in_ball_scalar(pts, n, d, center, r2);
}

std::size_t count_in_rect(const double* pts, std::size_t n, std::size_t d,
                          const double* lo, const double* hi) {
#if defined(__x86_64__) || defined(_M_X64)
    if (g_backend == Backend::avx2) return count_in_rect_avx2(pts, n, d, lo, hi);
#endif
    return count_in_rect_scalar(pts, n, d, lo, hi);
}

}  // namespace decon::kernels
