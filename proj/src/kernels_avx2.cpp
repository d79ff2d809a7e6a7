#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "decon/kernels.hpp"

// Built with -mavx2 and -ffp-contract=off; only reached after the runtime
// dispatch has confirmed AVX2 support.

namespace decon::kernels {

namespace {

inline int popcount4(int mask) { return __builtin_popcount(mask & 0xf); }

}  // namespace

std::size_t count_in_ball_avx2(const double* pts, std::size_t n, std::size_t d,
                               const double* center, double r2) {
    std::size_t count = 0;
    if (d == 1) {
        const __m256d c = _mm256_set1_pd(center[0]);
        const __m256d rr = _mm256_set1_pd(r2);
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4) {
            const __m256d x = _mm256_loadu_pd(pts + i);
            const __m256d dx = _mm256_sub_pd(x, c);
            const __m256d sq = _mm256_mul_pd(dx, dx);
            const __m256d lt = _mm256_cmp_pd(sq, rr, _CMP_LT_OQ);
            count += popcount4(_mm256_movemask_pd(lt));
        }
        for (; i < n; ++i) {
            const double dx = pts[i] - center[0];
            count += (dx * dx < r2) ? 1 : 0;
        }
    } else if (d == 2) {
        const __m256d c = _mm256_setr_pd(center[0], center[1], center[0], center[1]);
        const __m256d rr = _mm256_set1_pd(r2);
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4) {
            const __m256d a = _mm256_loadu_pd(pts + 2 * i);      // x0 y0 x1 y1
            const __m256d b = _mm256_loadu_pd(pts + 2 * i + 4);  // x2 y2 x3 y3
            const __m256d da = _mm256_sub_pd(a, c);
            const __m256d db = _mm256_sub_pd(b, c);
            const __m256d sa = _mm256_mul_pd(da, da);
            const __m256d sb = _mm256_mul_pd(db, db);
            // hadd within 128-bit lanes: (p0, p2, p1, p3); order is irrelevant
            // for counting, each lane is dx*dx + dy*dy in scalar order.
            const __m256d s = _mm256_hadd_pd(sa, sb);
            const __m256d lt = _mm256_cmp_pd(s, rr, _CMP_LT_OQ);
            count += popcount4(_mm256_movemask_pd(lt));
        }
        for (; i < n; ++i) {
            const double dx = pts[2 * i] - center[0];
            const double dy = pts[2 * i + 1] - center[1];
            const double s = dx * dx + dy * dy;
            count += (s < r2) ? 1 : 0;
        }
    } else {
        return count_in_ball_scalar(pts, n, d, center, r2);
    }
    return count;
}

std::size_t count_in_rect_avx2(const double* pts, std::size_t n, std::size_t d,
                               const double* lo, const double* hi) {
    std::size_t count = 0;
    if (d == 1) {
        const __m256d l = _mm256_set1_pd(lo[0]);
        const __m256d h = _mm256_set1_pd(hi[0]);
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4) {
            const __m256d x = _mm256_loadu_pd(pts + i);
            const __m256d gt = _mm256_cmp_pd(x, l, _CMP_GT_OQ);
            const __m256d lt = _mm256_cmp_pd(x, h, _CMP_LT_OQ);
            count += popcount4(_mm256_movemask_pd(_mm256_and_pd(gt, lt)));
        }
        for (; i < n; ++i) count += (lo[0] < pts[i] && pts[i] < hi[0]) ? 1 : 0;
    } else if (d == 2) {
        const __m256d l = _mm256_setr_pd(lo[0], lo[1], lo[0], lo[1]);
        const __m256d h = _mm256_setr_pd(hi[0], hi[1], hi[0], hi[1]);
        std::size_t i = 0;
        for (; i + 2 <= n; i += 2) {
            const __m256d x = _mm256_loadu_pd(pts + 2 * i);  // x0 y0 x1 y1
            const __m256d gt = _mm256_cmp_pd(x, l, _CMP_GT_OQ);
            const __m256d lt = _mm256_cmp_pd(x, h, _CMP_LT_OQ);
            const int m = _mm256_movemask_pd(_mm256_and_pd(gt, lt));
            count += ((m & 0x3) == 0x3) ? 1 : 0;
            count += ((m & 0xc) == 0xc) ? 1 : 0;
        }
        for (; i < n; ++i) {
            const double* p = pts + 2 * i;
            count += (lo[0] < p[0] && p[0] < hi[0] && lo[1] < p[1] && p[1] < hi[1]) ? 1 : 0;
        }
    } else {
        return count_in_rect_scalar(pts, n, d, lo, hi);
    }
    return count;
}

}  // namespace decon::kernels

#endif  // x86_64
