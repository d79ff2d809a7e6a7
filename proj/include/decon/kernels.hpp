#pragma once

#include <cstddef>
#include <string>

namespace decon::kernels {

/// Counting kernels behind candidate-set evaluation. Points are row-major
/// (n x d). Ball membership is strict (open balls): sum_k (x_k - c_k)^2 < r2.
/// Rect membership is strict per axis: lo_k < x_k < hi_k.
///
/// Scalar and SIMD variants must agree bit-exactly: both evaluate the
/// per-point squared distance with the same operation order and without
/// FMA contraction (the translation units are built with -ffp-contract=off).
std::size_t count_in_ball_scalar(const double* pts, std::size_t n, std::size_t d,
                                 const double* center, double r2);
std::size_t count_in_rect_scalar(const double* pts, std::size_t n, std::size_t d,
                                 const double* lo, const double* hi);

#if defined(__x86_64__) || defined(_M_X64)
std::size_t count_in_ball_avx2(const double* pts, std::size_t n, std::size_t d,
                               const double* center, double r2);
std::size_t count_in_rect_avx2(const double* pts, std::size_t n, std::size_t d,
                               const double* lo, const double* hi);
#endif

enum class Backend { scalar, avx2 };

/// Active backend: AVX2 when the CPU supports it, unless overridden by
/// set_backend() or the DECON_SIMD environment variable (scalar|avx2|auto).
Backend active_backend();
void set_backend(Backend backend);
std::string backend_name();

std::size_t count_in_ball(const double* pts, std::size_t n, std::size_t d,
                          const double* center, double r2);
std::size_t count_in_rect(const double* pts, std::size_t n, std::size_t d,
                          const double* lo, const double* hi);

}  // namespace decon::kernels
