// AVX2 variants of the dispatch kernels. Built with -mavx2 (no -mfma: the
// scalar reference does not contract multiply-add, so neither may this TU).
// Per-element operation order matches kernels_scalar.cpp exactly.

#if defined(__AVX2__)

#include <cstring>
#include <immintrin.h>

#include "qis/simd/kernels.hpp"

namespace qis::simd {
namespace {

constexpr double kVstOffset = 0.375;

void vst_forward_sqrt_avx2(const double* z, double* out, std::size_t n) {
  const __m256d off = _mm256_set1_pd(kVstOffset);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(z + i);
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_add_pd(v, off)));
  }
  for (; i < n; ++i) out[i] = __builtin_sqrt(z[i] + kVstOffset);
}

void vst_inverse_sqrt_avx2(const double* b, double* out, std::size_t n) {
  const double floor = __builtin_sqrt(kVstOffset);
  const __m256d floorv = _mm256_set1_pd(floor);
  const __m256d off = _mm256_set1_pd(kVstOffset);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // max(floor, b) keeps NaN lanes NaN, matching the scalar comparison.
    const __m256d v = _mm256_max_pd(floorv, _mm256_loadu_pd(b + i));
    const __m256d r = _mm256_sub_pd(_mm256_mul_pd(v, v), off);
    _mm256_storeu_pd(out + i, _mm256_max_pd(zero, r));
  }
  for (; i < n; ++i) {
    const double v = b[i] < floor ? floor : b[i];
    const double r = v * v - kVstOffset;
    out[i] = r < 0.0 ? 0.0 : r;
  }
}

void admm_x_step_avx2(const double* beta, const std::uint8_t* obs,
                      const double* v, const double* u, double rho, double* x,
                      std::size_t n) {
  const double denom = 1.0 + rho;
  const __m256d rhov = _mm256_set1_pd(rho);
  const __m256d denomv = _mm256_set1_pd(denom);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i),
                                    _mm256_loadu_pd(u + i));
    const __m256d filled = _mm256_div_pd(
        _mm256_add_pd(_mm256_loadu_pd(beta + i), _mm256_mul_pd(rhov, d)),
        denomv);
    std::uint32_t packed;
    std::memcpy(&packed, obs + i, 4);
    const __m256i lanes =
        _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(static_cast<int>(packed)));
    const __m256d unobserved = _mm256_castsi256_pd(
        _mm256_cmpeq_epi64(lanes, _mm256_setzero_si256()));
    _mm256_storeu_pd(x + i, _mm256_blendv_pd(filled, d, unobserved));
  }
  for (; i < n; ++i) {
    const double d = v[i] - u[i];
    x[i] = obs[i] ? (beta[i] + rho * d) / denom : d;
  }
}

void admm_u_step_avx2(double* u, const double* x, const double* v,
                      std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d diff =
        _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(v + i));
    _mm256_storeu_pd(u + i, _mm256_add_pd(_mm256_loadu_pd(u + i), diff));
  }
  for (; i < n; ++i) u[i] = u[i] + (x[i] - v[i]);
}

double reduce_lanes(__m256d acc) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  return (lane[0] + lane[2]) + (lane[1] + lane[3]);
}

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    tail += d * d;
  }
  return reduce_lanes(acc) + tail;
}

double sum_sq_avx2(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(a + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * a[i];
  return reduce_lanes(acc) + tail;
}

void accumulate_u16_avx2(const std::uint16_t* frame, std::uint32_t* acc,
                         std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i wide = _mm256_cvtepu16_epi32(
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(frame + i)));
    const __m256i sum = _mm256_add_epi32(
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i)), wide);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + i), sum);
  }
  for (; i < n; ++i) acc[i] += frame[i];
}

void conv_row_avx2(const double* in, const double* w, int radius, double* out,
                   std::size_t n) {
  const int taps = 2 * radius + 1;
  std::size_t x = 0;
  for (; x + 4 <= n; x += 4) {
    __m256d s = _mm256_setzero_pd();
    for (int k = 0; k < taps; ++k) {
      const __m256d wk = _mm256_set1_pd(w[k]);
      s = _mm256_add_pd(s, _mm256_mul_pd(wk, _mm256_loadu_pd(in + x + k)));
    }
    _mm256_storeu_pd(out + x, s);
  }
  for (; x < n; ++x) {
    double s = 0.0;
    for (int k = 0; k < taps; ++k) s += w[k] * in[x + k];
    out[x] = s;
  }
}

} // namespace

const Kernels* avx2_kernels_impl() {
  static const Kernels table = {
      "avx2",
      vst_forward_sqrt_avx2,
      vst_inverse_sqrt_avx2,
      admm_x_step_avx2,
      admm_u_step_avx2,
      sum_sq_diff_avx2,
      sum_sq_avx2,
      accumulate_u16_avx2,
      conv_row_avx2,
  };
  return &table;
}

} // namespace qis::simd

#endif // __AVX2__
