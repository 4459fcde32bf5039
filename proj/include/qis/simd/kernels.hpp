#pragma once

#include <cstddef>
#include <cstdint>

namespace qis::simd {

// Hot per-jot loops, dispatched at runtime between the scalar reference and
// an AVX2 variant. Elementwise kernels are bit-exact across variants (same
// IEEE operation sequence per element, no FMA contraction); the reductions
// use four independent accumulators in both variants and agree to a few ulps.
struct Kernels {
  const char* name;

  // out[i] = sqrt(z[i] + 3/8)
  void (*vst_forward_sqrt)(const double* z, double* out, std::size_t n);

  // out[i] = max(b[i], sqrt(3/8))^2 - 3/8
  void (*vst_inverse_sqrt)(const double* b, double* out, std::size_t n);

  // x[i] = obs[i] ? (beta[i] + rho*(v[i]-u[i])) / (1+rho) : v[i]-u[i]
  void (*admm_x_step)(const double* beta, const std::uint8_t* obs,
                      const double* v, const double* u, double rho, double* x,
                      std::size_t n);

  // u[i] += x[i] - v[i]
  void (*admm_u_step)(double* u, const double* x, const double* v,
                      std::size_t n);

  // sum_i (a[i]-b[i])^2
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);

  // sum_i a[i]^2
  double (*sum_sq)(const double* a, std::size_t n);

  // acc[i] += frame[i]
  void (*accumulate_u16)(const std::uint16_t* frame, std::uint32_t* acc,
                         std::size_t n);

  // out[x] = sum_{k=0}^{2r} w[k] * in[x+k]; `in` must have n+2r entries.
  void (*conv_row)(const double* in, const double* w, int radius, double* out,
                   std::size_t n);
};

const Kernels& scalar_kernels();

// Null when the binary lacks the AVX2 translation unit or the CPU lacks AVX2.
const Kernels* avx2_kernels();

// Best variant for this machine; QIS_SIMD=scalar in the environment forces
// the reference path.
const Kernels& active();

} // namespace qis::simd
