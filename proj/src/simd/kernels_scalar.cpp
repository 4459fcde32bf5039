#include <cmath>

#include "qis/simd/kernels.hpp"

// Reference kernels. The AVX2 TU mirrors these operation-for-operation;
// keep the arithmetic order in sync when editing either file.

namespace qis::simd {
namespace {

constexpr double kVstOffset = 0.375;

void vst_forward_sqrt_scalar(const double* z, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(z[i] + kVstOffset);
}

void vst_inverse_sqrt_scalar(const double* b, double* out, std::size_t n) {
  const double floor = std::sqrt(kVstOffset);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = b[i] < floor ? floor : b[i];
    const double r = v * v - kVstOffset;
    // The clamped boundary maps to exactly zero counts.
    out[i] = r < 0.0 ? 0.0 : r;
  }
}

void admm_x_step_scalar(const double* beta, const std::uint8_t* obs,
                        const double* v, const double* u, double rho,
                        double* x, std::size_t n) {
  const double denom = 1.0 + rho;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = v[i] - u[i];
    x[i] = obs[i] ? (beta[i] + rho * d) / denom : d;
  }
}

void admm_u_step_scalar(double* u, const double* x, const double* v,
                        std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) u[i] = u[i] + (x[i] - v[i]);
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int l = 0; l < 4; ++l) {
      const double d = a[i + l] - b[i + l];
      acc[l] += d * d;
    }
  }
  double tail = 0.0;
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    tail += d * d;
  }
  return ((acc[0] + acc[2]) + (acc[1] + acc[3])) + tail;
}

double sum_sq_scalar(const double* a, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int l = 0; l < 4; ++l) acc[l] += a[i + l] * a[i + l];
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * a[i];
  return ((acc[0] + acc[2]) + (acc[1] + acc[3])) + tail;
}

void accumulate_u16_scalar(const std::uint16_t* frame, std::uint32_t* acc,
                           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += frame[i];
}

void conv_row_scalar(const double* in, const double* w, int radius,
                     double* out, std::size_t n) {
  const int taps = 2 * radius + 1;
  for (std::size_t x = 0; x < n; ++x) {
    double s = 0.0;
    for (int k = 0; k < taps; ++k) s += w[k] * in[x + k];
    out[x] = s;
  }
}

} // namespace

const Kernels& scalar_kernels() {
  static const Kernels table = {
      "scalar",
      vst_forward_sqrt_scalar,
      vst_inverse_sqrt_scalar,
      admm_x_step_scalar,
      admm_u_step_scalar,
      sum_sq_diff_scalar,
      sum_sq_scalar,
      accumulate_u16_scalar,
      conv_row_scalar,
  };
  return table;
}

} // namespace qis::simd
