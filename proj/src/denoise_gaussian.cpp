#include <algorithm>
#include <cmath>
#include <vector>

#include "qis/denoise.hpp"
#include "qis/simd/kernels.hpp"

namespace qis::denoise {

namespace {

// Separable 1D pass along rows of a plane laid out row-major.
void horizontal_pass(const double* in, double* out, int width, int height,
                     const std::vector<double>& kernel, int radius,
                     Boundary boundary) {
  std::vector<double> padded(width + 2 * radius);
  for (int y = 0; y < height; ++y) {
    const double* row = in + static_cast<std::size_t>(y) * width;
    for (int i = 0; i < width + 2 * radius; ++i) {
      const int src = boundary == Boundary::mirror
                          ? reflect_index(i - radius, width)
                          : wrap_index(i - radius, width);
      padded[i] = row[src];
    }
    simd::active().conv_row(padded.data(), kernel.data(), radius,
                            out + static_cast<std::size_t>(y) * width, width);
  }
}

void vertical_pass(const double* in, double* out, int width, int height,
                   const std::vector<double>& kernel, int radius,
                   Boundary boundary) {
  std::vector<double> padded(height + 2 * radius);
  std::vector<double> column(height);
  for (int x = 0; x < width; ++x) {
    for (int i = 0; i < height + 2 * radius; ++i) {
      const int src = boundary == Boundary::mirror
                          ? reflect_index(i - radius, height)
                          : wrap_index(i - radius, height);
      padded[i] = in[static_cast<std::size_t>(src) * width + x];
    }
    simd::active().conv_row(padded.data(), kernel.data(), radius,
                            column.data(), height);
    for (int y = 0; y < height; ++y)
      out[static_cast<std::size_t>(y) * width + x] = column[y];
  }
}

long double plane_sum(const double* p, std::size_t n) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < n; ++i) s += p[i];
  return s;
}

} // namespace

// Normalized Gaussian smoothing with spatial bandwidth proportional to the
// hypothesized noise sigma. The DC component is restored after filtering so
// the mean is preserved under mirror padding as well.
void gaussian_channel(const double* in, double* out, int width, int height,
                      double sigma, const DenoiserSpec& spec) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  const double bandwidth = spec.smooth_weight * 3.0 * sigma;
  const int radius = static_cast<int>(std::ceil(3.0 * bandwidth));
  if (radius < 1) {
    std::copy(in, in + n, out);
    return;
  }

  std::vector<double> kernel(2 * radius + 1);
  kernel[radius] = 1.0;
  for (int k = 1; k <= radius; ++k) {
    const double w = std::exp(-0.5 * (static_cast<double>(k) * k) /
                              (bandwidth * bandwidth));
    kernel[radius + k] = w;
    kernel[radius - k] = w;
  }
  double norm = 0.0;
  for (double w : kernel) norm += w;
  for (double& w : kernel) w /= norm;

  std::vector<double> tmp(n);
  horizontal_pass(in, tmp.data(), width, height, kernel, radius,
                  spec.boundary);
  vertical_pass(tmp.data(), out, width, height, kernel, radius, spec.boundary);

  const long double drift = (plane_sum(in, n) - plane_sum(out, n)) /
                            static_cast<long double>(n);
  const double shift = static_cast<double>(drift);
  for (std::size_t i = 0; i < n; ++i) out[i] += shift;
}

} // namespace qis::denoise
