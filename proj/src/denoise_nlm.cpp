#include <algorithm>
#include <cmath>
#include <vector>

#include "qis/denoise.hpp"

namespace qis::denoise {

namespace {

inline int map_index(int i, int n, Boundary boundary) {
  return boundary == Boundary::mirror ? reflect_index(i, n)
                                      : wrap_index(i, n);
}

// Separable box sum with boundary handling; window (2p+1) per axis.
void box_sum(const std::vector<double>& in, std::vector<double>& tmp,
             std::vector<double>& out, int width, int height, int p,
             Boundary boundary) {
  for (int y = 0; y < height; ++y) {
    const double* row = in.data() + static_cast<std::size_t>(y) * width;
    double* trow = tmp.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      double s = 0.0;
      for (int k = -p; k <= p; ++k) s += row[map_index(x + k, width, boundary)];
      trow[x] = s;
    }
  }
  for (int y = 0; y < height; ++y) {
    double* orow = out.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      double s = 0.0;
      for (int k = -p; k <= p; ++k)
        s += tmp[static_cast<std::size_t>(map_index(y + k, height, boundary)) *
                     width +
                 x];
      orow[x] = s;
    }
  }
}

} // namespace

// Non-local means with noise-adaptive weights: patch distances are compared
// against the expected 2*sigma^2 of two noisy copies, and the excess decays
// with filtering parameter h = smooth_weight * sigma.
void nlm_channel(const double* in, double* out, int width, int height,
                 double sigma, const DenoiserSpec& spec) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  const int p = spec.patch_radius;
  const int s = spec.search_radius;
  const double patch_area = static_cast<double>(2 * p + 1) * (2 * p + 1);
  const double h2 = std::max(1e-300, spec.smooth_weight * sigma) *
                    std::max(1e-300, spec.smooth_weight * sigma);
  const double noise_floor = 2.0 * sigma * sigma;

  std::vector<double> shifted(n), diff2(n), tmp(n), dist(n);
  std::vector<double> acc(n, 0.0), wsum(n, 0.0);

  for (int dy = -s; dy <= s; ++dy) {
    for (int dx = -s; dx <= s; ++dx) {
      for (int y = 0; y < height; ++y) {
        const int sy = map_index(y + dy, height, spec.boundary);
        const double* srow = in + static_cast<std::size_t>(sy) * width;
        double* drow = shifted.data() + static_cast<std::size_t>(y) * width;
        for (int x = 0; x < width; ++x)
          drow[x] = srow[map_index(x + dx, width, spec.boundary)];
      }
      for (std::size_t i = 0; i < n; ++i) {
        const double d = in[i] - shifted[i];
        diff2[i] = d * d;
      }
      box_sum(diff2, tmp, dist, width, height, p, spec.boundary);
      for (std::size_t i = 0; i < n; ++i) {
        const double d2 = dist[i] / patch_area;
        const double excess = d2 - noise_floor;
        const double w = excess > 0.0 ? std::exp(-excess / h2) : 1.0;
        acc[i] += w * shifted[i];
        wsum[i] += w;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = acc[i] / wsum[i];
}

} // namespace qis::denoise
