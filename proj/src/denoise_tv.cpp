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

} // namespace

// Proximal total-variation denoiser: solves min_v 1/2||v-x||^2 + gamma TV(v)
// by projection onto the dual ball (Chambolle's scheme), with a fixed budget
// of 50 dual steps at step size 0.25. gamma = smooth_weight * sigma^2.
void tv_channel(const double* in, double* out, int width, int height,
                double sigma, const DenoiserSpec& spec) {
  const std::size_t n = static_cast<std::size_t>(width) * height;
  const double gamma = spec.smooth_weight * sigma * sigma;
  if (gamma < 1e-30) {
    std::copy(in, in + n, out);
    return;
  }

  constexpr int kIters = 50;
  constexpr double kTau = 0.25;

  std::vector<double> px(n, 0.0), py(n, 0.0), divp(n, 0.0), d(n);
  const auto idx = [width](int x, int y) {
    return static_cast<std::size_t>(y) * width + x;
  };

  for (int it = 0; it < kIters; ++it) {
    for (std::size_t i = 0; i < n; ++i) d[i] = divp[i] - in[i] / gamma;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const double center = d[idx(x, y)];
        const double gx =
            d[idx(map_index(x + 1, width, spec.boundary), y)] - center;
        const double gy =
            d[idx(x, map_index(y + 1, height, spec.boundary))] - center;
        const double mag = std::sqrt(gx * gx + gy * gy);
        const double denom = 1.0 + kTau * mag;
        const std::size_t i = idx(x, y);
        px[i] = (px[i] + kTau * gx) / denom;
        py[i] = (py[i] + kTau * gy) / denom;
      }
    }
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        double div = px[idx(x, y)] + py[idx(x, y)];
        if (spec.boundary == Boundary::toroidal) {
          div -= px[idx(wrap_index(x - 1, width), y)];
          div -= py[idx(x, wrap_index(y - 1, height))];
        } else {
          if (x > 0) div -= px[idx(x - 1, y)];
          if (y > 0) div -= py[idx(x, y - 1)];
        }
        divp[idx(x, y)] = div;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = in[i] - gamma * divp[i];
}

} // namespace qis::denoise
