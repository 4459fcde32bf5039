#include "qis/scene.hpp"

#include <algorithm>
#include <cmath>

namespace qis {

namespace {

struct Rgb {
  double r, g, b;
};

// Saturated patch palette, loosely color-checker-like.
constexpr Rgb kPatches[24] = {
    {0.45, 0.32, 0.26}, {0.77, 0.58, 0.50}, {0.36, 0.48, 0.61},
    {0.34, 0.42, 0.26}, {0.51, 0.50, 0.69}, {0.39, 0.74, 0.66},
    {0.86, 0.48, 0.18}, {0.28, 0.36, 0.65}, {0.76, 0.33, 0.38},
    {0.36, 0.24, 0.42}, {0.62, 0.73, 0.25}, {0.89, 0.63, 0.18},
    {0.16, 0.24, 0.57}, {0.28, 0.58, 0.27}, {0.69, 0.19, 0.23},
    {0.93, 0.78, 0.12}, {0.73, 0.32, 0.57}, {0.13, 0.53, 0.62},
    {0.95, 0.95, 0.95}, {0.78, 0.78, 0.78}, {0.62, 0.62, 0.62},
    {0.47, 0.47, 0.47}, {0.33, 0.33, 0.33}, {0.20, 0.20, 0.20},
};

} // namespace

Image make_test_scene(int width, int height) {
  Image scene(width, height, 3);
  const double w = width, h = height;

  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double fx = x / (w - 1.0);
      const double fy = y / (h - 1.0);

      // Smooth two-tone gradient background.
      Rgb c = {0.15 + 0.45 * fx, 0.20 + 0.30 * fy,
               0.40 - 0.25 * fx + 0.20 * fy};

      // Color checker grid in the upper-left quadrant.
      if (fx < 0.48 && fy < 0.48) {
        const int col = std::min(5, static_cast<int>(fx / 0.08));
        const int row = std::min(3, static_cast<int>(fy / 0.12));
        const double ux = fx / 0.08 - col;
        const double uy = fy / 0.12 - row;
        if (ux > 0.08 && ux < 0.92 && uy > 0.08 && uy < 0.92)
          c = kPatches[row * 6 + col];
      }

      // Frequency wedge along the bottom: horizontal chirp.
      if (fy > 0.80) {
        const double phase = 6.2831853 * (4.0 + 36.0 * fx) * fx;
        const double s = 0.5 + 0.45 * std::sin(phase);
        c = {s, s, s};
      }

      // Two colored disks on the right side.
      const double d1 = std::hypot(fx - 0.72, fy - 0.25);
      if (d1 < 0.13) c = {0.85, 0.25, 0.20};
      const double d2 = std::hypot(fx - 0.80, fy - 0.58);
      if (d2 < 0.10) c = {0.20, 0.40, 0.85};

      // Soft diagonal texture everywhere, to keep denoisers honest.
      const double tex = 0.03 * std::sin(40.0 * (fx + 0.6 * fy));
      scene.at(0, x, y) = std::clamp(c.r + tex, 0.02, 0.98);
      scene.at(1, x, y) = std::clamp(c.g + tex, 0.02, 0.98);
      scene.at(2, x, y) = std::clamp(c.b + tex, 0.02, 0.98);
    }
  }
  return scene;
}

} // namespace qis
