#pragma once

#include "qis/image.hpp"

namespace qis::metrics {

// Mean squared error over all channels and pixels. Shapes must match.
double mse(const Image& a, const Image& b);

// 10 log10(peak^2 / MSE); +infinity when the images are identical.
double psnr(const Image& a, const Image& b, double peak = 1.0);

} // namespace qis::metrics
