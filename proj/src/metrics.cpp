#include "qis/metrics.hpp"

#include <cmath>
#include <limits>

#include "qis/simd/kernels.hpp"

namespace qis::metrics {

double mse(const Image& a, const Image& b) {
  if (!a.same_shape(b))
    throw std::invalid_argument("mse: image shapes differ");
  const double sum =
      simd::active().sum_sq_diff(a.data().data(), b.data().data(), a.size());
  return sum / static_cast<double>(a.size());
}

double psnr(const Image& a, const Image& b, double peak) {
  if (!(peak > 0.0)) throw std::invalid_argument("psnr: peak must be > 0");
  const double err = mse(a, b);
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / err);
}

} // namespace qis::metrics
