#include "qis/photon_stats.hpp"

#include <algorithm>
#include <cmath>

#include "qis/simd/kernels.hpp"

namespace qis::stats {

namespace {
constexpr double kPi = 3.14159265358979323846;
} // namespace

double psi_q(double theta, int q) {
  if (theta < 0.0 || std::isnan(theta))
    throw std::invalid_argument("psi_q: theta must be >= 0");
  if (q < 1) throw std::invalid_argument("psi_q: q must be >= 1");
  if (theta == 0.0) return 1.0;
  // term_j = theta^j e^-theta / j!; long double keeps the partial sums
  // accurate for q up to 64 and theta deep into the tail.
  long double term = std::exp(-static_cast<long double>(theta));
  long double sum = term;
  for (int j = 1; j < q; ++j) {
    term *= theta / j;
    sum += term;
  }
  return std::min(1.0, static_cast<double>(sum));
}

double psi_q_inverse(double p, int q) {
  if (q < 1) throw std::invalid_argument("psi_q_inverse: q must be >= 1");
  if (std::isnan(p) || p > 1.0)
    throw std::invalid_argument("psi_q_inverse: p must be in (0, 1]");
  if (p <= 0.0)
    throw SaturationError(
        "psi_q_inverse: p <= 0 means every frame fired; clamp the sum first");
  if (p == 1.0) return 0.0;

  double hi = std::max(1.0, static_cast<double>(q));
  int doublings = 0;
  while (psi_q(hi, q) >= p) {
    hi *= 2.0;
    if (++doublings > 64)
      throw std::runtime_error("psi_q_inverse: failed to bracket root");
  }
  double lo = 0.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (psi_q(mid, q) > p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double binned_pmf(int k, double theta, int frames, SensorMode mode,
                  int q_or_bits) {
  if (theta < 0.0) throw std::invalid_argument("binned_pmf: theta must be >= 0");
  if (frames < 1) throw std::invalid_argument("binned_pmf: frames must be >= 1");
  if (k < 0) return 0.0;
  if (mode == SensorMode::single_bit) {
    if (k > frames) return 0.0;
    const double psi = psi_q(theta, q_or_bits);
    const double hit = 1.0 - psi;
    if (psi <= 0.0) return k == frames ? 1.0 : 0.0;
    if (hit <= 0.0) return k == 0 ? 1.0 : 0.0;
    const double log_pmf = std::lgamma(frames + 1.0) - std::lgamma(k + 1.0) -
                           std::lgamma(frames - k + 1.0) +
                           (frames - k) * std::log(psi) + k * std::log(hit);
    return std::exp(log_pmf);
  }
  const double lambda = frames * theta;
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
}

double anscombe_single_bit(double z, int frames) {
  const double t = frames;
  const double ratio = (z + 0.375) / (t + 0.75);
  return std::sqrt(t + 0.5) * std::asin(std::sqrt(ratio));
}

double anscombe_multi_bit(double z) { return std::sqrt(z + 0.375); }

double anscombe_single_bit_max(int frames) {
  return 0.5 * kPi * std::sqrt(frames + 0.5);
}

double anscombe_single_bit_inverse(double beta, int frames) {
  const double t = frames;
  const double hi = anscombe_single_bit_max(frames);
  const double b = std::clamp(beta, 0.0, hi);
  const double s = std::sin(b / std::sqrt(t + 0.5));
  return (t + 0.75) * s * s - 0.375;
}

double anscombe_multi_bit_inverse(double beta) {
  const double b = std::max(beta, std::sqrt(0.375));
  const double r = b * b - 0.375;
  return r < 0.0 ? 0.0 : r;
}

double anscombe_multi_bit_inverse_unbiased(double beta) {
  // Closed-form approximation of the exact unbiased inverse, rewritten for
  // the sqrt(z + 3/8) normalization (classical transform D = 2*beta).
  const double b = std::max(beta, std::sqrt(0.375));
  const double sqrt32 = std::sqrt(1.5);
  return b * b - 0.125 + sqrt32 / (8.0 * b) - 11.0 / (32.0 * b * b) +
         5.0 * sqrt32 / (64.0 * b * b * b);
}

double mle_single_bit(double z, int frames, int q) {
  const double zc = std::clamp(z, 0.0, frames - 0.5);
  return psi_q_inverse(1.0 - zc / frames, q);
}

double mle_multi_bit(double z, int frames) {
  return std::max(z, 0.0) / frames;
}

StabilizedImage anscombe(const BinnedImage& binned) {
  StabilizedImage out;
  out.width = binned.width;
  out.height = binned.height;
  out.frames = binned.frames;
  out.mode = binned.mode;
  out.q_or_bits = binned.q_or_bits;
  out.alpha = binned.alpha;
  out.cfa_code = binned.cfa_code;
  out.beta.resize(binned.z.size());
  if (binned.mode == SensorMode::multi_bit) {
    std::vector<double> zreal(binned.z.begin(), binned.z.end());
    simd::active().vst_forward_sqrt(zreal.data(), out.beta.data(),
                                    zreal.size());
  } else {
    const AnscombeLut lut(SensorMode::single_bit, binned.frames,
                          static_cast<std::uint32_t>(binned.frames));
    for (std::size_t i = 0; i < binned.z.size(); ++i)
      out.beta[i] = lut(binned.z[i]);
  }
  return out;
}

Image anscombe_inverse(const StabilizedImage& stabilized) {
  Image out(stabilized.width, stabilized.height, 1);
  if (stabilized.mode == SensorMode::multi_bit) {
    simd::active().vst_inverse_sqrt(stabilized.beta.data(), out.plane(0),
                                    stabilized.beta.size());
  } else {
    double* dst = out.plane(0);
    for (std::size_t i = 0; i < stabilized.beta.size(); ++i)
      dst[i] = anscombe_single_bit_inverse(stabilized.beta[i],
                                           stabilized.frames);
  }
  return out;
}

Image mle_tone_map(const BinnedImage& binned) {
  Image out(binned.width, binned.height, 1);
  const MleLut lut(binned.mode, binned.q_or_bits, binned.frames,
                   binned.max_sum());
  double* dst = out.plane(0);
  for (std::size_t i = 0; i < binned.z.size(); ++i) dst[i] = lut(binned.z[i]);
  return out;
}

MleLut::MleLut(SensorMode mode, int q_or_bits, int frames,
               std::uint32_t zmax) {
  table_.resize(static_cast<std::size_t>(zmax) + 1);
  for (std::uint32_t z = 0; z <= zmax; ++z) {
    table_[z] = mode == SensorMode::single_bit
                    ? mle_single_bit(z, frames, q_or_bits)
                    : mle_multi_bit(z, frames);
  }
}

AnscombeLut::AnscombeLut(SensorMode mode, int frames, std::uint32_t zmax) {
  table_.resize(static_cast<std::size_t>(zmax) + 1);
  for (std::uint32_t z = 0; z <= zmax; ++z) {
    table_[z] = mode == SensorMode::single_bit
                    ? anscombe_single_bit(z, frames)
                    : anscombe_multi_bit(z);
  }
}

} // namespace qis::stats
