#include "qis/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qis/photon_stats.hpp"
#include "qis/simd/kernels.hpp"

namespace qis::recon {

namespace {

double plane_norm(const std::vector<double>& v) {
  return std::sqrt(simd::active().sum_sq(v.data(), v.size()));
}

void invert_vst_plane(const double* beta, double* out, std::size_t n,
                      SensorMode mode, int frames, bool unbiased) {
  if (mode == SensorMode::multi_bit) {
    if (unbiased) {
      for (std::size_t i = 0; i < n; ++i)
        out[i] = stats::anscombe_multi_bit_inverse_unbiased(beta[i]);
    } else {
      simd::active().vst_inverse_sqrt(beta, out, n);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      out[i] = stats::anscombe_single_bit_inverse(beta[i], frames);
  }
}

void mle_plane(const double* z, double* out, std::size_t n, SensorMode mode,
               int frames, int q_or_bits) {
  if (mode == SensorMode::multi_bit) {
    for (std::size_t i = 0; i < n; ++i)
      out[i] = stats::mle_multi_bit(z[i], frames);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      out[i] = stats::mle_single_bit(z[i], frames, q_or_bits);
  }
}

// Shared tail of both pipelines: exposure estimate -> display image.
ColorImage tone_map_output(Image theta, double alpha,
                           const ReconParams& params) {
  double scale;
  if (alpha > 0.0) {
    scale = 1.0 / alpha;
  } else {
    const double ref = percentile(
        std::span<const double>(theta.data().data(), theta.size()), 0.995);
    scale = ref > 0.0 ? 1.0 / ref : 1.0;
  }
  for (double& v : theta.data()) v *= scale;

  if (params.apply_ccm && params.ccm) {
    params.ccm->validate();
    const std::size_t n = theta.plane_size();
    double* r = theta.plane(0);
    double* g = theta.plane(1);
    double* b = theta.plane(2);
    for (std::size_t i = 0; i < n; ++i) {
      const auto rgb = params.ccm->apply({r[i], g[i], b[i]});
      r[i] = rgb[0];
      g[i] = rgb[1];
      b[i] = rgb[2];
    }
  }
  return gamma_encode(theta, params.display_gamma);
}

} // namespace

double ColorCorrectionMatrix::condition() const {
  const double det = m[0] * (m[4] * m[8] - m[5] * m[7]) -
                     m[1] * (m[3] * m[8] - m[5] * m[6]) +
                     m[2] * (m[3] * m[7] - m[4] * m[6]);
  if (det == 0.0 || !std::isfinite(det))
    return std::numeric_limits<double>::infinity();
  const std::array<double, 9> inv = {
      (m[4] * m[8] - m[5] * m[7]) / det, (m[2] * m[7] - m[1] * m[8]) / det,
      (m[1] * m[5] - m[2] * m[4]) / det, (m[5] * m[6] - m[3] * m[8]) / det,
      (m[0] * m[8] - m[2] * m[6]) / det, (m[2] * m[3] - m[0] * m[5]) / det,
      (m[3] * m[7] - m[4] * m[6]) / det, (m[1] * m[6] - m[0] * m[7]) / det,
      (m[0] * m[4] - m[1] * m[3]) / det};
  const auto inf_norm = [](const std::array<double, 9>& a) {
    double best = 0.0;
    for (int r = 0; r < 3; ++r) {
      const double row =
          std::abs(a[3 * r]) + std::abs(a[3 * r + 1]) + std::abs(a[3 * r + 2]);
      best = std::max(best, row);
    }
    return best;
  };
  return inf_norm(m) * inf_norm(inv);
}

void ColorCorrectionMatrix::validate() const {
  for (double v : m) {
    if (!std::isfinite(v))
      throw std::invalid_argument("color matrix has non-finite entries");
  }
  if (!(condition() < 1e6))
    throw std::invalid_argument("color matrix is singular or ill-conditioned");
}

void ReconParams::validate() const {
  if (!(rho > 0.0)) throw std::invalid_argument("ReconParams: rho must be > 0");
  if (!(lambda > 0.0))
    throw std::invalid_argument("ReconParams: lambda must be > 0");
  if (max_iters < 1)
    throw std::invalid_argument("ReconParams: max_iters must be >= 1");
  if (!(primal_tol > 0.0))
    throw std::invalid_argument("ReconParams: primal_tol must be > 0");
  if (!(display_gamma > 0.0))
    throw std::invalid_argument("ReconParams: display_gamma must be > 0");
}

BinnedImage bin_frames(const FrameStack& stack) {
  stack.validate();
  BinnedImage out;
  out.width = stack.width;
  out.height = stack.height;
  out.frames = stack.frames;
  out.mode = stack.mode;
  out.q_or_bits = stack.q_or_bits;
  out.alpha = stack.alpha;
  out.cfa_code = stack.cfa_code;
  out.z.assign(stack.jots(), 0u);
  for (int t = 0; t < stack.frames; ++t) {
    simd::active().accumulate_u16(stack.frame(t).data(), out.z.data(),
                                  stack.jots());
  }
  return out;
}

Observation mosaic_observation(const StabilizedImage& beta,
                               const CfaMask& cfa) {
  if (beta.width != cfa.width() || beta.height != cfa.height())
    throw std::invalid_argument("mosaic_observation: CFA dimensions mismatch");
  Observation obs;
  obs.values = Image(beta.width, beta.height, 3, 0.0);
  obs.mask.assign(3 * beta.jots(), 0);
  const std::size_t n = beta.jots();
  for (int y = 0; y < beta.height; ++y) {
    for (int x = 0; x < beta.width; ++x) {
      const std::size_t m = static_cast<std::size_t>(y) * beta.width + x;
      const int c = static_cast<int>(cfa.at(x, y));
      obs.values.plane(c)[m] = beta.beta[m];
      obs.mask[c * n + m] = 1;
    }
  }
  return obs;
}

Observation full_observation(const Image& values) {
  if (values.channels() != 3)
    throw std::invalid_argument("full_observation: image must have 3 planes");
  Observation obs;
  obs.values = values;
  obs.mask.assign(values.size(), 1);
  return obs;
}

Image nearest_neighbor_fill(const StabilizedImage& beta, const CfaMask& cfa) {
  const int w = beta.width;
  const int h = beta.height;
  if (w < 2 || h < 2)
    throw std::invalid_argument(
        "nearest_neighbor_fill: mosaic must be at least 2x2");
  Image filled(w, h, 3);
  const auto at = [&](int x, int y) {
    return beta.beta[static_cast<std::size_t>(y) * w + x];
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      // Red sits at the even/even jot of each Bayer cell, blue at odd/odd;
      // green picks the horizontal neighbor inside the cell.
      const int rx = x - (x & 1), ry = y - (y & 1);
      const int bx = (x & 1) ? x : (x + 1 < w ? x + 1 : x - 1);
      const int by = (y & 1) ? y : (y + 1 < h ? y + 1 : y - 1);
      double g;
      if (cfa.at(x, y) == CfaChannel::G) {
        g = at(x, y);
      } else if ((x & 1) == 0 && (y & 1) == 0) {
        g = at(x + 1 < w ? x + 1 : x - 1, y);
      } else {
        g = at(x - 1, y);
      }
      filled.at(0, x, y) = at(rx, ry);
      filled.at(1, x, y) = g;
      filled.at(2, x, y) = at(bx, by);
    }
  }
  return filled;
}

AdmmResult admm_demosaic(const Observation& obs, const Image& v0,
                         const ReconParams& params) {
  params.validate();
  if (!obs.values.same_shape(v0))
    throw std::invalid_argument("admm_demosaic: warm start shape mismatch");
  for (double v : obs.values.data()) {
    if (!std::isfinite(v))
      throw std::invalid_argument("admm_demosaic: non-finite observation");
  }

  const std::size_t n = obs.values.size();
  const double obs_norm = plane_norm(obs.values.data());
  const double divergence_cap = 1e6 * obs_norm;

  denoise::DenoiserSpec spec = params.denoiser;
  spec.sigma = std::sqrt(params.lambda / params.rho);
  spec.channel_sigmas.reset();

  AdmmResult res;
  res.v = v0;
  res.x = Image(obs.values.width(), obs.values.height(), 3);
  Image u(obs.values.width(), obs.values.height(), 3, 0.0);
  Image xu = res.x;

  const auto& kernels = simd::active();
  for (int k = 0; k < params.max_iters; ++k) {
    kernels.admm_x_step(obs.values.data().data(), obs.mask.data(),
                        res.v.data().data(), u.data().data(), params.rho,
                        res.x.data().data(), n);

    const double x_norm = plane_norm(res.x.data());
    if (x_norm > divergence_cap)
      throw DivergenceError(
          "admm_demosaic: iterate norm exceeded 1e6x observation norm at "
          "iteration " +
          std::to_string(k + 1));

    for (std::size_t i = 0; i < n; ++i)
      xu.data()[i] = res.x.data()[i] + u.data()[i];
    Image v_new = denoise::denoise(xu, spec);

    kernels.admm_u_step(u.data().data(), res.x.data().data(),
                        v_new.data().data(), n);

    const double residual =
        std::sqrt(kernels.sum_sq_diff(res.x.data().data(),
                                      v_new.data().data(), n)) /
        std::max(x_norm, 1e-300);
    res.primal_residuals.push_back(residual);
    res.v = std::move(v_new);
    res.iterations = k + 1;
    if (residual <= params.primal_tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

AdmmResult admm_demosaic(const StabilizedImage& beta, const CfaMask& cfa,
                         const ReconParams& params) {
  const Observation obs = mosaic_observation(beta, cfa);
  const Image v0 = nearest_neighbor_fill(beta, cfa);
  return admm_demosaic(obs, v0, params);
}

ColorImage reconstruct_iterative(const FrameStack& stack,
                                 const ReconParams& params) {
  const BinnedImage binned = bin_frames(stack);
  const StabilizedImage beta = stats::anscombe(binned);
  const AdmmResult admm = admm_demosaic(beta, stack.cfa(), params);

  const std::size_t n = admm.v.plane_size();
  Image theta(stack.width, stack.height, 3);
  std::vector<double> zhat(n);
  for (int c = 0; c < 3; ++c) {
    invert_vst_plane(admm.v.plane(c), zhat.data(), n, stack.mode,
                     stack.frames, params.unbiased_inverse);
    mle_plane(zhat.data(), theta.plane(c), n, stack.mode, stack.frames,
              stack.q_or_bits);
  }
  return tone_map_output(std::move(theta), stack.alpha, params);
}

ColorImage reconstruct_fast(const FrameStack& stack,
                            const ReconParams& params) {
  params.validate();
  if (stack.width % 2 != 0 || stack.height % 2 != 0)
    throw std::invalid_argument(
        "reconstruct_fast: stack dimensions must be even, got " +
        std::to_string(stack.width) + "x" + std::to_string(stack.height));

  const BinnedImage binned = bin_frames(stack);
  const StabilizedImage beta = stats::anscombe(binned);

  const int hw = stack.width / 2;
  const int hh = stack.height / 2;
  Image agg(hw, hh, 3);
  const auto at = [&](int x, int y) {
    return beta.beta[static_cast<std::size_t>(y) * stack.width + x];
  };
  for (int cy = 0; cy < hh; ++cy) {
    for (int cx = 0; cx < hw; ++cx) {
      const int x = 2 * cx, y = 2 * cy;
      agg.at(0, cx, cy) = at(x, y);
      agg.at(1, cx, cy) = 0.5 * (at(x + 1, y) + at(x, y + 1));
      agg.at(2, cx, cy) = at(x + 1, y + 1);
    }
  }

  // Stabilized sums carry std 1/2 per jot; the averaged green carries
  // 1/(2 sqrt(2)). The spec's sigma acts as a global strength scale.
  const double s = params.denoiser.sigma;
  const std::array<double, 3> sigmas = {0.5 * s, 0.5 * s / std::sqrt(2.0),
                                        0.5 * s};
  const Image den = denoise::denoise_per_channel(agg, sigmas, params.denoiser);

  const std::size_t n = den.plane_size();
  Image theta(hw, hh, 3);
  std::vector<double> zhat(n);
  for (int c = 0; c < 3; ++c) {
    invert_vst_plane(den.plane(c), zhat.data(), n, stack.mode, stack.frames,
                     params.unbiased_inverse);
    mle_plane(zhat.data(), theta.plane(c), n, stack.mode, stack.frames,
              stack.q_or_bits);
  }
  return tone_map_output(std::move(theta), stack.alpha, params);
}

ColorCorrectionMatrix fit_color_correction(
    std::span<const std::array<double, 3>> measured,
    std::span<const std::array<double, 3>> reference) {
  if (measured.size() != reference.size())
    throw std::invalid_argument("fit_color_correction: list size mismatch");
  if (measured.size() < 3)
    throw std::invalid_argument(
        "fit_color_correction: need at least 3 patches");

  // Normal equations: A (sum m m^T) = sum r m^T.
  std::array<double, 9> gram{};
  std::array<double, 9> cross{};
  for (std::size_t i = 0; i < measured.size(); ++i) {
    const auto& mi = measured[i];
    const auto& ri = reference[i];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        gram[3 * a + b] += mi[a] * mi[b];
        cross[3 * a + b] += ri[a] * mi[b];
      }
    }
  }

  const double det = gram[0] * (gram[4] * gram[8] - gram[5] * gram[7]) -
                     gram[1] * (gram[3] * gram[8] - gram[5] * gram[6]) +
                     gram[2] * (gram[3] * gram[7] - gram[4] * gram[6]);
  double scale = 0.0;
  for (double v : gram) scale = std::max(scale, std::abs(v));
  if (!std::isfinite(det) || std::abs(det) <= 1e-12 * scale * scale * scale)
    throw std::invalid_argument(
        "fit_color_correction: measured patches are rank-deficient");

  const std::array<double, 9> ginv = {
      (gram[4] * gram[8] - gram[5] * gram[7]) / det,
      (gram[2] * gram[7] - gram[1] * gram[8]) / det,
      (gram[1] * gram[5] - gram[2] * gram[4]) / det,
      (gram[5] * gram[6] - gram[3] * gram[8]) / det,
      (gram[0] * gram[8] - gram[2] * gram[6]) / det,
      (gram[2] * gram[3] - gram[0] * gram[5]) / det,
      (gram[3] * gram[7] - gram[4] * gram[6]) / det,
      (gram[1] * gram[6] - gram[0] * gram[7]) / det,
      (gram[0] * gram[4] - gram[1] * gram[3]) / det};

  ColorCorrectionMatrix ccm;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += cross[3 * a + k] * ginv[3 * k + b];
      ccm.m[3 * a + b] = s;
    }
  }
  return ccm;
}

ColorCorrectionMatrix fit_color_correction_from_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open patch chart '" + path + "'");
  std::vector<std::array<double, 3>> measured, reference;
  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double mr, mg, mb, rr, rg, rb;
    if (!(ss >> mr)) continue; // blank or comment-only line
    if (!(ss >> mg >> mb >> rr >> rg >> rb))
      throw IoError("patch chart '" + path + "' line " +
                    std::to_string(line_no) + ": expected six reals");
    double trailing;
    if (ss >> trailing)
      throw IoError("patch chart '" + path + "' line " +
                    std::to_string(line_no) + ": trailing values");
    measured.push_back({mr, mg, mb});
    reference.push_back({rr, rg, rb});
  }
  return fit_color_correction(measured, reference);
}

Image gamma_encode(const Image& linear, double display_gamma) {
  Image out = linear;
  const double inv = 1.0 / display_gamma;
  for (double& v : out.data()) {
    v = std::clamp(v, 0.0, 1.0);
    v = std::pow(v, inv);
  }
  out.colorspace = Colorspace::gamma_encoded;
  return out;
}

double percentile(std::span<const double> values, double fraction) {
  if (values.empty()) return 0.0;
  std::vector<double> copy(values.begin(), values.end());
  const std::size_t idx = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(copy.size() - 1)));
  std::nth_element(copy.begin(), copy.begin() + idx, copy.end());
  return copy[idx];
}

} // namespace qis::recon
