#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qis/denoise.hpp"
#include "qis/frame.hpp"
#include "qis/image.hpp"

namespace qis::recon {

// 3x3 linear color correction, applied as a left multiplication on linear
// RGB triples.
struct ColorCorrectionMatrix {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1}; // row-major

  std::array<double, 3> apply(const std::array<double, 3>& rgb) const {
    return {m[0] * rgb[0] + m[1] * rgb[1] + m[2] * rgb[2],
            m[3] * rgb[0] + m[4] * rgb[1] + m[5] * rgb[2],
            m[6] * rgb[0] + m[7] * rgb[1] + m[8] * rgb[2]};
  }

  // Infinity-norm condition estimate; throws unless finite and < 1e6.
  double condition() const;
  void validate() const;
};

struct ReconParams {
  double rho = 1.0;       // ADMM penalty
  double lambda = 0.05;   // regularization weight
  int max_iters = 50;
  double primal_tol = 1e-4; // relative ||x - v|| / ||x||
  denoise::DenoiserSpec denoiser;
  double display_gamma = 2.2;
  bool apply_ccm = false;
  std::optional<ColorCorrectionMatrix> ccm;
  bool unbiased_inverse = false; // bias-corrected Poisson inverse transform

  void validate() const;
};

// Z_m = sum_t B_{m,t}; acquisition metadata carried through.
BinnedImage bin_frames(const FrameStack& stack);

// Per-(jot, channel) observation: `values` holds the stabilized measurement
// where `mask` is 1 and zero elsewhere. This realizes S^T T(z) for both the
// mosaic case and the fully-observed case.
struct Observation {
  Image values;                   // 3 planes
  std::vector<std::uint8_t> mask; // 3 * width * height
};

Observation mosaic_observation(const StabilizedImage& beta,
                               const CfaMask& cfa);
Observation full_observation(const Image& values);

// Channel-wise nearest-neighbor fill of the mosaic; the ADMM warm start.
Image nearest_neighbor_fill(const StabilizedImage& beta, const CfaMask& cfa);

struct AdmmResult {
  Image v; // the returned estimate (stabilized domain)
  Image x; // data-fidelity iterate at termination
  int iterations = 0;
  bool converged = false;
  std::vector<double> primal_residuals;
};

// Plug-and-play ADMM for the joint demosaic-denoise problem:
//   x <- (S^T S + rho I)^-1 (S^T beta + rho (v - u))   [pointwise]
//   v <- D_sigma(x + u),  sigma = sqrt(lambda / rho)
//   u <- u + (x - v)
// Stops at the relative primal tolerance or max_iters; throws
// DivergenceError if ||x|| exceeds 1e6 ||beta||.
AdmmResult admm_demosaic(const Observation& obs, const Image& v0,
                         const ReconParams& params);
AdmmResult admm_demosaic(const StabilizedImage& beta, const CfaMask& cfa,
                         const ReconParams& params);

// Full iterative pipeline: bin -> stabilize -> ADMM demosaic-denoise ->
// inverse transform -> MLE tone map -> normalize -> (CCM) -> gamma encode.
// Output is gamma-encoded at the stack's jot resolution.
ColorImage reconstruct_iterative(const FrameStack& stack,
                                 const ReconParams& params);

// Non-iterative four-jot path: each 2x2 Bayer cell becomes one pixel (green
// averaged over its two jots), denoised once per channel with strengths
// (1/2, 1/(2*sqrt(2)), 1/2) scaled by the spec's sigma. Output is
// gamma-encoded at half resolution. Requires even stack dimensions.
ColorImage reconstruct_fast(const FrameStack& stack,
                            const ReconParams& params);

// Least-squares fit of reference ~= A * measured over matching RGB triples
// (normal equations). Throws on rank-deficient measurements.
ColorCorrectionMatrix fit_color_correction(
    std::span<const std::array<double, 3>> measured,
    std::span<const std::array<double, 3>> reference);

// Patch-chart file: one line per patch, six reals (measured R G B then
// reference R G B), '#' comments allowed.
ColorCorrectionMatrix fit_color_correction_from_file(const std::string& path);

// Display helpers shared by both pipelines and the CLI.
Image gamma_encode(const Image& linear, double display_gamma);
double percentile(std::span<const double> values, double fraction);

} // namespace qis::recon
