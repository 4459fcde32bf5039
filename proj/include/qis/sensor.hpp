#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qis/frame.hpp"
#include "qis/image.hpp"

namespace qis::sim {

// Mosaiced exposure map: theta_m = alpha * c_channel(m)(m). Scene and mask
// must have equal dimensions (no spatial oversampling; one jot per pixel).
Image expose(const Image& scene, const CfaMask& cfa, double alpha);

// Independent Poisson draw per jot with mean theta_m + dark_count_rate.
// Deterministic given (config.seed, frame_index, jot index) and independent
// of evaluation order.
std::vector<std::uint32_t> sample_photons(const Image& theta,
                                          const SensorConfig& config,
                                          int frame_index);

// B_m = 1 iff Y_m >= q.
std::vector<std::uint16_t> quantize_single_bit(std::span<const std::uint32_t> y,
                                               int q);

// B_m = min(Y_m, 2^L - 1).
std::vector<std::uint16_t> quantize_multi_bit(std::span<const std::uint32_t> y,
                                              int bits);

// Y + eta with eta i.i.d. Gaussian(0, sigma^2); sigma = 0 returns Y exactly.
// The caller re-thresholds at half-integers before quantization.
std::vector<double> add_read_noise(std::span<const std::uint32_t> y,
                                   double sigma, std::uint64_t seed,
                                   int frame_index);

// Full forward model: expose -> Poisson arrival -> (read noise + rounding)
// -> quantize, for T frames. Pure function of (scene, cfa, config).
FrameStack simulate_stack(const Image& scene, const CfaMask& cfa,
                          const SensorConfig& config);

// Gain that puts the mean mosaiced exposure at `photons_per_frame` photons
// per jot per frame for this scene.
double alpha_for_mean_photons(const Image& scene, const CfaMask& cfa,
                              double photons_per_frame);

} // namespace qis::sim
