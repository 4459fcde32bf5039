#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qis/image.hpp"

namespace qis::denoise {

enum class Boundary : std::uint8_t { mirror, toroidal };

// Selects a registered denoiser and its strength. `sigma` is the
// hypothesized standard deviation of the i.i.d. Gaussian noise the denoiser
// should remove; kind-specific knobs ride along.
struct DenoiserSpec {
  std::string kind = "gaussian";
  double sigma = 1.0;
  std::optional<std::array<double, 3>> channel_sigmas;
  int patch_radius = 1;   // nlm
  int search_radius = 3;  // nlm
  double smooth_weight = 1.0;
  Boundary boundary = Boundary::mirror;

  void validate() const;
};

// A denoiser processes one plane; color images are handled channel by
// channel (all baselines are channel-separable).
using ChannelDenoiser =
    std::function<void(const double* in, double* out, int width, int height,
                       double sigma, const DenoiserSpec& spec)>;

void register_denoiser(const std::string& kind, ChannelDenoiser fn);
bool is_registered(const std::string& kind);
std::vector<std::string> registered_kinds();

// Deterministic, shape-preserving denoise of a 1- or 3-plane image.
// Non-finite input is rejected.
Image denoise(const Image& image, const DenoiserSpec& spec);

// Channel-specific strengths (stabilized Bayer sums give the green channel
// half the variance of red/blue).
Image denoise_per_channel(const Image& image,
                          const std::array<double, 3>& sigmas,
                          const DenoiserSpec& spec);

// Boundary index helpers shared by the baselines.
inline int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}
inline int wrap_index(int i, int n) {
  int m = i % n;
  if (m < 0) m += n;
  return m;
}

} // namespace qis::denoise
