#include "qis/sensor.hpp"

#include <cmath>
#include <string>

#include "qis/rng.hpp"

namespace qis::sim {

Image expose(const Image& scene, const CfaMask& cfa, double alpha) {
  validate_scene(scene);
  if (!(alpha > 0.0)) throw std::invalid_argument("expose: alpha must be > 0");
  if (scene.width() != cfa.width() || scene.height() != cfa.height())
    throw std::invalid_argument(
        "expose: scene " + std::to_string(scene.width()) + "x" +
        std::to_string(scene.height()) + " does not match CFA " +
        std::to_string(cfa.width()) + "x" + std::to_string(cfa.height()));
  Image theta(scene.width(), scene.height(), 1);
  for (int y = 0; y < scene.height(); ++y) {
    for (int x = 0; x < scene.width(); ++x) {
      const int c = static_cast<int>(cfa.at(x, y));
      theta.at(0, x, y) = alpha * scene.at(c, x, y);
    }
  }
  return theta;
}

std::vector<std::uint32_t> sample_photons(const Image& theta,
                                          const SensorConfig& config,
                                          int frame_index) {
  const std::size_t n = theta.plane_size();
  std::vector<std::uint32_t> counts(n);
  const double* mean = theta.plane(0);
  for (std::size_t m = 0; m < n; ++m) {
    counts[m] = rng::poisson_at(config.seed, frame_index, m,
                                mean[m] + config.dark_count_rate);
  }
  return counts;
}

std::vector<std::uint16_t> quantize_single_bit(std::span<const std::uint32_t> y,
                                               int q) {
  if (q < 1) throw std::invalid_argument("quantize_single_bit: q must be >= 1");
  std::vector<std::uint16_t> bits(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    bits[i] = y[i] >= static_cast<std::uint32_t>(q) ? 1 : 0;
  return bits;
}

std::vector<std::uint16_t> quantize_multi_bit(std::span<const std::uint32_t> y,
                                              int bits) {
  if (bits < 1 || bits > 16)
    throw std::invalid_argument("quantize_multi_bit: L must be in [1,16]");
  const std::uint32_t cap = (1u << bits) - 1u;
  std::vector<std::uint16_t> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    out[i] = static_cast<std::uint16_t>(y[i] < cap ? y[i] : cap);
  return out;
}

std::vector<double> add_read_noise(std::span<const std::uint32_t> y,
                                   double sigma, std::uint64_t seed,
                                   int frame_index) {
  if (sigma < 0.0)
    throw std::invalid_argument("add_read_noise: sigma must be >= 0");
  std::vector<double> analog(y.size());
  if (sigma == 0.0) {
    for (std::size_t i = 0; i < y.size(); ++i) analog[i] = y[i];
    return analog;
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    rng::Stream s(seed, rng::StreamKind::read_noise, frame_index, i);
    analog[i] = y[i] + sigma * s.gaussian();
  }
  return analog;
}

FrameStack simulate_stack(const Image& scene, const CfaMask& cfa,
                          const SensorConfig& config) {
  config.validate();
  const Image theta = expose(scene, cfa, config.alpha);

  FrameStack stack;
  stack.width = scene.width();
  stack.height = scene.height();
  stack.frames = config.frames;
  stack.mode = config.mode;
  stack.q_or_bits = config.q_or_bits();
  stack.alpha = config.alpha;
  stack.seed = config.seed;
  stack.cfa_code = cfa.code();
  stack.data.resize(stack.jots() * config.frames);

  std::vector<std::uint32_t> rounded(stack.jots());
  for (int t = 0; t < config.frames; ++t) {
    std::vector<std::uint32_t> counts = sample_photons(theta, config, t);
    if (config.read_noise_sigma > 0.0) {
      const std::vector<double> analog =
          add_read_noise(counts, config.read_noise_sigma, config.seed, t);
      for (std::size_t i = 0; i < analog.size(); ++i) {
        const long long r = std::llround(analog[i]);
        rounded[i] = r < 0 ? 0u : static_cast<std::uint32_t>(r);
      }
    } else {
      rounded = counts;
    }
    const std::vector<std::uint16_t> quantized =
        config.mode == SensorMode::single_bit
            ? quantize_single_bit(rounded, config.threshold)
            : quantize_multi_bit(rounded, config.bits);
    std::copy(quantized.begin(), quantized.end(), stack.frame(t).begin());
  }
  return stack;
}

double alpha_for_mean_photons(const Image& scene, const CfaMask& cfa,
                              double photons_per_frame) {
  if (!(photons_per_frame > 0.0))
    throw std::invalid_argument("photons_per_frame must be > 0");
  const Image unit = expose(scene, cfa, 1.0);
  double sum = 0.0;
  for (double v : unit.plane_span(0)) sum += v;
  const double mean = sum / unit.plane_size();
  if (!(mean > 0.0))
    throw std::invalid_argument(
        "scene is all-black; photon level cannot set a gain");
  return photons_per_frame / mean;
}

} // namespace qis::sim
