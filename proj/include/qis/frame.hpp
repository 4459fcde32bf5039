#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qis/error.hpp"
#include "qis/image.hpp"

namespace qis {

enum class SensorMode : std::uint8_t { single_bit = 0, multi_bit = 1 };

// Acquisition parameters for one simulated capture.
struct SensorConfig {
  double alpha = 1.0;            // expected photons per unit intensity per frame
  int frames = 1;                // T
  SensorMode mode = SensorMode::multi_bit;
  int threshold = 1;             // q, single-bit mode
  int bits = 8;                  // L, multi-bit mode
  double read_noise_sigma = 0.0; // electrons rms
  double dark_count_rate = 0.0;  // expected dark electrons per jot per frame
  std::uint64_t seed = 0;

  int q_or_bits() const {
    return mode == SensorMode::single_bit ? threshold : bits;
  }

  void validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("SensorConfig: alpha must be > 0");
    if (frames < 1) throw std::invalid_argument("SensorConfig: frames must be >= 1");
    if (mode == SensorMode::single_bit && threshold < 1)
      throw std::invalid_argument("SensorConfig: threshold q must be >= 1");
    if (mode == SensorMode::multi_bit && (bits < 1 || bits > 16))
      throw std::invalid_argument("SensorConfig: bits L must be in [1,16]");
    if (read_noise_sigma < 0.0)
      throw std::invalid_argument("SensorConfig: read_noise_sigma must be >= 0");
    if (dark_count_rate < 0.0)
      throw std::invalid_argument("SensorConfig: dark_count_rate must be >= 0");
  }
};

// Largest representable per-frame count for a mode.
inline std::uint16_t mode_value_cap(SensorMode mode, int q_or_bits) {
  if (mode == SensorMode::single_bit) return 1;
  return static_cast<std::uint16_t>((1u << q_or_bits) - 1u);
}

// T quantized frames plus the acquisition metadata needed to invert them.
struct FrameStack {
  int width = 0;
  int height = 0;
  int frames = 0; // T
  SensorMode mode = SensorMode::multi_bit;
  int q_or_bits = 1;  // q (single-bit) or L (multi-bit)
  double alpha = 0.0; // 0 if unknown
  std::uint64_t seed = 0;
  std::uint8_t cfa_code = CfaMask::kRggb;
  std::vector<std::uint16_t> data; // frames * width * height, row-major

  std::size_t jots() const {
    return static_cast<std::size_t>(width) * height;
  }
  std::uint16_t value_cap() const { return mode_value_cap(mode, q_or_bits); }
  std::span<const std::uint16_t> frame(int t) const {
    return {data.data() + jots() * t, jots()};
  }
  std::span<std::uint16_t> frame(int t) {
    return {data.data() + jots() * t, jots()};
  }
  CfaMask cfa() const { return CfaMask(width, height, cfa_code); }

  void validate() const;
};

// Per-jot temporal sums Z of a frame stack.
struct BinnedImage {
  int width = 0;
  int height = 0;
  int frames = 0;
  SensorMode mode = SensorMode::multi_bit;
  int q_or_bits = 1;
  double alpha = 0.0;
  std::uint8_t cfa_code = CfaMask::kRggb;
  std::vector<std::uint32_t> z;

  std::size_t jots() const {
    return static_cast<std::size_t>(width) * height;
  }
  std::uint32_t max_sum() const {
    return static_cast<std::uint32_t>(frames) * value_cap();
  }
  std::uint16_t value_cap() const { return mode_value_cap(mode, q_or_bits); }
  CfaMask cfa() const { return CfaMask(width, height, cfa_code); }
};

// Variance-stabilized sums; carries the metadata the inverse transform needs.
struct StabilizedImage {
  int width = 0;
  int height = 0;
  int frames = 0;
  SensorMode mode = SensorMode::multi_bit;
  int q_or_bits = 1;
  double alpha = 0.0;
  std::uint8_t cfa_code = CfaMask::kRggb;
  std::vector<double> beta;

  std::size_t jots() const {
    return static_cast<std::size_t>(width) * height;
  }
  CfaMask cfa() const { return CfaMask(width, height, cfa_code); }
};

} // namespace qis
