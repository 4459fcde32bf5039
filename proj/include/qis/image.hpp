#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qis/error.hpp"

namespace qis {

enum class Colorspace : std::uint8_t { linear, gamma_encoded };

// Planar real-valued image: `channels` planes of width*height doubles,
// row-major within each plane.
class Image {
public:
  Image() = default;
  Image(int width, int height, int channels, double fill = 0.0)
      : width_(width), height_(height), channels_(channels),
        data_(static_cast<std::size_t>(width) * height * channels, fill) {
    if (width <= 0 || height <= 0 || channels <= 0)
      throw std::invalid_argument("Image: dimensions must be positive");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t plane_size() const {
    return static_cast<std::size_t>(width_) * height_;
  }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double* plane(int c) { return data_.data() + plane_size() * c; }
  const double* plane(int c) const { return data_.data() + plane_size() * c; }
  std::span<double> plane_span(int c) { return {plane(c), plane_size()}; }
  std::span<const double> plane_span(int c) const {
    return {plane(c), plane_size()};
  }

  double& at(int c, int x, int y) {
    return data_[plane_size() * c + static_cast<std::size_t>(y) * width_ + x];
  }
  double at(int c, int x, int y) const {
    return data_[plane_size() * c + static_cast<std::size_t>(y) * width_ + x];
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Image& o) const {
    return width_ == o.width_ && height_ == o.height_ &&
           channels_ == o.channels_;
  }

  Colorspace colorspace = Colorspace::linear;

private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

// Ground-truth scenes and reconstructed outputs are both planar RGB images;
// the colorspace tag tells them apart.
using SceneImage = Image;
using ColorImage = Image;

// Throws unless `scene` is a 3-plane linear image with every value in [0,1].
void validate_scene(const Image& scene);

enum class CfaChannel : std::uint8_t { R = 0, G = 1, B = 2 };

// Color filter array: assigns exactly one channel to each jot. Only the
// standard RGGB Bayer layout (code 0, red at (0,0)) is defined.
class CfaMask {
public:
  static constexpr std::uint8_t kRggb = 0;

  CfaMask() = default;
  CfaMask(int width, int height, std::uint8_t code = kRggb)
      : width_(width), height_(height), code_(code) {
    if (width <= 0 || height <= 0)
      throw std::invalid_argument("CfaMask: dimensions must be positive");
    if (code != kRggb)
      throw std::invalid_argument("CfaMask: unknown pattern code " +
                                  std::to_string(code));
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::uint8_t code() const { return code_; }

  CfaChannel at(int x, int y) const {
    const bool row_even = (y % 2) == 0;
    const bool col_even = (x % 2) == 0;
    if (row_even && col_even) return CfaChannel::R;
    if (!row_even && !col_even) return CfaChannel::B;
    return CfaChannel::G;
  }

private:
  int width_ = 0;
  int height_ = 0;
  std::uint8_t code_ = kRggb;
};

} // namespace qis
