#include "qis/image.hpp"

#include <cmath>

#include "qis/frame.hpp"

namespace qis {

void validate_scene(const Image& scene) {
  if (scene.channels() != 3)
    throw std::invalid_argument("scene must have exactly 3 planes");
  if (scene.colorspace != Colorspace::linear)
    throw std::invalid_argument("scene must be linear-light");
  for (double v : scene.data()) {
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument("scene values must lie in [0,1]");
  }
}

void FrameStack::validate() const {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("FrameStack: dimensions must be positive");
  if (frames < 1) throw std::invalid_argument("FrameStack: frames must be >= 1");
  if (mode == SensorMode::single_bit && q_or_bits < 1)
    throw std::invalid_argument("FrameStack: threshold q must be >= 1");
  if (mode == SensorMode::multi_bit && (q_or_bits < 1 || q_or_bits > 16))
    throw std::invalid_argument("FrameStack: bits L must be in [1,16]");
  if (data.size() != jots() * frames)
    throw std::invalid_argument("FrameStack: payload size mismatch");
  const std::uint16_t cap = value_cap();
  for (std::uint16_t v : data) {
    if (v > cap)
      throw std::invalid_argument("FrameStack: count exceeds mode range");
  }
}

} // namespace qis
