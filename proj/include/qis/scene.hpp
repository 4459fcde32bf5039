#pragma once

#include "qis/image.hpp"

namespace qis {

// Deterministic synthetic evaluation scene: color-checker style patches,
// smooth gradients, disks, and a frequency wedge. Linear light, values in
// (0, 1). The bundled data/testscene_256.ppm is this scene at 256x256.
Image make_test_scene(int width, int height);

} // namespace qis
