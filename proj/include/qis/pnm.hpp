#pragma once

#include <string>

#include "qis/image.hpp"

namespace qis::io {

// Reads a binary portable pixmap (P6) or graymap (P5) with maxval 255 or
// 65535. Samples map to [0,1] by v/maxval; graymaps are replicated across
// the three planes. With gamma_decode set, values are additionally raised
// to the 2.2 power (display-referred sources).
Image read_pnm(const std::string& path, bool gamma_decode = false);

// Writes an 8-bit binary P6. Values are clipped to [0,1] and scaled by 255.
void write_ppm8(const std::string& path, const Image& image);

} // namespace qis::io
