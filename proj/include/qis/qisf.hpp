#pragma once

#include <string>

#include "qis/frame.hpp"

namespace qis::io {

// QISF binary stack format, version 1. Little-endian header:
//   magic "QISF" (4 bytes), version u16, width u32, height u32, T u16,
//   mode u8 (0 single-bit, 1 multi-bit), q_or_L u8, cfa_code u8 (0 RGGB),
//   alpha f64 (0 if unknown), seed u64
// followed by T row-major frames: one byte per jot in mode 0, two
// little-endian bytes per jot in mode 1. Round trips are bit-exact.
inline constexpr std::size_t kQisfHeaderSize = 4 + 2 + 4 + 4 + 2 + 1 + 1 + 1 + 8 + 8;

FrameStack read_stack(const std::string& path);
void write_stack(const std::string& path, const FrameStack& stack);

} // namespace qis::io
