#include "qis/qisf.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

namespace qis::io {

namespace {

static_assert(std::endian::native == std::endian::little,
              "QISF serialization assumes a little-endian host");

template <typename T>
void put(std::vector<unsigned char>& buf, T value) {
  unsigned char raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  buf.insert(buf.end(), raw, raw + sizeof(T));
}

template <typename T>
T get(const unsigned char* p) {
  T value;
  std::memcpy(&value, p, sizeof(T));
  return value;
}

} // namespace

FrameStack read_stack(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open stack '" + path + "'");

  unsigned char header[kQisfHeaderSize];
  file.read(reinterpret_cast<char*>(header), kQisfHeaderSize);
  if (static_cast<std::size_t>(file.gcount()) != kQisfHeaderSize)
    throw IoError("qisf '" + path + "': truncated header");

  if (std::memcmp(header, "QISF", 4) != 0)
    throw IoError("qisf '" + path + "': bad magic");
  const auto version = get<std::uint16_t>(header + 4);
  if (version != 1)
    throw IoError("qisf '" + path + "': unsupported version " +
                  std::to_string(version));

  FrameStack stack;
  const auto width = get<std::uint32_t>(header + 6);
  const auto height = get<std::uint32_t>(header + 10);
  const auto frames = get<std::uint16_t>(header + 14);
  const auto mode = header[16];
  const auto q_or_bits = header[17];
  stack.cfa_code = header[18];
  stack.alpha = get<double>(header + 19);
  stack.seed = get<std::uint64_t>(header + 27);

  if (width == 0 || height == 0)
    throw IoError("qisf '" + path + "': zero dimensions");
  if (width > (1u << 20) || height > (1u << 20))
    throw IoError("qisf '" + path + "': implausible dimensions " +
                  std::to_string(width) + "x" + std::to_string(height));
  if (frames == 0) throw IoError("qisf '" + path + "': zero frames");
  if (mode > 1)
    throw IoError("qisf '" + path + "': bad mode " + std::to_string(mode));
  stack.mode = static_cast<SensorMode>(mode);
  if (q_or_bits < 1 ||
      (stack.mode == SensorMode::multi_bit && q_or_bits > 16))
    throw IoError("qisf '" + path + "': bad q_or_L " +
                  std::to_string(q_or_bits));
  if (stack.cfa_code != CfaMask::kRggb)
    throw IoError("qisf '" + path + "': unknown cfa code " +
                  std::to_string(stack.cfa_code));

  stack.width = static_cast<int>(width);
  stack.height = static_cast<int>(height);
  stack.frames = frames;
  stack.q_or_bits = q_or_bits;

  // Size arithmetic in 64 bits, validated against the actual file length
  // before any payload allocation.
  const std::uint64_t bytes_per_jot =
      stack.mode == SensorMode::single_bit ? 1 : 2;
  const std::uint64_t expected = static_cast<std::uint64_t>(width) * height *
                                 frames * bytes_per_jot;
  file.seekg(0, std::ios::end);
  const std::uint64_t file_size = static_cast<std::uint64_t>(file.tellg());
  if (file_size != kQisfHeaderSize + expected)
    throw IoError("qisf '" + path + "': payload length mismatch, expected " +
                  std::to_string(expected) + " bytes, got " +
                  std::to_string(file_size - kQisfHeaderSize));
  file.seekg(kQisfHeaderSize, std::ios::beg);

  std::vector<unsigned char> payload(expected);
  file.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(expected));
  if (static_cast<std::uint64_t>(file.gcount()) != expected)
    throw IoError("qisf '" + path + "': truncated payload");

  stack.data.resize(stack.jots() * stack.frames);
  const std::uint16_t cap = stack.value_cap();
  for (std::size_t i = 0; i < stack.data.size(); ++i) {
    const std::uint16_t v =
        bytes_per_jot == 1
            ? payload[i]
            : get<std::uint16_t>(payload.data() + 2 * i);
    if (v > cap)
      throw IoError("qisf '" + path + "': count " + std::to_string(v) +
                    " exceeds mode range at sample " + std::to_string(i));
    stack.data[i] = v;
  }
  return stack;
}

void write_stack(const std::string& path, const FrameStack& stack) {
  stack.validate();
  if (stack.frames > 65535)
    throw std::invalid_argument("write_stack: frame count exceeds u16");
  std::vector<unsigned char> buf;
  buf.reserve(kQisfHeaderSize + stack.data.size() * 2);
  buf.insert(buf.end(), {'Q', 'I', 'S', 'F'});
  put<std::uint16_t>(buf, 1);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(stack.width));
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(stack.height));
  put<std::uint16_t>(buf, static_cast<std::uint16_t>(stack.frames));
  buf.push_back(static_cast<unsigned char>(stack.mode));
  buf.push_back(static_cast<unsigned char>(stack.q_or_bits));
  buf.push_back(stack.cfa_code);
  put<double>(buf, stack.alpha);
  put<std::uint64_t>(buf, stack.seed);

  if (stack.mode == SensorMode::single_bit) {
    for (std::uint16_t v : stack.data)
      buf.push_back(static_cast<unsigned char>(v));
  } else {
    for (std::uint16_t v : stack.data) put<std::uint16_t>(buf, v);
  }

  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot create stack '" + path + "'");
  file.write(reinterpret_cast<const char*>(buf.data()),
             static_cast<std::streamsize>(buf.size()));
  if (!file) throw IoError("short write to stack '" + path + "'");
}

} // namespace qis::io
