#include "qis/pnm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <vector>

namespace qis::io {

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in, const std::string& path) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) {
        in.unget(); // leave the delimiter for the header terminator check
        return tok;
      }
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) throw IoError("pnm '" + path + "': truncated header");
  return tok;
}

long parse_long(const std::string& tok, const std::string& path,
                const char* what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    throw IoError("pnm '" + path + "': bad " + what + " '" + tok + "'");
  }
  if (pos != tok.size())
    throw IoError("pnm '" + path + "': bad " + what + " '" + tok + "'");
  return v;
}

} // namespace

Image read_pnm(const std::string& path, bool gamma_decode) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open image '" + path + "'");

  const std::string magic = next_token(file, path);
  if (magic != "P5" && magic != "P6")
    throw IoError("pnm '" + path + "': unsupported magic '" + magic +
                  "' (want binary P5 or P6)");
  const bool color = magic == "P6";

  const long width = parse_long(next_token(file, path), path, "width");
  const long height = parse_long(next_token(file, path), path, "height");
  const long maxval = parse_long(next_token(file, path), path, "maxval");
  if (width <= 0 || height <= 0 || width > 1 << 20 || height > 1 << 20)
    throw IoError("pnm '" + path + "': invalid dimensions " +
                  std::to_string(width) + "x" + std::to_string(height));
  if (maxval != 255 && maxval != 65535)
    throw IoError("pnm '" + path + "': unsupported maxval " +
                  std::to_string(maxval) + " (want 255 or 65535)");

  // Exactly one whitespace byte separates the header from the payload.
  const int sep = file.get();
  if (sep == EOF || !std::isspace(sep))
    throw IoError("pnm '" + path + "': missing header terminator");

  const int samples_per_pixel = color ? 3 : 1;
  const int bytes_per_sample = maxval == 255 ? 1 : 2;
  const std::size_t expected = static_cast<std::size_t>(width) * height *
                               samples_per_pixel * bytes_per_sample;
  std::vector<unsigned char> payload(expected);
  file.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(expected));
  const std::size_t got = static_cast<std::size_t>(file.gcount());
  if (got != expected)
    throw IoError("pnm '" + path + "': truncated payload, expected " +
                  std::to_string(expected) + " bytes, got " +
                  std::to_string(got));

  Image out(static_cast<int>(width), static_cast<int>(height), 3);
  const double maxval_d = static_cast<double>(maxval);
  const std::size_t n = out.plane_size();
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < samples_per_pixel; ++c) {
      const std::size_t s = (i * samples_per_pixel + c) * bytes_per_sample;
      // 16-bit samples are big-endian per the netpbm convention.
      const unsigned raw = bytes_per_sample == 1
                               ? payload[s]
                               : (static_cast<unsigned>(payload[s]) << 8) |
                                     payload[s + 1];
      double v = raw / maxval_d;
      if (gamma_decode) v = std::pow(v, 2.2);
      if (color) {
        out.plane(c)[i] = v;
      } else {
        out.plane(0)[i] = v;
        out.plane(1)[i] = v;
        out.plane(2)[i] = v;
      }
    }
  }
  return out;
}

void write_ppm8(const std::string& path, const Image& image) {
  if (image.channels() != 3)
    throw std::invalid_argument("write_ppm8: image must have 3 planes");
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot create image '" + path + "'");
  file << "P6\n"
       << image.width() << " " << image.height() << "\n"
       << 255 << "\n";
  const std::size_t n = image.plane_size();
  std::vector<unsigned char> payload(n * 3);
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      const double v = std::clamp(image.plane(c)[i], 0.0, 1.0);
      payload[i * 3 + c] =
          static_cast<unsigned char>(std::lround(v * 255.0));
    }
  }
  file.write(reinterpret_cast<const char*>(payload.data()),
             static_cast<std::streamsize>(payload.size()));
  if (!file) throw IoError("short write to image '" + path + "'");
}

} // namespace qis::io
