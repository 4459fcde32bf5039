#include "qis/rng.hpp"

#include <cmath>

namespace qis::rng {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhilo(std::uint64_t a, std::uint64_t b,
                             std::uint64_t& hi) {
  const unsigned __int128 p =
      static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
  hi = static_cast<std::uint64_t>(p >> 64);
  return static_cast<std::uint64_t>(p);
}

} // namespace

std::array<std::uint64_t, 4> philox4x64(
    const std::array<std::uint64_t, 4>& counter,
    const std::array<std::uint64_t, 2>& key) {
  std::array<std::uint64_t, 4> c = counter;
  std::array<std::uint64_t, 2> k = key;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    std::uint64_t hi0, hi1;
    const std::uint64_t lo0 = mulhilo(kMul0, c[0], hi0);
    const std::uint64_t lo1 = mulhilo(kMul1, c[2], hi1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

void Stream::refill() {
  buf_ = philox4x64(counter_, key_);
  ++counter_[0];
  pos_ = 0;
}

double Stream::gaussian() {
  const double u1 = uniform_open();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

namespace {

// Knuth's product-of-uniforms method; exact for moderate means.
std::uint32_t poisson_small(Stream& s, double mean) {
  if (mean <= 0.0) return 0;
  const double limit = std::exp(-mean);
  double prod = 1.0;
  std::uint32_t k = 0;
  do {
    prod *= s.uniform();
    ++k;
  } while (prod > limit);
  return k - 1;
}

} // namespace

std::uint32_t Stream::poisson(double mean) {
  // Poisson additivity: split large means into chunks the product method
  // handles without exp() underflow.
  std::uint32_t total = 0;
  while (mean > 50.0) {
    total += poisson_small(*this, 50.0);
    mean -= 50.0;
  }
  return total + poisson_small(*this, mean);
}

std::uint32_t poisson_at(std::uint64_t seed, std::uint64_t frame,
                         std::uint64_t jot, double mean) {
  Stream s(seed, StreamKind::photon, frame, jot);
  return s.poisson(mean);
}

} // namespace qis::rng
