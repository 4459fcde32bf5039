#pragma once

#include <array>
#include <cstdint>

namespace qis::rng {

// Philox4x64-10 counter-based generator. Each (key, counter) pair maps to
// four statistically independent 64-bit words, so distinct (seed, frame, jot)
// tuples get their own streams and generation order never matters.
std::array<std::uint64_t, 4> philox4x64(const std::array<std::uint64_t, 4>& counter,
                                        const std::array<std::uint64_t, 2>& key);

// Stream kinds keep the photon and read-noise draws of the same jot/frame
// statistically independent.
enum class StreamKind : std::uint64_t {
  photon = 0,
  read_noise = 1,
  test = 2,
};

// Buffered view of one (seed, kind, frame, jot) stream. Words are consumed
// from consecutive Philox blocks; the stream is deterministic and
// independent of any other stream.
class Stream {
public:
  Stream(std::uint64_t seed, StreamKind kind, std::uint64_t frame,
         std::uint64_t jot)
      : key_{seed, static_cast<std::uint64_t>(kind)},
        counter_{0, jot, frame, 0} {}

  std::uint64_t next_u64() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; safe as a log() argument.
  double uniform_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double gaussian();

  // Exact Poisson sampler (product-of-uniforms, chunked for large means).
  std::uint32_t poisson(double mean);

  // Bernoulli(p) indicator.
  std::uint32_t bernoulli(double p) { return uniform() < p ? 1u : 0u; }

private:
  void refill();

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_;
  std::array<std::uint64_t, 4> buf_{};
  int pos_ = 4;
};

// One-shot Poisson draw for jot `jot` of frame `frame`; what simulate_stack
// uses internally. Exposed so order-independence is directly testable.
std::uint32_t poisson_at(std::uint64_t seed, std::uint64_t frame,
                         std::uint64_t jot, double mean);

} // namespace qis::rng
