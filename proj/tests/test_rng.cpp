#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "qis/rng.hpp"
#include "support/oracles.hpp"

using namespace qis;

TEST_CASE("philox4x64-10 known-answer vectors") {
  // Reference words generated with numpy.random.Philox (whose generator
  // pre-increments the counter, hence the +1 on c0 here).
  auto out = rng::philox4x64({1, 0, 0, 0}, {0, 0});
  CHECK(out[0] == 0x02f4ba6408e4d89bULL);
  CHECK(out[1] == 0x3dd62b0b9ca8c5b2ULL);
  CHECK(out[2] == 0x1c8667a55d902e79ULL);
  CHECK(out[3] == 0x907d7a052fd5b4dcULL);

  out = rng::philox4x64({2, 2, 3, 4}, {0xdeadbeefULL, 0xcafef00dULL});
  CHECK(out[0] == 0xbe50cc8d71b94ed3ULL);
  CHECK(out[1] == 0x24145edfdabb5069ULL);
  CHECK(out[2] == 0x2dc42591c5253a4bULL);
  CHECK(out[3] == 0x925d19fbe559e7a9ULL);

  const std::uint64_t ff = 0xffffffffffffffffULL;
  out = rng::philox4x64({0, 0, 0, 0}, {ff, ff});
  CHECK(out[0] == 0x44b7493d1acfc229ULL);
  CHECK(out[1] == 0x6636af8e997921ddULL);
  CHECK(out[2] == 0x3f73e132b5b3780eULL);
  CHECK(out[3] == 0x605644dde03b01b1ULL);
}

TEST_CASE("poisson sampler matches Poisson moments at mean 5") {
  const int n = 1000000;
  rng::Stream s(42, rng::StreamKind::test, 0, 0);
  std::vector<double> draws(n);
  for (int i = 0; i < n; ++i) draws[i] = s.poisson(5.0);
  CHECK(test::sample_mean(draws) == doctest::Approx(5.0).epsilon(0.002));
  const double var = test::sample_variance(draws);
  CHECK(var > 4.95);
  CHECK(var < 5.05);
}

TEST_CASE("poisson sampler passes chi-square against e^-2 2^k / k!") {
  const std::uint64_t n = 1000000;
  std::vector<std::uint64_t> observed(30, 0);
  rng::Stream s(7, rng::StreamKind::test, 0, 1);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint32_t k = s.poisson(2.0);
    if (k < observed.size()) ++observed[k];
  }
  std::vector<double> expected(observed.size());
  double term = std::exp(-2.0); // k = 0
  for (std::size_t k = 0; k < expected.size(); ++k) {
    expected[k] = term;
    term *= 2.0 / static_cast<double>(k + 1);
  }
  const auto gof = test::chi_square_gof(observed, expected, n);
  CHECK(gof.pvalue >= 0.001);
}

TEST_CASE("chunked sampler stays Poisson for large means") {
  // mean 120 crosses two chunk boundaries; verify against the exact pmf.
  const std::uint64_t n = 200000;
  const double mean = 120.0;
  std::vector<std::uint64_t> observed(240, 0);
  rng::Stream s(11, rng::StreamKind::test, 0, 2);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint32_t k = s.poisson(mean);
    if (k < observed.size()) ++observed[k];
  }
  std::vector<double> expected(observed.size());
  for (std::size_t k = 0; k < expected.size(); ++k)
    expected[k] = std::exp(k * std::log(mean) - mean -
                           std::lgamma(static_cast<double>(k) + 1.0));
  const auto gof = test::chi_square_gof(observed, expected, n);
  CHECK(gof.pvalue >= 0.001);
}

TEST_CASE("gaussian moments") {
  const int n = 1000000;
  rng::Stream s(3, rng::StreamKind::test, 1, 0);
  std::vector<double> draws(n);
  for (int i = 0; i < n; ++i) draws[i] = s.gaussian();
  CHECK(std::abs(test::sample_mean(draws)) < 0.005);
  CHECK(std::sqrt(test::sample_variance(draws)) ==
        doctest::Approx(1.0).epsilon(0.005));
}

TEST_CASE("per-jot draws are independent of evaluation order") {
  const double mean = 3.3;
  std::vector<std::uint32_t> forward(512), backward(512);
  for (int m = 0; m < 512; ++m)
    forward[m] = rng::poisson_at(99, 4, m, mean);
  for (int m = 511; m >= 0; --m)
    backward[m] = rng::poisson_at(99, 4, m, mean);
  CHECK(forward == backward);
}

TEST_CASE("distinct stream keys give distinct outputs") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t frame = 0; frame < 32; ++frame) {
    for (std::uint64_t jot = 0; jot < 32; ++jot) {
      rng::Stream s(5, rng::StreamKind::photon, frame, jot);
      seen.insert(s.next_u64());
    }
  }
  CHECK(seen.size() == 32 * 32);
}
