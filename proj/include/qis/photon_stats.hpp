#pragma once

#include <cstdint>
#include <vector>

#include "qis/frame.hpp"
#include "qis/image.hpp"

namespace qis::stats {

// P(Poisson(theta) < q) = sum_{j=0}^{q-1} theta^j e^-theta / j!, the
// probability that a single-bit jot reads 0. Evaluated by running-product
// accumulation in extended precision; exact to ~1e-15 for q up to 64.
double psi_q(double theta, int q);

// Unique theta >= 0 with psi_q(theta, q) = p, by bisection to absolute
// tolerance 1e-10. p = 1 maps to 0. Throws SaturationError for p <= 0
// (every frame fired; callers clamp before inverting).
double psi_q_inverse(double p, int q);

// Distribution of the temporal sum Z of T frames at exposure theta:
// single-bit: Binomial(T, 1 - psi_q(theta)); multi-bit: Poisson(T*theta)
// (saturation-free regime). This is the test oracle for the sensor sim.
double binned_pmf(int k, double theta, int frames, SensorMode mode,
                  int q_or_bits);

// Anscombe-family variance stabilizers, per jot. Both map the counting
// noise to an approximately constant variance of 1/4.
double anscombe_single_bit(double z, int frames);
double anscombe_multi_bit(double z);

// Algebraic inverses; out-of-range beta is clamped to the transform range
// first. Values are real (not re-quantized).
double anscombe_single_bit_inverse(double beta, int frames);
double anscombe_multi_bit_inverse(double beta);

// Closed-form bias-corrected inverse for the Poisson (multi-bit) transform.
double anscombe_multi_bit_inverse_unbiased(double beta);

// Upper end of the single-bit transform range: anscombe at z = T.
double anscombe_single_bit_max(int frames);

// Maximum-likelihood exposure estimate for one real-valued sum z:
// single-bit inverts psi_q (z clamped to [0, T-1/2]); multi-bit is z/T
// with z clamped to >= 0.
double mle_single_bit(double z, int frames, int q);
double mle_multi_bit(double z, int frames);

// Whole-image forms of the pipeline kernels.
StabilizedImage anscombe(const BinnedImage& binned);
Image anscombe_inverse(const StabilizedImage& stabilized); // 1-plane reals
Image mle_tone_map(const BinnedImage& binned);             // 1-plane theta-hat

// Tabulated MLE map over integer sums z in {0,...,zmax}; agrees bit-exactly
// with the direct evaluation it was built from.
class MleLut {
public:
  MleLut(SensorMode mode, int q_or_bits, int frames, std::uint32_t zmax);
  double operator()(std::uint32_t z) const { return table_[z]; }
  std::uint32_t zmax() const {
    return static_cast<std::uint32_t>(table_.size()) - 1;
  }

private:
  std::vector<double> table_;
};

// Tabulated forward transform over integer sums, same bit-exact contract.
class AnscombeLut {
public:
  AnscombeLut(SensorMode mode, int frames, std::uint32_t zmax);
  double operator()(std::uint32_t z) const { return table_[z]; }

private:
  std::vector<double> table_;
};

} // namespace qis::stats
