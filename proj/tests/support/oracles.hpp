#pragma once

// Test-side oracles, independent of the library paths they check.

#include <cstdint>
#include <span>
#include <vector>

namespace qis::test {

// Regularized upper incomplete gamma Q(a, x) by power series / continued
// fraction (Cephes-style). Used for chi-square p-values only.
double upper_regularized_gamma(double a, double x);

// P-value of a chi-square statistic with df degrees of freedom.
double chi_square_pvalue(double statistic, double df);

struct GofResult {
  double statistic = 0.0;
  int df = 0;
  double pvalue = 0.0;
};

// Pearson goodness-of-fit with bin pooling: consecutive bins are merged
// until each pooled bin expects at least `min_expected` counts; any
// remaining probability mass goes into the final bin.
GofResult chi_square_gof(std::span<const std::uint64_t> observed,
                         std::span<const double> expected_probs,
                         std::uint64_t draws, double min_expected = 5.0);

double sample_mean(std::span<const double> values);
double sample_variance(std::span<const double> values); // unbiased

} // namespace qis::test
