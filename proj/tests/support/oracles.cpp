#include "support/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace qis::test {

namespace {

constexpr double kEps = 1e-15;
constexpr double kBig = 4.503599627370496e15;
constexpr double kBigInv = 2.22044604925031308085e-16;

double lower_regularized_series(double a, double x) {
  double r = a;
  double c = 1.0;
  double ans = 1.0;
  do {
    r += 1.0;
    c *= x / r;
    ans += c;
  } while (c / ans > kEps);
  const double ax = a * std::log(x) - x - std::lgamma(a);
  if (ax < -709.78) return 0.0;
  return ans * std::exp(ax) / a;
}

double upper_regularized_cf(double a, double x) {
  const double ax = a * std::log(x) - x - std::lgamma(a);
  if (ax < -709.78) return 0.0;
  double y = 1.0 - a;
  double z = x + y + 1.0;
  double c = 0.0;
  double pkm2 = 1.0, qkm2 = x;
  double pkm1 = x + 1.0, qkm1 = z * x;
  double ans = pkm1 / qkm1;
  double t;
  do {
    c += 1.0;
    y += 1.0;
    z += 2.0;
    const double yc = y * c;
    const double pk = pkm1 * z - pkm2 * yc;
    const double qk = qkm1 * z - qkm2 * yc;
    if (qk != 0.0) {
      const double r = pk / qk;
      t = std::fabs((ans - r) / r);
      ans = r;
    } else {
      t = 1.0;
    }
    pkm2 = pkm1;
    pkm1 = pk;
    qkm2 = qkm1;
    qkm1 = qk;
    if (std::fabs(pk) > kBig) {
      pkm2 *= kBigInv;
      pkm1 *= kBigInv;
      qkm2 *= kBigInv;
      qkm1 *= kBigInv;
    }
  } while (t > kEps);
  return ans * std::exp(ax);
}

} // namespace

double upper_regularized_gamma(double a, double x) {
  if (a <= 0.0) throw std::invalid_argument("upper_regularized_gamma: a <= 0");
  if (x <= 0.0) return 1.0;
  if (x < 1.0 || x < a) return 1.0 - lower_regularized_series(a, x);
  return upper_regularized_cf(a, x);
}

double chi_square_pvalue(double statistic, double df) {
  return upper_regularized_gamma(0.5 * df, 0.5 * statistic);
}

GofResult chi_square_gof(std::span<const std::uint64_t> observed,
                         std::span<const double> expected_probs,
                         std::uint64_t draws, double min_expected) {
  if (observed.size() != expected_probs.size())
    throw std::invalid_argument("chi_square_gof: size mismatch");

  // Pool consecutive bins until each group expects >= min_expected; the
  // leftover tail (including probability not covered by the bins) joins the
  // final group.
  std::vector<double> grp_expected;
  std::vector<double> grp_observed;
  double acc_e = 0.0, acc_o = 0.0, covered = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    acc_e += expected_probs[k] * static_cast<double>(draws);
    acc_o += static_cast<double>(observed[k]);
    covered += expected_probs[k];
    if (acc_e >= min_expected) {
      grp_expected.push_back(acc_e);
      grp_observed.push_back(acc_o);
      acc_e = 0.0;
      acc_o = 0.0;
    }
  }
  const double tail_prob = std::max(0.0, 1.0 - covered);
  acc_e += tail_prob * static_cast<double>(draws);
  std::uint64_t counted = 0;
  for (std::uint64_t o : observed) counted += o;
  acc_o += static_cast<double>(draws - counted);
  if (!grp_expected.empty() && acc_e < min_expected) {
    grp_expected.back() += acc_e;
    grp_observed.back() += acc_o;
  } else {
    grp_expected.push_back(acc_e);
    grp_observed.push_back(acc_o);
  }

  GofResult res;
  for (std::size_t g = 0; g < grp_expected.size(); ++g) {
    const double d = grp_observed[g] - grp_expected[g];
    res.statistic += d * d / grp_expected[g];
  }
  res.df = static_cast<int>(grp_expected.size()) - 1;
  if (res.df < 1)
    throw std::invalid_argument("chi_square_gof: not enough populated bins");
  res.pvalue = chi_square_pvalue(res.statistic, res.df);
  return res;
}

double sample_mean(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  const double m = sample_mean(values);
  double s = 0.0;
  for (double v : values) s += (v - m) * (v - m);
  return s / static_cast<double>(values.size() - 1);
}

} // namespace qis::test
