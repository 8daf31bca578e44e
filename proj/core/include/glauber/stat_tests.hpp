#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace glauber {

// Acklam's rational approximation to the standard normal quantile
// (|error| < 1.2e-9 over (0,1)).
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must be in (0,1)");
  }
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Wilson-Hilferty chi-square quantile; adequate for test thresholds.
inline double chi_square_quantile(double p, int dof) {
  if (dof < 1) throw std::invalid_argument("chi_square_quantile: dof must be >= 1");
  const double z = normal_quantile(p);
  const double k = static_cast<double>(dof);
  const double h = 2.0 / (9.0 * k);
  const double base = 1.0 - h + z * std::sqrt(h);
  return k * base * base * base;
}

// Pearson statistic against expected probabilities (counts and probs aligned).
inline double chi_square_gof_statistic(std::span<const std::int64_t> counts,
                                       std::span<const double> expected_probs,
                                       double total) {
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expect = expected_probs[i] * total;
    if (expect <= 0.0) continue;
    const double d = static_cast<double>(counts[i]) - expect;
    stat += d * d / expect;
  }
  return stat;
}

struct TwoSampleChiSquare {
  double statistic = 0.0;
  int dof = 0;
};

// Two-sample Pearson statistic over shared cells.
inline TwoSampleChiSquare two_sample_chi_square(std::span<const std::int64_t> a,
                                                std::span<const std::int64_t> b) {
  double na = 0.0, nb = 0.0;
  for (const auto v : a) na += static_cast<double>(v);
  for (const auto v : b) nb += static_cast<double>(v);
  const double ka = std::sqrt(nb / na);
  const double kb = std::sqrt(na / nb);
  TwoSampleChiSquare out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double tot = static_cast<double>(a[i] + b[i]);
    if (tot <= 0.0) continue;
    const double d = ka * static_cast<double>(a[i]) - kb * static_cast<double>(b[i]);
    out.statistic += d * d / tot;
    out.dof += 1;
  }
  out.dof = out.dof > 1 ? out.dof - 1 : 1;
  return out;
}

// P(Poisson(lambda) >= k) by direct pmf summation of the complement.
inline double poisson_upper_tail(double lambda, int k) {
  if (k <= 0) return 1.0;
  double pmf = std::exp(-lambda);
  double cdf = pmf;
  for (int j = 1; j < k; ++j) {
    pmf *= lambda / j;
    cdf += pmf;
  }
  return cdf >= 1.0 ? 0.0 : 1.0 - cdf;
}

}  // namespace glauber
