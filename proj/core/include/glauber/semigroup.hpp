#pragma once

#include <span>
#include <vector>

#include "glauber/model.hpp"

namespace glauber {

// Coefficients in the orthonormal real eigenbasis of the rate-1 cycle walk.
// Layout: [0] mean mode; then (cos, sin) pairs for wave numbers k = 1 ..
// ceil(n/2)-1; for even n the last entry is the alternating (Nyquist) mode.
// Wave number k carries decay rate 1 - cos(2 pi k / n).
using SpectralVector = std::vector<double>;

// Generator decay rates lambda_k = 1 - cos(2 pi k / n), k = 0..n-1.
std::vector<double> walk_eigenvalues(int n);

SpectralVector to_spectral(std::span<const double> site_values);
std::vector<double> from_spectral(const SpectralVector& coeffs);

// P_t x for the continuous-time rate-1 simple random walk semigroup.
std::vector<double> semigroup_apply(std::span<const double> x, double t, int n);

// One transform, many times; cheaper than repeated semigroup_apply.
std::vector<std::vector<double>> semigroup_apply_multi(std::span<const double> x,
                                                       std::span<const double> times,
                                                       int n);

// Site-wise conditional mean E_{x0}[X_t(i)] = e^{-theta t} (P_{(1-theta)t} x0)(i)
// via the killed-walk representation of the dynamics.
std::vector<double> conditional_magnetization(const SpinConfig& x0, double t,
                                              const ModelParams& p);

// Predicted mean of the autocorrelation statistic under the dynamics from x0:
// e^{-2 theta t} * || P_{(1-theta) t} x0 ||_2^2.
double autocorrelation_l2_prediction(const SpinConfig& x0, double t,
                                     const ModelParams& p);

// Coefficient of log n in the asymptotic mixing time:
//   alt      -> max{ 1/(4-2 theta), 1/(4 theta) }
//   blt      -> max{ 1/2,           1/(4 theta) }
//   plus     -> 1/(2 theta)
//   annealed -> 1/(4 theta)
double predicted_mixing_constant(InitialCondition kind, const ModelParams& p);

}  // namespace glauber
