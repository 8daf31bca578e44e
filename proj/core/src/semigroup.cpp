#include "glauber/semigroup.hpp"

#include <cmath>
#include <numbers>

#include "glauber/errors.hpp"

namespace glauber {

namespace {

// Neumaier-compensated accumulator; the transforms below are checked to
// 1e-10 round trips at n in the thousands, which plain summation misses.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

struct TrigTable {
  std::vector<double> cos_tab;
  std::vector<double> sin_tab;
  explicit TrigTable(int n) : cos_tab(n), sin_tab(n) {
    for (int j = 0; j < n; ++j) {
      const double a = 2.0 * std::numbers::pi * j / n;
      cos_tab[j] = std::cos(a);
      sin_tab[j] = std::sin(a);
    }
  }
};

int pair_count(int n) { return (n - 1) / 2; }  // wave numbers with cos+sin modes

void check_n(int n) {
  if (n < 3) throw InvalidParameterError("spectral transform requires n >= 3");
}

}  // namespace

std::vector<double> walk_eigenvalues(int n) {
  check_n(n);
  std::vector<double> lambda(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    lambda[k] = 1.0 - std::cos(2.0 * std::numbers::pi * k / n);
  }
  return lambda;
}

SpectralVector to_spectral(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  check_n(n);
  const TrigTable tab(n);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  const double pair_norm = std::sqrt(2.0 / n);
  SpectralVector c(static_cast<std::size_t>(n));

  CompensatedSum mean;
  for (int i = 0; i < n; ++i) mean.add(x[i]);
  c[0] = mean.value() * inv_sqrt_n;

  const int pairs = pair_count(n);
  for (int k = 1; k <= pairs; ++k) {
    CompensatedSum ac, as;
    std::int64_t idx = 0;
    for (int i = 0; i < n; ++i) {
      ac.add(x[i] * tab.cos_tab[idx]);
      as.add(x[i] * tab.sin_tab[idx]);
      idx += k;
      if (idx >= n) idx -= n;
    }
    c[2 * k - 1] = ac.value() * pair_norm;
    c[2 * k] = as.value() * pair_norm;
  }
  if (n % 2 == 0) {
    CompensatedSum alt;
    for (int i = 0; i < n; ++i) alt.add(i % 2 == 0 ? x[i] : -x[i]);
    c[n - 1] = alt.value() * inv_sqrt_n;
  }
  return c;
}

std::vector<double> from_spectral(const SpectralVector& c) {
  const int n = static_cast<int>(c.size());
  check_n(n);
  const TrigTable tab(n);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  const double pair_norm = std::sqrt(2.0 / n);
  std::vector<double> x(static_cast<std::size_t>(n));

  const int pairs = pair_count(n);
  for (int i = 0; i < n; ++i) {
    CompensatedSum acc;
    acc.add(c[0] * inv_sqrt_n);
    std::int64_t idx = 0;
    for (int k = 1; k <= pairs; ++k) {
      idx += i;
      if (idx >= n) idx -= n;
      acc.add(pair_norm * (c[2 * k - 1] * tab.cos_tab[idx] + c[2 * k] * tab.sin_tab[idx]));
    }
    if (n % 2 == 0) {
      acc.add((i % 2 == 0 ? c[n - 1] : -c[n - 1]) * inv_sqrt_n);
    }
    x[i] = acc.value();
  }
  return x;
}

namespace {

// Scales spectral coefficients by e^{-lambda_k t} in place.
void decay_coefficients(SpectralVector& c, double t, int n) {
  const int pairs = pair_count(n);
  for (int k = 1; k <= pairs; ++k) {
    const double lambda = 1.0 - std::cos(2.0 * std::numbers::pi * k / n);
    const double factor = std::exp(-lambda * t);
    c[2 * k - 1] *= factor;
    c[2 * k] *= factor;
  }
  if (n % 2 == 0) c[n - 1] *= std::exp(-2.0 * t);
}

}  // namespace

std::vector<double> semigroup_apply(std::span<const double> x, double t, int n) {
  if (t < 0.0 || !std::isfinite(t)) {
    throw InvalidParameterError("semigroup_apply: t must be finite and >= 0");
  }
  if (static_cast<int>(x.size()) != n) {
    throw InvalidParameterError("semigroup_apply: vector length does not match n");
  }
  SpectralVector c = to_spectral(x);
  decay_coefficients(c, t, n);
  return from_spectral(c);
}

std::vector<std::vector<double>> semigroup_apply_multi(std::span<const double> x,
                                                       std::span<const double> times,
                                                       int n) {
  if (static_cast<int>(x.size()) != n) {
    throw InvalidParameterError("semigroup_apply_multi: vector length does not match n");
  }
  const SpectralVector base = to_spectral(x);
  std::vector<std::vector<double>> out;
  out.reserve(times.size());
  for (const double t : times) {
    if (t < 0.0 || !std::isfinite(t)) {
      throw InvalidParameterError("semigroup_apply_multi: t must be finite and >= 0");
    }
    SpectralVector c = base;
    decay_coefficients(c, t, n);
    out.push_back(from_spectral(c));
  }
  return out;
}

std::vector<double> conditional_magnetization(const SpinConfig& x0, double t,
                                              const ModelParams& p) {
  validate_config(x0, p);
  if (t < 0.0 || !std::isfinite(t)) {
    throw InvalidParameterError("conditional_magnetization: t must be finite and >= 0");
  }
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> walked = semigroup_apply(x, (1.0 - p.theta) * t, p.n);
  const double survival = std::exp(-p.theta * t);
  for (double& v : walked) v *= survival;
  return walked;
}

double autocorrelation_l2_prediction(const SpinConfig& x0, double t,
                                     const ModelParams& p) {
  validate_config(x0, p);
  if (t < 0.0 || !std::isfinite(t)) {
    throw InvalidParameterError("autocorrelation_l2_prediction: t must be finite and >= 0");
  }
  std::vector<double> x(x0.begin(), x0.end());
  const std::vector<double> walked = semigroup_apply(x, (1.0 - p.theta) * t, p.n);
  CompensatedSum norm2;
  for (const double v : walked) norm2.add(v * v);
  return std::exp(-2.0 * p.theta * t) * norm2.value();
}

double predicted_mixing_constant(InitialCondition kind, const ModelParams& p) {
  const double theta = p.theta;
  switch (kind) {
    case InitialCondition::Alt:
      return std::max(1.0 / (4.0 - 2.0 * theta), 1.0 / (4.0 * theta));
    case InitialCondition::Blt:
      return std::max(0.5, 1.0 / (4.0 * theta));
    case InitialCondition::Plus:
      return 1.0 / (2.0 * theta);
    case InitialCondition::Annealed:
      return 1.0 / (4.0 * theta);
  }
  throw InvalidParameterError("predicted_mixing_constant: unknown initial condition");
}

}  // namespace glauber
