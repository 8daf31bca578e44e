#include "glauber/model.hpp"

#include <cmath>
#include <string>

#include "glauber/errors.hpp"

namespace glauber {

const char* to_string(InitialCondition kind) {
  switch (kind) {
    case InitialCondition::Alt: return "alt";
    case InitialCondition::Blt: return "blt";
    case InitialCondition::Plus: return "plus";
    case InitialCondition::Annealed: return "annealed";
  }
  return "?";
}

std::optional<InitialCondition> initial_condition_from_string(std::string_view s) {
  if (s == "alt") return InitialCondition::Alt;
  if (s == "blt") return InitialCondition::Blt;
  if (s == "plus") return InitialCondition::Plus;
  if (s == "annealed") return InitialCondition::Annealed;
  return std::nullopt;
}

double theta_of_beta(double beta) {
  if (!std::isfinite(beta) || beta < 0.0) {
    throw InvalidParameterError("theta_of_beta: beta must be finite and >= 0");
  }
  return 1.0 - std::tanh(2.0 * beta);
}

ModelParams ModelParams::make(int n, double beta) {
  if (n < 4 || n % 2 != 0) {
    throw InvalidParameterError("ModelParams: n must be even and >= 4, got " +
                                std::to_string(n));
  }
  ModelParams p;
  p.n = n;
  p.beta = beta;
  p.theta = theta_of_beta(beta);
  return p;
}

SpinConfig make_initial(InitialCondition kind, int n, RngStream& rng) {
  if (n < 2 || n % 2 != 0) {
    throw InvalidParameterError("make_initial: n must be even and >= 2");
  }
  if (kind == InitialCondition::Blt && n % 4 != 0) {
    throw InvalidParameterError("make_initial: blt requires n to be a multiple of 4");
  }
  SpinConfig x(static_cast<std::size_t>(n));
  switch (kind) {
    case InitialCondition::Alt:
      for (int i = 0; i < n; ++i) x[i] = (i % 2 == 0) ? Spin{1} : Spin{-1};
      break;
    case InitialCondition::Blt:
      for (int i = 0; i < n; ++i) {
        const int r = i % 4;
        x[i] = (r == 0 || r == 3) ? Spin{1} : Spin{-1};
      }
      break;
    case InitialCondition::Plus:
      for (int i = 0; i < n; ++i) x[i] = Spin{1};
      break;
    case InitialCondition::Annealed:
      for (int i = 0; i < n; ++i) x[i] = rng.random_sign();
      break;
  }
  return x;
}

void validate_config(const SpinConfig& x, const ModelParams& p) {
  if (static_cast<int>(x.size()) != p.n) {
    throw InvalidParameterError("configuration length " + std::to_string(x.size()) +
                                " does not match n = " + std::to_string(p.n));
  }
  for (const Spin s : x) {
    if (s != 1 && s != -1) {
      throw InvalidParameterError("configuration entries must be +1 or -1");
    }
  }
}

double gibbs_log_weight(const SpinConfig& x, const ModelParams& p) {
  validate_config(x, p);
  long long agree = 0;
  for (int i = 0; i < p.n; ++i) {
    const int j = (i + 1 == p.n) ? 0 : i + 1;
    agree += x[i] * x[j];
  }
  return p.beta * static_cast<double>(agree);
}

double log_partition_function(const ModelParams& p) {
  // (2 cosh b)^n + (2 sinh b)^n = (2 cosh b)^n (1 + tanh(b)^n)
  const double log_big = p.n * (std::log(2.0) + std::log(std::cosh(p.beta)));
  const double ratio = std::pow(std::tanh(p.beta), p.n);
  return log_big + std::log1p(ratio);
}

double pair_correlation(const ModelParams& p, int distance) {
  if (distance < 1 || distance > p.n - 1) {
    throw InvalidParameterError("pair_correlation: distance must be in [1, n-1]");
  }
  const double t = std::tanh(p.beta);
  const double tn = std::pow(t, p.n);
  return (std::pow(t, distance) + std::pow(t, p.n - distance)) / (1.0 + tn);
}

GibbsSampler::GibbsSampler(const ModelParams& p) : n_(p.n), beta_(p.beta) {
  tanh_pow_.resize(static_cast<std::size_t>(n_));
  const double t = std::tanh(beta_);
  tanh_pow_[0] = 1.0;
  for (int m = 1; m < n_; ++m) tanh_pow_[m] = tanh_pow_[m - 1] * t;
}

void GibbsSampler::sample_into(SpinConfig& x, RngStream& rng) const {
  x.resize(static_cast<std::size_t>(n_));
  const Spin anchor = rng.random_sign();  // site 0: fair by global flip symmetry
  x[0] = anchor;
  const double ep = std::exp(beta_);
  const double em = std::exp(-beta_);
  for (int k = 1; k < n_; ++k) {
    const int prev = x[k - 1];
    // Bridge conditional: P(x_k = s | x_{k-1}, x_0) is proportional to
    // e^{beta x_{k-1} s} * ((2cosh b)^m + s x_0 (2sinh b)^m), m = n - k
    // remaining edges; the shared (2cosh b)^m factor cancels, leaving
    // tanh(b)^m.
    const double bridge = anchor * tanh_pow_[n_ - k];
    const double wp = (prev == 1 ? ep : em) * (1.0 + bridge);
    const double wm = (prev == 1 ? em : ep) * (1.0 - bridge);
    x[k] = (rng.uniform() * (wp + wm) < wp) ? Spin{1} : Spin{-1};
  }
}

SpinConfig GibbsSampler::sample(RngStream& rng) const {
  SpinConfig x;
  sample_into(x, rng);
  return x;
}

SpinConfig sample_gibbs(const ModelParams& p, RngStream& rng) {
  return GibbsSampler(p).sample(rng);
}

}  // namespace glauber
