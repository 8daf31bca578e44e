#include "glauber/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "glauber/dynamics.hpp"
#include "glauber/errors.hpp"

namespace glauber {

namespace {

void check_capacity(int n, int n_max) {
  if (n > n_max) {
    throw CapacityError("exact computation limited to n <= " + std::to_string(n_max) +
                        ", got n = " + std::to_string(n));
  }
  if (n > 24) {
    throw CapacityError("exact computation refuses n > 24 outright");
  }
}

void check_same_shape(const DistributionVector& a, const DistributionVector& b) {
  if (a.n != b.n || a.probs.size() != b.probs.size()) {
    throw InvalidParameterError("distribution vectors have different dimensions");
  }
}

double poisson_log_pmf(int m, double lambda) {
  return -lambda + m * std::log(lambda) - std::lgamma(static_cast<double>(m) + 1.0);
}

}  // namespace

std::uint32_t config_to_index(const SpinConfig& x) {
  std::uint32_t idx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 1) idx |= (1u << i);
  }
  return idx;
}

SpinConfig index_to_config(std::uint32_t index, int n) {
  SpinConfig x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    x[i] = (index & (1u << i)) ? Spin{1} : Spin{-1};
  }
  return x;
}

DistributionVector stationary_vector(const ModelParams& p, int n_max) {
  check_capacity(p.n, n_max);
  const int n = p.n;
  const std::size_t states = std::size_t{1} << n;
  DistributionVector pi;
  pi.n = n;
  pi.probs.resize(states);
  double max_log = -1e300;
  std::vector<double>& logs = pi.probs;  // reuse storage for log weights
  for (std::uint32_t mask = 0; mask < states; ++mask) {
    // beta * sum of edge agreements: popcount trick on XOR with the rotation.
    const std::uint32_t rot = ((mask >> 1) | (mask << (n - 1))) & ((1u << n) - 1u);
    const int disagree = std::popcount(mask ^ rot);
    logs[mask] = p.beta * static_cast<double>(n - 2 * disagree);
    max_log = std::max(max_log, logs[mask]);
  }
  double z = 0.0;
  for (auto& v : logs) {
    v = std::exp(v - max_log);
    z += v;
  }
  for (auto& v : logs) v /= z;
  return pi;
}

DistributionVector point_mass(const SpinConfig& x0, const ModelParams& p,
                              int n_max) {
  validate_config(x0, p);
  check_capacity(p.n, n_max);
  DistributionVector mu;
  mu.n = p.n;
  mu.probs.assign(std::size_t{1} << p.n, 0.0);
  mu.probs[config_to_index(x0)] = 1.0;
  return mu;
}

DistributionVector uniform_vector(const ModelParams& p, int n_max) {
  check_capacity(p.n, n_max);
  DistributionVector mu;
  mu.n = p.n;
  const std::size_t states = std::size_t{1} << p.n;
  mu.probs.assign(states, 1.0 / static_cast<double>(states));
  return mu;
}

void apply_uniformized_step(const DistributionVector& mu, const ModelParams& p,
                            DistributionVector& out) {
  if (mu.n != p.n) {
    throw InvalidParameterError("apply_uniformized_step: dimension mismatch");
  }
  const int n = p.n;
  const std::size_t states = mu.probs.size();
  out.n = n;
  out.probs.assign(states, 0.0);
  const double site_weight = 1.0 / static_cast<double>(n);
  // plus-probability by (neighbor_sum + 2) / 2
  const double plus_prob[3] = {heat_bath_plus_probability(-2, p),
                               heat_bath_plus_probability(0, p),
                               heat_bath_plus_probability(2, p)};
  for (int i = 0; i < n; ++i) {
    const std::uint32_t bit = 1u << i;
    const std::uint32_t left = 1u << ((i + n - 1) % n);
    const std::uint32_t right = 1u << ((i + 1) % n);
    for (std::uint32_t mask = 0; mask < states; ++mask) {
      const double w = mu.probs[mask] * site_weight;
      if (w == 0.0) continue;
      const int sum = ((mask & left) ? 1 : -1) + ((mask & right) ? 1 : -1);
      const double pp = plus_prob[(sum + 2) / 2];
      out.probs[mask | bit] += w * pp;
      out.probs[mask & ~bit] += w * (1.0 - pp);
    }
  }
}

DistributionVector evolve_distribution(const DistributionVector& mu0, double t,
                                       const ModelParams& p, double tol) {
  if (mu0.n != p.n) {
    throw InvalidParameterError("evolve_distribution: dimension mismatch");
  }
  if (t < 0.0 || !std::isfinite(t)) {
    throw InvalidParameterError("evolve_distribution: t must be finite and >= 0");
  }
  if (!(tol > 0.0)) {
    throw InvalidParameterError("evolve_distribution: tol must be positive");
  }
  if (t == 0.0) return mu0;

  const double lambda = static_cast<double>(p.n) * t;
  DistributionVector acc;
  acc.n = p.n;
  acc.probs.assign(mu0.probs.size(), 0.0);

  DistributionVector power = mu0;
  DistributionVector scratch;

  double cumulative = 0.0;
  int m = 0;
  for (;;) {
    const double w = std::exp(poisson_log_pmf(m, lambda));
    if (w > 0.0) {
      for (std::size_t s = 0; s < acc.probs.size(); ++s) {
        acc.probs[s] += w * power.probs[s];
      }
      cumulative += w;
    }
    if (cumulative >= 1.0 - tol) break;
    if (m > lambda + 20.0 * std::sqrt(lambda + 1.0) + 200.0) {
      throw ComputationError("uniformization failed to accumulate Poisson mass");
    }
    apply_uniformized_step(power, p, scratch);
    power.probs.swap(scratch.probs);
    ++m;
  }
  return acc;
}

DistributionVector evolve_distribution(const SpinConfig& x0, double t,
                                       const ModelParams& p, double tol,
                                       int n_max) {
  return evolve_distribution(point_mass(x0, p, n_max), t, p, tol);
}

double total_variation(const DistributionVector& a, const DistributionVector& b) {
  check_same_shape(a, b);
  double sum = 0.0;
  for (std::size_t s = 0; s < a.probs.size(); ++s) {
    sum += std::abs(a.probs[s] - b.probs[s]);
  }
  return 0.5 * sum;
}

std::vector<double> site_marginals(const DistributionVector& mu) {
  std::vector<double> mean(static_cast<std::size_t>(mu.n), 0.0);
  for (std::uint32_t mask = 0; mask < mu.probs.size(); ++mask) {
    const double w = mu.probs[mask];
    if (w == 0.0) continue;
    for (int i = 0; i < mu.n; ++i) {
      mean[i] += (mask & (1u << i)) ? w : -w;
    }
  }
  return mean;
}

double exact_mixing_time(const DistributionVector& mu0, double eps,
                         const ModelParams& p, double tol) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw InvalidParameterError("exact_mixing_time: eps must be in (0, 1)");
  }
  const DistributionVector pi = stationary_vector(p, mu0.n);
  const auto tv_at = [&](double t) {
    return total_variation(evolve_distribution(mu0, t, p, tol), pi);
  };

  double tv_lo = tv_at(0.0);
  if (tv_lo <= eps) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  double tv_hi = tv_at(hi);
  while (tv_hi > eps) {
    if (tv_hi > tv_lo + 1e-9) {
      throw ComputationError("exact_mixing_time: TV increased from " +
                             std::to_string(tv_lo) + " to " + std::to_string(tv_hi) +
                             " while expanding the bracket");
    }
    lo = hi;
    tv_lo = tv_hi;
    hi *= 2.0;
    if (hi > 1048576.0) {
      throw ComputationError("exact_mixing_time: no bracket below t = 2^20");
    }
    tv_hi = tv_at(hi);
  }

  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    const double tv_mid = tv_at(mid);
    if (tv_mid > tv_lo + 1e-9 || tv_mid < tv_hi - 1e-9) {
      throw ComputationError(
          "exact_mixing_time: non-monotone TV at t = " + std::to_string(mid) +
          " (bracket [" + std::to_string(tv_lo) + ", " + std::to_string(tv_hi) + "])");
    }
    if (tv_mid <= eps) {
      hi = mid;
      tv_hi = tv_mid;
    } else {
      lo = mid;
      tv_lo = tv_mid;
    }
  }
  return hi;
}

double exact_mixing_time(const SpinConfig& x0, double eps, const ModelParams& p,
                         double tol, int n_max) {
  return exact_mixing_time(point_mass(x0, p, n_max), eps, p, tol);
}

void write_distribution(std::ostream& out, const DistributionVector& mu) {
  const std::uint32_t n = static_cast<std::uint32_t>(mu.n);
  const std::uint32_t version = 1;
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(mu.probs.data()),
            static_cast<std::streamsize>(mu.probs.size() * sizeof(double)));
}

DistributionVector read_distribution(std::istream& in) {
  std::uint32_t n = 0;
  std::uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  if (!in || version != 1 || n > 24) {
    throw InvalidParameterError("read_distribution: bad header");
  }
  DistributionVector mu;
  mu.n = static_cast<int>(n);
  mu.probs.resize(std::size_t{1} << n);
  in.read(reinterpret_cast<char*>(mu.probs.data()),
          static_cast<std::streamsize>(mu.probs.size() * sizeof(double)));
  if (!in) {
    throw InvalidParameterError("read_distribution: truncated payload");
  }
  return mu;
}

}  // namespace glauber
