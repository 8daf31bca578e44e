#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "glauber/rng.hpp"

namespace glauber {

using Spin = std::int8_t;

// A +/-1 assignment to the n sites of the cycle, 0-based.
using SpinConfig = std::vector<Spin>;

// Starting states for the dynamics.  Annealed draws a fresh uniform-random
// configuration per replica; as a distribution it is the uniform measure on
// {-1,+1}^n (a single draw is one quenched realization).
enum class InitialCondition { Alt, Blt, Plus, Annealed };

const char* to_string(InitialCondition kind);
std::optional<InitialCondition> initial_condition_from_string(std::string_view s);

// Cycle size, inverse temperature, and the derived refresh probability
// theta = 1 - tanh(2 beta).  n is always even; a multiple of 4 is required
// wherever the bi-alternating state or the Hamiltonian statistic appears.
struct ModelParams {
  int n = 0;
  double beta = 0.0;
  double theta = 1.0;

  static ModelParams make(int n, double beta);
};

double theta_of_beta(double beta);

SpinConfig make_initial(InitialCondition kind, int n, RngStream& rng);

// Unnormalized log-probability beta * sum_i x(i) x(i+1 mod n).
double gibbs_log_weight(const SpinConfig& x, const ModelParams& p);

// log Z with Z = (2 cosh beta)^n + (2 sinh beta)^n (transfer-matrix
// eigenvalues on the cycle); log scale so n in the thousands cannot overflow.
double log_partition_function(const ModelParams& p);

// E_pi[Y(i) Y(i+d)] = (t^d + t^(n-d)) / (1 + t^n) with t = tanh beta.
double pair_correlation(const ModelParams& p, int distance);

// Exact sampler from the Gibbs measure: site 0 is a fair coin (spin-flip
// symmetry), the rest is a transfer-matrix bridge conditioned to close the
// cycle.  Stationarity is unconditional, never asymptotic.
class GibbsSampler {
 public:
  explicit GibbsSampler(const ModelParams& p);
  SpinConfig sample(RngStream& rng) const;
  void sample_into(SpinConfig& x, RngStream& rng) const;

 private:
  int n_;
  double beta_;
  std::vector<double> tanh_pow_;  // tanh(beta)^m for m = 0..n-1
};

SpinConfig sample_gibbs(const ModelParams& p, RngStream& rng);

// Throws InvalidParameterError unless x has length n with +/-1 entries.
void validate_config(const SpinConfig& x, const ModelParams& p);

}  // namespace glauber
