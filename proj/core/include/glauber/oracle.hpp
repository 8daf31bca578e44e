#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "glauber/model.hpp"

namespace glauber {

// Hard cap for the exact solver; 2^14 states keeps full sweeps in memory and
// the acceptance suite under minutes.
inline constexpr int kDefaultMaxExactSites = 14;

// Probability vector over all 2^n configurations.  Index bit i set means
// spin +1 at site i.
struct DistributionVector {
  int n = 0;
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
};

std::uint32_t config_to_index(const SpinConfig& x);
SpinConfig index_to_config(std::uint32_t index, int n);

// Enumerated Gibbs measure.
DistributionVector stationary_vector(const ModelParams& p,
                                     int n_max = kDefaultMaxExactSites);

DistributionVector point_mass(const SpinConfig& x0, const ModelParams& p,
                              int n_max = kDefaultMaxExactSites);

// Uniform measure nu on {-1,+1}^n (the annealed starting distribution).
DistributionVector uniform_vector(const ModelParams& p,
                                  int n_max = kDefaultMaxExactSites);

// One application of the uniformized kernel K = I + Q/n: pick a uniform site,
// refresh it from the heat-bath conditional.
void apply_uniformized_step(const DistributionVector& mu, const ModelParams& p,
                            DistributionVector& out);

// mu0 e^{Qt} by uniformization at rate n: Poisson-weighted powers of K,
// truncated when the remaining Poisson mass drops below tol.
DistributionVector evolve_distribution(const DistributionVector& mu0, double t,
                                       const ModelParams& p, double tol = 1e-12);
DistributionVector evolve_distribution(const SpinConfig& x0, double t,
                                       const ModelParams& p, double tol = 1e-12,
                                       int n_max = kDefaultMaxExactSites);

// Half L1 distance; in [0, 1].
double total_variation(const DistributionVector& a, const DistributionVector& b);

// E[X(i)] for each site.
std::vector<double> site_marginals(const DistributionVector& mu);

// Smallest t (to resolution 1e-3) with TV(mu0 e^{Qt}, pi) <= eps.  Uses that
// TV to stationarity is non-increasing; the bisection checks each evaluation
// against the bracket and throws ComputationError on non-monotone data.
double exact_mixing_time(const DistributionVector& mu0, double eps,
                         const ModelParams& p, double tol = 1e-12);
double exact_mixing_time(const SpinConfig& x0, double eps, const ModelParams& p,
                         double tol = 1e-12, int n_max = kDefaultMaxExactSites);

// Snapshot format: u32 LE site count, u32 LE format version, then 2^n
// little-endian doubles.
void write_distribution(std::ostream& out, const DistributionVector& mu);
DistributionVector read_distribution(std::istream& in);

}  // namespace glauber
