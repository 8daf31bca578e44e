#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "glauber/model.hpp"
#include "glauber/rng.hpp"

namespace glauber {

enum class StatisticKind { Autocorrelation, Hamiltonian, Magnetization };

const char* to_string(StatisticKind kind);

// Where a batch of statistic values came from.
struct SampleSource {
  enum Kind { Dynamics, Stationary } kind = Dynamics;
  InitialCondition init = InitialCondition::Plus;  // meaningful for Dynamics
  double t = 0.0;  // evolution time; also the autocorrelation profile time
};

struct StatisticSamples {
  StatisticKind statistic = StatisticKind::Magnetization;
  SampleSource source;
  std::vector<double> values;

  int replica_count() const { return static_cast<int>(values.size()); }
  double mean() const;
  double variance() const;   // unbiased
  double std_error() const;  // of the mean
};

// R_{x0,t}(x) = sum_i x(i) E_{x0}[X_t(i)]; profile is the conditional
// magnetization of x0 at time t.
double autocorrelation_statistic(const SpinConfig& x, std::span<const double> profile);
double autocorrelation_statistic(const SpinConfig& x, const SpinConfig& x0,
                                 double t, const ModelParams& p);

// sum_{i=0}^{n/4-1} x(4i) x(4i+1); requires n to be a multiple of 4.
double hamiltonian_statistic(const SpinConfig& x);

double magnetization_statistic(const SpinConfig& x);

// Independent voter-encoding replicas from x0 evolved to time t, one
// statistic value per replica.  For the autocorrelation, x0 is also the
// profile configuration.
StatisticSamples mc_statistic_samples(StatisticKind kind, const SpinConfig& x0,
                                      double t, const ModelParams& p,
                                      int replicas, RngStream& rng);

// Exact Gibbs samples; x0/t only parameterize the autocorrelation profile.
StatisticSamples mc_statistic_samples_stationary(StatisticKind kind,
                                                 const SpinConfig& x0, double t,
                                                 const ModelParams& p,
                                                 int replicas, RngStream& rng);

struct TvLowerBound {
  double value = 0.0;
  double std_error = 0.0;
};

// TV distance between the empirical laws of a scalar statistic on a shared
// binning (Freedman-Diaconis width from the pooled samples), with the
// finite-sample null bias of the plug-in estimate subtracted (estimated by
// re-splitting the pooled histogram) and a bootstrap standard error
// (>= 200 resamples).  A lower bound on the TV distance of the full laws.
TvLowerBound empirical_tv_lower_bound(const StatisticSamples& a,
                                      const StatisticSamples& b, RngStream& rng,
                                      int bootstrap_resamples = 200);

// Single threshold-set bound |P_a(R >= c) - P_b(R >= c)| at the midpoint of
// the two means; the Chebyshev-style test kept as a fidelity diagnostic.
TvLowerBound threshold_tv_lower_bound(const StatisticSamples& a,
                                      const StatisticSamples& b);

struct MixingCurve {
  std::vector<double> times;
  std::vector<double> tv_lower_bounds;
  std::vector<double> std_errors;
  std::vector<double> exact_tv;  // empty when n exceeds the exact-solver cap
};

// For each time, the best statistic-based TV lower bound over
// {autocorrelation, hamiltonian, magnetization} between the dynamics from the
// given start and stationarity; the exact TV column is attached when the
// state space fits the exact solver.
MixingCurve mixing_curve(InitialCondition kind, const ModelParams& p,
                         std::span<const double> times, int replicas,
                         RngStream& rng, int exact_n_max = 14);

struct CovarianceEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Empirical Cov(X_t(0), X_t(separation)).  start = nullopt samples the
// stationary measure instead of running the dynamics.
CovarianceEstimate covariance_decay_check(const ModelParams& p, double t,
                                          int separation, int replicas,
                                          RngStream& rng,
                                          std::optional<InitialCondition> start =
                                              InitialCondition::Alt);

struct TwoWalkProductResult {
  double mean_all = 0.0;
  double se_all = 0.0;
  double mean_no_meet = 0.0;
  double se_no_meet = 0.0;
  double no_meet_fraction = 0.0;
};

// Two independent rate-(1-theta) walks started at sites 0 and 1; reports the
// mean of x0(Z1(t)) x0(Z2(t)) overall and conditioned on the walks never
// having met by time t.
TwoWalkProductResult two_walk_product_experiment(InitialCondition kind, double t,
                                                 const ModelParams& p,
                                                 int replicas, RngStream& rng);

// Header "t,tv_lower,stderr[,exact_tv]"; %.17g fields.
void write_mixing_curve_csv(std::ostream& out, const MixingCurve& curve);

}  // namespace glauber
