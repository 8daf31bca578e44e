#include "glauber/stats.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "glauber/errors.hpp"
#include "glauber/oracle.hpp"
#include "glauber/semigroup.hpp"
#include "test_util.hpp"

using namespace glauber;

TEST_CASE("statistic fixtures") {
  RngStream rng(71);
  const ModelParams p = ModelParams::make(16, 0.25);
  const SpinConfig alt = make_initial(InitialCondition::Alt, p.n, rng);
  const SpinConfig blt = make_initial(InitialCondition::Blt, p.n, rng);
  const SpinConfig plus = make_initial(InitialCondition::Plus, p.n, rng);

  CHECK(hamiltonian_statistic(alt) == -4.0);
  CHECK(hamiltonian_statistic(blt) == -4.0);
  CHECK(hamiltonian_statistic(plus) == 4.0);
  CHECK_THROWS_AS(hamiltonian_statistic(SpinConfig(6, Spin{1})), InvalidParameterError);

  CHECK(magnetization_statistic(plus) == 16.0);
  CHECK(magnetization_statistic(alt) == 0.0);

  // t = 0: plain overlap with the initial condition.
  CHECK(autocorrelation_statistic(alt, alt, 0.0, p) == doctest::Approx(16.0));
  CHECK(autocorrelation_statistic(plus, alt, 0.0, p) == doctest::Approx(0.0));
  // and from the alt eigenvector property at t > 0.
  CHECK(autocorrelation_statistic(alt, alt, 1.0, p) ==
        doctest::Approx(16.0 * std::exp(-(2.0 - p.theta))).epsilon(1e-10));
  std::vector<double> short_profile(4, 0.0);
  CHECK_THROWS_AS(autocorrelation_statistic(alt, short_profile), InvalidParameterError);
}

TEST_CASE("single replica at t = 0 returns the t = 0 statistic") {
  const ModelParams p = ModelParams::make(12, 0.3);
  RngStream rng(72);
  const SpinConfig alt = make_initial(InitialCondition::Alt, p.n, rng);
  const auto s = mc_statistic_samples(StatisticKind::Autocorrelation, alt, 0.0, p, 1, rng);
  REQUIRE(s.values.size() == 1);
  CHECK(s.values[0] == doctest::Approx(12.0));
}

TEST_CASE("dynamic autocorrelation mean matches the L2 prediction") {
  const ModelParams p = ModelParams::make(64, 0.2);
  RngStream rng(73);
  const SpinConfig alt = make_initial(InitialCondition::Alt, p.n, rng);
  for (const double t : {0.5, 1.0}) {
    RngStream sub = rng.substream(static_cast<std::uint64_t>(t * 1000));
    const auto s = mc_statistic_samples(StatisticKind::Autocorrelation, alt, t, p,
                                        100'000, sub);
    const double want = autocorrelation_l2_prediction(alt, t, p);
    CHECK(std::abs(s.mean() - want) < 3.0 * s.std_error());
  }
  RngStream stat_rng = rng.substream(999);
  const auto pi_samples = mc_statistic_samples_stationary(
      StatisticKind::Autocorrelation, alt, 1.0, p, 100'000, stat_rng);
  CHECK(std::abs(pi_samples.mean()) < 3.0 * pi_samples.std_error());
}

TEST_CASE("stationary hamiltonian mean matches the transfer matrix") {
  const ModelParams p = ModelParams::make(64, 0.35);
  RngStream rng(74);
  const SpinConfig plus = make_initial(InitialCondition::Plus, p.n, rng);
  const auto s = mc_statistic_samples_stationary(StatisticKind::Hamiltonian, plus,
                                                 0.0, p, 200'000, rng);
  const double want = (p.n / 4.0) * pair_correlation(p, 1);
  CHECK(std::abs(s.mean() - want) < 3.0 * s.std_error());
}

TEST_CASE("hamiltonian variance stays of order n") {
  // Calibration note: exact n = 12 dynamics give Var(R)/n ~ 0.25 at t = 1;
  // the frozen cap of 1.0 would flag anything resembling the n log^2 n
  // worst case while passing the real scale.
  RngStream rng(75);
  for (const int n : {64, 256}) {
    const ModelParams p = ModelParams::make(n, 0.3);
    const SpinConfig alt = make_initial(InitialCondition::Alt, n, rng);
    for (const double t : {0.5, 1.0, 2.0}) {
      RngStream sub = rng.substream(n * 10 + static_cast<int>(t * 2));
      const auto s = mc_statistic_samples(StatisticKind::Hamiltonian, alt, t, p,
                                          40'000, sub);
      CHECK(s.variance() / n < 1.0);
      CHECK(s.variance() > 0.0);
    }
  }
}

TEST_CASE("hamiltonian ordering: stationary mean dominates the dynamic mean") {
  const ModelParams p = ModelParams::make(64, 0.3);
  RngStream rng(76);
  const int reps = 100'000;
  RngStream stat_rng = rng.substream(1);
  const SpinConfig plus = make_initial(InitialCondition::Plus, p.n, rng);
  const auto pi_samples = mc_statistic_samples_stationary(StatisticKind::Hamiltonian,
                                                          plus, 0.0, p, reps, stat_rng);
  int idx = 2;
  for (const auto kind : {InitialCondition::Alt, InitialCondition::Blt}) {
    const SpinConfig x0 = make_initial(kind, p.n, rng);
    for (const double t : {0.5, 1.0, 2.0}) {
      RngStream sub = rng.substream(idx++);
      const auto dyn = mc_statistic_samples(StatisticKind::Hamiltonian, x0, t, p,
                                            reps, sub);
      const double pooled_se = std::sqrt(pi_samples.std_error() * pi_samples.std_error() +
                                         dyn.std_error() * dyn.std_error());
      CHECK(pi_samples.mean() - dyn.mean() >= -3.0 * pooled_se);
      if (t == 1.0) {
        CHECK(pi_samples.mean() - dyn.mean() > 3.0 * pooled_se);
      }
    }
  }
}

TEST_CASE("two-walk product experiment") {
  const ModelParams p = ModelParams::make(64, 0.3);
  RngStream rng(77);
  const double t = 1.0;
  RngStream r1 = rng.substream(1);
  const auto alt = two_walk_product_experiment(InitialCondition::Alt, t, p, 200'000, r1);
  CHECK(std::abs(alt.mean_all + std::exp(-4.0 * (1.0 - p.theta) * t)) < 3.0 * alt.se_all);
  CHECK(alt.mean_no_meet <= 3.0 * alt.se_no_meet);
  CHECK(alt.no_meet_fraction > 0.0);
  CHECK(alt.no_meet_fraction < 1.0);

  RngStream r2 = rng.substream(2);
  const auto blt = two_walk_product_experiment(InitialCondition::Blt, t, p, 200'000, r2);
  CHECK(std::abs(blt.mean_all + std::exp(-2.0 * (1.0 - p.theta) * t)) < 3.0 * blt.se_all);
  CHECK(blt.mean_no_meet <= 3.0 * blt.se_no_meet);

  CHECK_THROWS_AS(two_walk_product_experiment(InitialCondition::Plus, t, p, 10, rng),
                  InvalidParameterError);
}

TEST_CASE("empirical TV lower bound edge cases") {
  RngStream rng(78);
  StatisticSamples a, b;
  a.values.resize(4000);
  for (auto& v : a.values) v = rng.uniform();
  b.values = a.values;
  RngStream boot = rng.substream(1);
  const auto same = empirical_tv_lower_bound(a, b, boot);
  CHECK(same.value == 0.0);

  a.values.assign(4000, 0.0);
  b.values.assign(4000, 1.0);
  RngStream boot2 = rng.substream(2);
  const auto apart = empirical_tv_lower_bound(a, b, boot2);
  CHECK(apart.value > 0.99);
  CHECK(apart.value <= 1.0);

  StatisticSamples empty;
  CHECK_THROWS_AS(empirical_tv_lower_bound(a, empty, boot2), InvalidParameterError);

  // Constant equal samples: a single shared atom.
  a.values.assign(100, 2.5);
  b.values.assign(100, 2.5);
  RngStream boot3 = rng.substream(3);
  CHECK(empirical_tv_lower_bound(a, b, boot3).value == 0.0);
}

TEST_CASE("threshold diagnostic is a weaker valid bound") {
  const ModelParams p = ModelParams::make(12, 0.25);
  RngStream rng(79);
  const SpinConfig alt = make_initial(InitialCondition::Alt, p.n, rng);
  const auto pi = stationary_vector(p);
  for (const double t : {0.5, 1.5}) {
    const double exact = total_variation(evolve_distribution(alt, t, p), pi);
    RngStream dyn = rng.substream(static_cast<std::uint64_t>(10 * t));
    RngStream stat = rng.substream(static_cast<std::uint64_t>(10 * t) + 1);
    RngStream boot = rng.substream(static_cast<std::uint64_t>(10 * t) + 2);
    const auto a = mc_statistic_samples(StatisticKind::Autocorrelation, alt, t, p,
                                        30'000, dyn);
    const auto b = mc_statistic_samples_stationary(StatisticKind::Autocorrelation,
                                                   alt, t, p, 30'000, stat);
    const auto lb = empirical_tv_lower_bound(a, b, boot);
    const auto th = threshold_tv_lower_bound(a, b);
    CHECK(lb.value <= exact + 3.0 * lb.std_error);
    CHECK(th.value <= exact + 3.0 * th.std_error);
  }
}

TEST_CASE("mixing curve with the exact column at n = 12") {
  const ModelParams p = ModelParams::make(12, 0.2);
  RngStream rng(80);
  const std::vector<double> times = {0.0, 0.5, 1.0, 2.0, 6.0};
  const auto curve = mixing_curve(InitialCondition::Alt, p, times, 20'000, rng);
  REQUIRE(curve.times.size() == times.size());
  REQUIRE(curve.exact_tv.size() == times.size());

  // t = 0 exact entry is 1 - pi(x0).
  RngStream rng2(80);
  const SpinConfig alt = make_initial(InitialCondition::Alt, p.n, rng2);
  const auto pi = stationary_vector(p);
  CHECK(curve.exact_tv[0] ==
        doctest::Approx(1.0 - pi.probs[config_to_index(alt)]).epsilon(1e-10));

  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(curve.tv_lower_bounds[i] <= curve.exact_tv[i] + 3.0 * curve.std_errors[i]);
    CHECK(curve.tv_lower_bounds[i] >= 0.0);
  }
  // Large t: both sources are stationary, the bound collapses to ~0.
  CHECK(curve.tv_lower_bounds.back() <=
        std::max(3.0 * curve.std_errors.back(), 0.01));

  CHECK_THROWS_AS(mixing_curve(InitialCondition::Alt, p,
                               std::vector<double>{1.0, 0.5}, 100, rng),
                  InvalidParameterError);
}

TEST_CASE("mixing curve without the exact column above the cap") {
  const ModelParams p = ModelParams::make(32, 0.2);
  RngStream rng(81);
  const std::vector<double> times = {0.5, 1.5};
  const auto curve = mixing_curve(InitialCondition::Blt, p, times, 4'000, rng, 14);
  CHECK(curve.exact_tv.empty());
  CHECK(curve.tv_lower_bounds.size() == 2);
  std::ostringstream os;
  write_mixing_curve_csv(os, curve);
  CHECK(os.str().rfind("t,tv_lower,stderr\n", 0) == 0);
}

TEST_CASE("alt drops below 1/2 before plus at n = 512") {
  const ModelParams p = ModelParams::make(512, 0.2);
  const std::vector<double> times = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0};
  RngStream rng_alt(82);
  RngStream rng_plus(83);
  const auto alt = mixing_curve(InitialCondition::Alt, p, times, 10'000, rng_alt);
  const auto plus = mixing_curve(InitialCondition::Plus, p, times, 10'000, rng_plus);
  const auto first_below = [&](const MixingCurve& c) {
    for (std::size_t i = 0; i < c.times.size(); ++i) {
      if (c.tv_lower_bounds[i] < 0.5) return c.times[i];
    }
    return c.times.back() + 1.0;
  };
  CHECK(first_below(alt) < first_below(plus));
}

TEST_CASE("covariance decay diagnostics") {
  RngStream rng(84);
  {
    const ModelParams p = ModelParams::make(32, 0.0);
    RngStream sub = rng.substream(1);
    const auto c = covariance_decay_check(p, 1.0, 4, 100'000, sub);
    CHECK(std::abs(c.value) < 3.0 * c.std_error);
  }
  {
    const ModelParams p = ModelParams::make(64, 0.4);
    RngStream near_rng = rng.substream(2);
    RngStream far_rng = rng.substream(3);
    const auto near = covariance_decay_check(p, 2.0, 1, 200'000, near_rng);
    const auto far = covariance_decay_check(p, 2.0, 20, 200'000, far_rng);
    CHECK(std::abs(far.value) < std::abs(near.value));
  }
  {
    const ModelParams p = ModelParams::make(16, 0.3);
    RngStream sub = rng.substream(4);
    const auto c = covariance_decay_check(p, 0.0, 3, 200'000, sub, std::nullopt);
    CHECK(std::abs(c.value - pair_correlation(p, 3)) < 3.0 * c.std_error);
  }
  const ModelParams p = ModelParams::make(16, 0.3);
  CHECK_THROWS_AS(covariance_decay_check(p, 1.0, 0, 100, rng), InvalidParameterError);
  CHECK_THROWS_AS(covariance_decay_check(p, 1.0, 16, 100, rng), InvalidParameterError);
}
