#include "glauber/model.hpp"

#include <cmath>

#include "doctest.h"
#include "glauber/errors.hpp"
#include "glauber/stat_tests.hpp"
#include "test_util.hpp"

using namespace glauber;

TEST_CASE("theta_of_beta fixtures") {
  CHECK(theta_of_beta(0.0) == 1.0);
  CHECK(theta_of_beta(0.5 * std::atanh(1.0 / 3.0)) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(theta_of_beta(0.5 * std::atanh(0.5)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(theta_of_beta(-0.1), InvalidParameterError);
  CHECK_THROWS_AS(theta_of_beta(std::nan("")), InvalidParameterError);
}

TEST_CASE("theta is in (0,1] and strictly decreasing") {
  double prev = 2.0;
  for (double beta = 0.0; beta <= 3.0; beta += 0.05) {
    const double th = theta_of_beta(beta);
    CHECK(th > 0.0);
    CHECK(th <= 1.0);
    if (beta > 0.0) CHECK(th < prev);
    prev = th;
  }
}

TEST_CASE("ModelParams validates and derives theta") {
  const ModelParams p = ModelParams::make(12, 0.3);
  CHECK(p.theta == doctest::Approx(1.0 - std::tanh(0.6)).epsilon(1e-15));
  CHECK_THROWS_AS(ModelParams::make(7, 0.1), InvalidParameterError);
  CHECK_THROWS_AS(ModelParams::make(2, 0.1), InvalidParameterError);
  CHECK_THROWS_AS(ModelParams::make(8, -1.0), InvalidParameterError);
}

TEST_CASE("make_initial fixtures") {
  RngStream rng(1);
  CHECK(make_initial(InitialCondition::Alt, 4, rng) == SpinConfig{1, -1, 1, -1});
  CHECK(make_initial(InitialCondition::Blt, 8, rng) ==
        SpinConfig{1, -1, -1, 1, 1, -1, -1, 1});
  CHECK(make_initial(InitialCondition::Plus, 4, rng) == SpinConfig{1, 1, 1, 1});
  CHECK_THROWS_AS(make_initial(InitialCondition::Blt, 6, rng), InvalidParameterError);

  const SpinConfig random = make_initial(InitialCondition::Annealed, 64, rng);
  for (const Spin s : random) CHECK((s == 1 || s == -1));
}

TEST_CASE("gibbs_log_weight fixtures and symmetries") {
  const ModelParams p = ModelParams::make(4, 0.3);
  RngStream rng(2);
  CHECK(gibbs_log_weight(make_initial(InitialCondition::Plus, 4, rng), p) ==
        doctest::Approx(1.2).epsilon(1e-14));
  CHECK(gibbs_log_weight(make_initial(InitialCondition::Alt, 4, rng), p) ==
        doctest::Approx(-1.2).epsilon(1e-14));
  const ModelParams free = ModelParams::make(4, 0.0);
  CHECK(gibbs_log_weight(make_initial(InitialCondition::Alt, 4, rng), free) == 0.0);
  CHECK_THROWS_AS(gibbs_log_weight(SpinConfig{1, 1}, p), InvalidParameterError);

  for (int trial = 0; trial < 100; ++trial) {
    const int n = 4 + 2 * rng.uniform_int(5);
    const ModelParams q = ModelParams::make(n, rng.uniform());
    const SpinConfig x = make_initial(InitialCondition::Annealed, n, rng);
    const double w = gibbs_log_weight(x, q);
    const int shift = rng.uniform_int(n);
    SpinConfig rot(x.size());
    for (int i = 0; i < n; ++i) rot[(i + shift) % n] = x[i];
    SpinConfig flip = x;
    for (auto& s : flip) s = -s;
    CHECK(gibbs_log_weight(rot, q) == doctest::Approx(w).epsilon(1e-13));
    CHECK(gibbs_log_weight(flip, q) == doctest::Approx(w).epsilon(1e-13));
  }
}

TEST_CASE("log partition function matches enumeration") {
  CHECK(log_partition_function(ModelParams::make(10, 0.0)) ==
        doctest::Approx(10.0 * std::log(2.0)).epsilon(1e-14));

  const double z4 = log_partition_function(ModelParams::make(4, 0.3));
  CHECK(z4 == doctest::Approx(testing::enumerate_log_partition(4, 0.3)).epsilon(1e-12));

  const double z8 = log_partition_function(ModelParams::make(8, 0.5));
  CHECK(std::abs(z8 - testing::enumerate_log_partition(8, 0.5)) /
            std::abs(z8) < 1e-10);

  for (const int n : {4, 6, 8, 10, 12}) {
    for (const double beta : {0.0, 0.1, 0.25, 0.5, 0.8, 1.2, 2.0}) {
      const double got = log_partition_function(ModelParams::make(n, beta));
      CHECK(std::abs(got - testing::enumerate_log_partition(n, beta)) < 1e-9);
    }
  }
}

TEST_CASE("pair correlation matches enumeration and bounds") {
  const ModelParams free = ModelParams::make(8, 0.0);
  for (int d = 1; d <= 7; ++d) CHECK(pair_correlation(free, d) == 0.0);

  const ModelParams p6 = ModelParams::make(6, 0.4);
  for (int d = 1; d <= 5; ++d) {
    CHECK(std::abs(pair_correlation(p6, d) -
                   testing::enumerate_pair_correlation(6, 0.4, d)) < 1e-10);
  }
  CHECK_THROWS_AS(pair_correlation(p6, 0), InvalidParameterError);
  CHECK_THROWS_AS(pair_correlation(p6, 6), InvalidParameterError);

  for (double beta = 0.0; beta <= 2.0; beta += 0.1) {
    const ModelParams p = ModelParams::make(32, beta);
    CHECK(pair_correlation(p, 1) > 0.0 - 1e-15);
    CHECK(pair_correlation(p, 1) >= std::tanh(beta) - 1e-12);
    if (beta > 0.0) CHECK(pair_correlation(p, 1) > 0.0);
  }
}

TEST_CASE("exact Gibbs sampler matches the enumerated measure") {
  const ModelParams p = ModelParams::make(6, 0.4);
  const auto pi = testing::enumerate_gibbs(6, 0.4);
  const int samples = 1'000'000;
  RngStream rng(20240513);
  GibbsSampler sampler(p);
  std::vector<std::int64_t> counts(pi.size(), 0);
  double pair_sum = 0.0;
  SpinConfig x;
  for (int s = 0; s < samples; ++s) {
    sampler.sample_into(x, rng);
    std::uint32_t mask = 0;
    for (int i = 0; i < 6; ++i) {
      if (x[i] == 1) mask |= (1u << i);
    }
    counts[mask]++;
    pair_sum += x[0] * x[1];
  }
  const double stat = chi_square_gof_statistic(counts, pi, samples);
  CHECK(stat < chi_square_quantile(0.99, 63));

  const double target = pair_correlation(p, 1);
  const double se = std::sqrt((1.0 - target * target) / samples);
  CHECK(std::abs(pair_sum / samples - target) < 3.0 * se);
}

TEST_CASE("Gibbs sampler at beta=0 gives fair independent signs") {
  const ModelParams p = ModelParams::make(16, 0.0);
  const int samples = 100'000;
  RngStream rng(7);
  GibbsSampler sampler(p);
  double mean = 0.0;
  SpinConfig x;
  for (int s = 0; s < samples; ++s) {
    sampler.sample_into(x, rng);
    for (const Spin v : x) mean += v;
  }
  mean /= static_cast<double>(samples) * p.n;
  const double se = 1.0 / std::sqrt(static_cast<double>(samples) * p.n);
  CHECK(std::abs(mean) < 3.0 * se);
}
