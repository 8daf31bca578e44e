#include "glauber/oracle.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "glauber/errors.hpp"
#include "glauber/semigroup.hpp"
#include "test_util.hpp"

using namespace glauber;

TEST_CASE("stationary vector fixtures") {
  SUBCASE("beta = 0 is uniform") {
    const ModelParams p = ModelParams::make(10, 0.0);
    const auto pi = stationary_vector(p);
    for (const double v : pi.probs) CHECK(v == doctest::Approx(1.0 / 1024.0).epsilon(1e-12));
  }

  SUBCASE("matches the enumeration oracle state by state") {
    const ModelParams p = ModelParams::make(4, 0.3);
    const auto pi = stationary_vector(p);
    const auto want = testing::enumerate_gibbs(4, 0.3);
    double mass = 0.0;
    for (std::uint32_t m = 0; m < 16; ++m) {
      CHECK(std::abs(pi.probs[m] - want[m]) < 1e-12);
      mass += pi.probs[m];
    }
    CHECK(std::abs(mass - 1.0) < 1e-12);
  }

  SUBCASE("fixed under one expected heat-bath update") {
    const ModelParams p = ModelParams::make(10, 0.45);
    const auto pi = stationary_vector(p);
    DistributionVector stepped;
    apply_uniformized_step(pi, p, stepped);
    double mass = 0.0;
    for (std::uint32_t m = 0; m < pi.probs.size(); ++m) {
      CHECK(std::abs(stepped.probs[m] - pi.probs[m]) < 1e-10);
      mass += stepped.probs[m];
    }
    CHECK(std::abs(mass - 1.0) < 1e-12);
  }

  CHECK_THROWS_AS(stationary_vector(ModelParams::make(16, 0.1), 14), CapacityError);
}

TEST_CASE("config/index round trip") {
  RngStream rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4 + 2 * rng.uniform_int(5);
    const SpinConfig x = make_initial(InitialCondition::Annealed, n, rng);
    CHECK(index_to_config(config_to_index(x), n) == x);
  }
}

TEST_CASE("evolution fixtures") {
  const ModelParams p = ModelParams::make(10, 0.3);
  RngStream rng(62);
  const SpinConfig alt = make_initial(InitialCondition::Alt, p.n, rng);

  SUBCASE("t = 0 is the point mass") {
    const auto mu = evolve_distribution(alt, 0.0, p);
    CHECK(mu.probs[config_to_index(alt)] == 1.0);
  }

  SUBCASE("long runs reach stationarity") {
    const double t = 50.0 * std::log(10.0);
    const auto mu = evolve_distribution(alt, t, p, 1e-12);
    const auto pi = stationary_vector(p);
    CHECK(total_variation(mu, pi) < 1e-8);
  }

  SUBCASE("mass is conserved within the truncation tolerance") {
    const auto mu = evolve_distribution(alt, 2.5, p, 1e-12);
    double mass = 0.0;
    for (const double v : mu.probs) {
      CHECK(v >= -1e-14);
      mass += v;
    }
    CHECK(std::abs(mass - 1.0) < 1e-10);
  }

  SUBCASE("single-site marginal from alt follows the exact relaxation") {
    const ModelParams q = ModelParams::make(10, 0.2);
    const SpinConfig x0 = make_initial(InitialCondition::Alt, q.n, rng);
    const auto mu = evolve_distribution(x0, 1.0, q);
    const auto mean = site_marginals(mu);
    for (int i = 0; i < q.n; ++i) {
      const double want = std::exp(-(2.0 - q.theta) * 1.0) * x0[i];
      CHECK(std::abs(mean[i] - want) < 1e-8);
    }
  }

  CHECK_THROWS_AS(evolve_distribution(alt, -1.0, p), InvalidParameterError);
  CHECK_THROWS_AS(evolve_distribution(alt, 1.0, p, 0.0), InvalidParameterError);
}

TEST_CASE("marginals match the killed-walk representation for every start") {
  RngStream rng(63);
  const ModelParams p = ModelParams::make(8, 0.35);
  for (const auto kind : {InitialCondition::Alt, InitialCondition::Blt,
                          InitialCondition::Plus, InitialCondition::Annealed}) {
    const SpinConfig x0 = make_initial(kind, p.n, rng);
    for (const double t : {0.25, 1.0, 2.0}) {
      const auto got = site_marginals(evolve_distribution(x0, t, p));
      const auto want = conditional_magnetization(x0, t, p);
      for (int i = 0; i < p.n; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-8);
    }
  }
}

TEST_CASE("total variation fixtures") {
  const ModelParams p = ModelParams::make(8, 0.25);
  RngStream rng(64);
  const SpinConfig x0 = make_initial(InitialCondition::Plus, p.n, rng);
  const auto delta = point_mass(x0, p);
  const auto uniform = uniform_vector(p);
  const auto pi = stationary_vector(p);

  CHECK(total_variation(delta, delta) == 0.0);
  CHECK(total_variation(delta, uniform) == doctest::Approx(1.0 - 1.0 / 256.0).epsilon(1e-12));
  CHECK(total_variation(delta, pi) ==
        doctest::Approx(1.0 - pi.probs[config_to_index(x0)]).epsilon(1e-12));
  CHECK(total_variation(uniform, pi) >= 0.0);
  CHECK(total_variation(uniform, pi) <= 1.0);

  DistributionVector other;
  other.n = 4;
  other.probs.assign(16, 1.0 / 16.0);
  CHECK_THROWS_AS(total_variation(delta, other), InvalidParameterError);
}

TEST_CASE("TV to stationarity is non-increasing") {
  const ModelParams p = ModelParams::make(8, 0.25);
  RngStream rng(65);
  const auto pi = stationary_vector(p);
  for (const auto kind : {InitialCondition::Alt, InitialCondition::Plus}) {
    const SpinConfig x0 = make_initial(kind, p.n, rng);
    double prev = 2.0;
    for (const double t : {0.0, 0.25, 0.5, 1.0, 1.75, 3.0, 5.0}) {
      const double tv = total_variation(evolve_distribution(x0, t, p), pi);
      CHECK(tv <= prev + 1e-10);
      prev = tv;
    }
  }
}

TEST_CASE("law from alt keeps its symmetries") {
  const ModelParams p = ModelParams::make(8, 0.3);
  RngStream rng(66);
  const SpinConfig alt = make_initial(InitialCondition::Alt, p.n, rng);
  const auto mu = evolve_distribution(alt, 0.7, p);
  const int n = p.n;
  const std::uint32_t full = (1u << n) - 1u;
  const auto rot = [n](std::uint32_t mask, int s) {
    return ((mask << s) | (mask >> (n - s))) & ((1u << n) - 1u);
  };
  for (std::uint32_t mask = 0; mask < mu.probs.size(); ++mask) {
    CHECK(std::abs(mu.probs[mask] - mu.probs[rot(mask, 2)]) < 1e-10);
    CHECK(std::abs(mu.probs[mask] - mu.probs[rot(mask ^ full, 1)]) < 1e-10);
  }
}

TEST_CASE("beta = 0 reduces to independent refresh chains") {
  const ModelParams p = ModelParams::make(8, 0.0);
  RngStream rng(67);
  const SpinConfig x0 = make_initial(InitialCondition::Alt, p.n, rng);
  const auto pi = stationary_vector(p);
  const double got = total_variation(evolve_distribution(x0, 1.0, p), pi);
  CHECK(std::abs(got - testing::independent_refresh_tv(8, 1.0)) < 1e-8);
}

TEST_CASE("exact mixing time") {
  const ModelParams p = ModelParams::make(8, 0.2);
  RngStream rng(68);
  const SpinConfig plus = make_initial(InitialCondition::Plus, p.n, rng);
  const auto pi = stationary_vector(p);

  SUBCASE("already within eps returns zero") {
    const double eps = 1.0 - pi.probs[config_to_index(plus)] + 1e-9;
    CHECK(exact_mixing_time(plus, eps, p) == 0.0);
  }

  SUBCASE("returned time brackets the threshold at the grid resolution") {
    const double t = exact_mixing_time(plus, 0.25, p);
    CHECK(t > 0.0);
    CHECK(total_variation(evolve_distribution(plus, t, p), pi) <= 0.25);
    CHECK(total_variation(evolve_distribution(plus, t - 2e-3, p), pi) > 0.25);
  }

  SUBCASE("monotone in eps") {
    CHECK(exact_mixing_time(plus, 0.5, p) <= exact_mixing_time(plus, 0.25, p));
  }

  CHECK_THROWS_AS(exact_mixing_time(plus, 0.0, p), InvalidParameterError);
  CHECK_THROWS_AS(exact_mixing_time(plus, 1.0, p), InvalidParameterError);
}

TEST_CASE("sorted starts: alt mixes before blt before plus at n = 12") {
  const ModelParams p = ModelParams::make(12, 0.2);
  RngStream rng(69);
  const double t_alt = exact_mixing_time(make_initial(InitialCondition::Alt, 12, rng), 0.25, p);
  const double t_blt = exact_mixing_time(make_initial(InitialCondition::Blt, 12, rng), 0.25, p);
  const double t_plus = exact_mixing_time(make_initial(InitialCondition::Plus, 12, rng), 0.25, p);
  CHECK(t_alt < t_blt);
  CHECK(t_blt < t_plus);
  const double t_annealed = exact_mixing_time(uniform_vector(p), 0.25, p);
  CHECK(t_annealed <= t_plus);
}

TEST_CASE("distribution snapshot round trip") {
  const ModelParams p = ModelParams::make(8, 0.3);
  const auto pi = stationary_vector(p);
  std::stringstream buf;
  write_distribution(buf, pi);
  CHECK(buf.str().size() == 8 + 256 * sizeof(double));
  const auto back = read_distribution(buf);
  CHECK(back.n == pi.n);
  CHECK(back.probs == pi.probs);

  std::stringstream bad("short");
  CHECK_THROWS_AS(read_distribution(bad), InvalidParameterError);
}
