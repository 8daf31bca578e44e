#include "glauber/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <sstream>

#include "glauber/dynamics.hpp"
#include "glauber/errors.hpp"
#include "glauber/histories.hpp"
#include "glauber/model.hpp"
#include "glauber/oracle.hpp"
#include "glauber/rng.hpp"
#include "glauber/semigroup.hpp"
#include "glauber/stat_tests.hpp"
#include "glauber/stats.hpp"

namespace glauber {

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

CheckResult pass() { return {true, ""}; }

CheckResult fail(std::string detail) { return {false, std::move(detail)}; }

CheckResult expect_near(double got, double want, double tol, const char* what) {
  if (std::abs(got - want) <= tol) return pass();
  return fail(std::string(what) + ": got " + format_double(got) + ", want " +
              format_double(want) + " +- " + format_double(tol));
}

CheckResult expect_le(double lhs, double rhs, const char* what) {
  if (lhs <= rhs) return pass();
  return fail(std::string(what) + ": " + format_double(lhs) + " > " +
              format_double(rhs));
}

// Enumeration over all 2^n states; the slow path the closed forms must match.
double enumerated_log_partition(const ModelParams& p) {
  const std::uint32_t states = 1u << p.n;
  double max_log = -1e300;
  std::vector<double> logs(states);
  for (std::uint32_t mask = 0; mask < states; ++mask) {
    SpinConfig x = index_to_config(mask, p.n);
    logs[mask] = gibbs_log_weight(x, p);
    max_log = std::max(max_log, logs[mask]);
  }
  double s = 0.0;
  for (const double v : logs) s += std::exp(v - max_log);
  return max_log + std::log(s);
}

double enumerated_pair_correlation(const ModelParams& p, int d) {
  const std::uint32_t states = 1u << p.n;
  const double logz = enumerated_log_partition(p);
  double acc = 0.0;
  for (std::uint32_t mask = 0; mask < states; ++mask) {
    SpinConfig x = index_to_config(mask, p.n);
    acc += x[0] * x[d] * std::exp(gibbs_log_weight(x, p) - logz);
  }
  return acc;
}

const double kBetaGrid[] = {0.0,  0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.5,
                            0.6,  0.7,  0.8, 0.9,  1.0, 1.2,  1.5, 2.0,  2.5, 3.0};

// --- model ---------------------------------------------------------------

CheckResult check_theta_range_monotone() {
  double prev = 2.0;
  for (const double beta : kBetaGrid) {
    const double th = theta_of_beta(beta);
    if (!(th > 0.0 && th <= 1.0)) {
      return fail("theta out of (0,1] at beta=" + format_double(beta));
    }
    if ((beta == 0.0) != (th == 1.0)) {
      return fail("theta == 1 must hold exactly when beta == 0");
    }
    if (th >= prev && beta > 0.0) {
      return fail("theta not strictly decreasing at beta=" + format_double(beta));
    }
    prev = th;
  }
  return pass();
}

CheckResult check_gibbs_weight_symmetry(std::uint64_t seed) {
  RngStream rng(seed, 101);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 4 + 2 * rng.uniform_int(6);
    const ModelParams p = ModelParams::make(n, 0.1 + rng.uniform());
    SpinConfig x = make_initial(InitialCondition::Annealed, n, rng);
    const double w = gibbs_log_weight(x, p);
    const int shift = rng.uniform_int(n);
    SpinConfig rot(x.size());
    for (int i = 0; i < n; ++i) rot[(i + shift) % n] = x[i];
    SpinConfig flip = x;
    for (auto& s : flip) s = -s;
    if (std::abs(gibbs_log_weight(rot, p) - w) > 1e-12) {
      return fail("rotation changed the log weight");
    }
    if (std::abs(gibbs_log_weight(flip, p) - w) > 1e-12) {
      return fail("global flip changed the log weight");
    }
  }
  return pass();
}

CheckResult check_partition_function() {
  for (const int n : {4, 6, 8, 10, 12}) {
    for (const double beta : {0.0, 0.15, 0.3, 0.5, 1.0}) {
      const ModelParams p = ModelParams::make(n, beta);
      const auto r = expect_near(log_partition_function(p),
                                 enumerated_log_partition(p), 1e-9,
                                 "log partition vs enumeration");
      if (!r.passed) return r;
    }
  }
  return pass();
}

CheckResult check_pair_correlation() {
  for (const double beta : {0.0, 0.2, 0.4, 0.8}) {
    const ModelParams p = ModelParams::make(6, beta);
    for (int d = 1; d <= 5; ++d) {
      const auto r = expect_near(pair_correlation(p, d),
                                 enumerated_pair_correlation(p, d), 1e-10,
                                 "pair correlation vs enumeration");
      if (!r.passed) return r;
    }
  }
  for (const double beta : kBetaGrid) {
    const ModelParams p = ModelParams::make(64, beta);
    if (pair_correlation(p, 1) < std::tanh(beta) - 1e-12) {
      return fail("pair_correlation(1) below the single-edge bound at beta=" +
                  format_double(beta));
    }
  }
  return pass();
}

CheckResult check_gibbs_sampler(std::uint64_t seed) {
  const ModelParams p = ModelParams::make(6, 0.4);
  const DistributionVector pi = stationary_vector(p);
  const int samples = 1'000'000;
  RngStream rng(seed, 102);
  const GibbsSampler sampler(p);
  std::vector<std::int64_t> counts(pi.probs.size(), 0);
  SpinConfig x;
  double pair_sum = 0.0;
  for (int s = 0; s < samples; ++s) {
    sampler.sample_into(x, rng);
    counts[config_to_index(x)]++;
    pair_sum += x[0] * x[1];
  }
  const double stat = chi_square_gof_statistic(counts, pi.probs, samples);
  const double crit = chi_square_quantile(0.99, static_cast<int>(counts.size()) - 1);
  if (stat > crit) {
    return fail("chi-square " + format_double(stat) + " above 1% critical " +
                format_double(crit));
  }
  const double mean_pair = pair_sum / samples;
  const double target = pair_correlation(p, 1);
  const double se = std::sqrt((1.0 - target * target) / samples);
  return expect_near(mean_pair, target, 3.0 * se, "sampler E[Y0 Y1]");
}

// --- dynamics ------------------------------------------------------------

CheckResult check_encoding_equivalence(std::uint64_t seed,
                                       const std::function<double(double)>& theta_fn) {
  for (const double beta : kBetaGrid) {
    const ModelParams p = ModelParams::make(8, beta);
    const double theta = theta_fn(beta);
    for (const int sum : {-2, 0, 2}) {
      const double plus_neighbors = (sum + 2) / 2;  // 0, 1, 2
      const double voter = theta / 2.0 + (1.0 - theta) * plus_neighbors / 2.0;
      const double heat = heat_bath_plus_probability(sum, p);
      if (std::abs(voter - heat) > 1e-12) {
        return fail("one-update plus probability mismatch at beta=" +
                    format_double(beta) + ", s=" + format_double(sum) + ": voter " +
                    format_double(voter) + " vs heat-bath " + format_double(heat));
      }
    }
  }
  // Empirical cross-check of the implementation path: one update at site 0
  // with both neighbors +1.
  const ModelParams p = ModelParams::make(4, 0.3);
  RngStream rng(seed, 103);
  const int reps = 200'000;
  int plus = 0;
  UpdateSequence seq;
  seq.horizon = 1.0;
  seq.events.resize(1);
  for (int r = 0; r < reps; ++r) {
    seq.events[0] = {0.5, 0, rng.coin() ? 1 : 3, rng.uniform()};
    SpinConfig x = {-1, 1, -1, 1};  // neighbors of site 0 are sites 1 and 3
    x = evolve_voter(std::move(x), seq, p);
    plus += (x[0] == 1) ? 1 : 0;
  }
  const double want = heat_bath_plus_probability(2, p);
  const double se = std::sqrt(want * (1.0 - want) / reps);
  return expect_near(static_cast<double>(plus) / reps, want, 3.0 * se,
                     "empirical one-update plus frequency");
}

CheckResult check_determinism(std::uint64_t seed) {
  const ModelParams p = ModelParams::make(24, 0.35);
  RngStream rng(seed, 104);
  const UpdateSequence seq = sample_update_sequence(p, 3.0, rng);
  SpinConfig x0 = make_initial(InitialCondition::Annealed, p.n, rng);
  if (evolve_voter(x0, seq, p) != evolve_voter(x0, seq, p)) {
    return fail("voter evolution not reproducible");
  }
  if (evolve_heat_bath(x0, seq, p) != evolve_heat_bath(x0, seq, p)) {
    return fail("heat-bath evolution not reproducible");
  }
  return pass();
}

CheckResult check_beta_zero_uniform(std::uint64_t seed) {
  const ModelParams p = ModelParams::make(16, 0.0);
  const double horizon = 5.0 * std::log(16.0);
  const int reps = 20'000;
  RngStream rng(seed, 105);
  std::vector<std::int64_t> plus(p.n, 0);
  UpdateSequence seq;
  for (int r = 0; r < reps; ++r) {
    RngStream sub = rng.substream(r);
    sample_update_sequence_into(seq, p, horizon, sub);
    SpinConfig x = make_initial(InitialCondition::Plus, p.n, sub);
    evolve_voter_inplace(x, seq, p, 0.0, horizon);
    for (int i = 0; i < p.n; ++i) plus[i] += (x[i] == 1);
  }
  const double se = std::sqrt(0.25 / reps);
  for (int i = 0; i < p.n; ++i) {
    const double freq = static_cast<double>(plus[i]) / reps;
    // Residual memory of the start is e^{-horizon} ~ 1e-6; 3.3 sigma absorbs
    // the 16-site multiplicity at the fixed seed.
    if (std::abs(freq - 0.5) > 3.3 * se) {
      return fail("site " + std::to_string(i) + " not uniform at beta=0: freq " +
                  format_double(freq));
    }
  }
  return pass();
}

CheckResult check_stationarity_preserved(std::uint64_t seed) {
  const ModelParams p = ModelParams::make(12, 0.25);
  const int reps = 200'000;
  RngStream rng(seed, 106);
  RngStream rng_dyn = rng.substream(1);
  RngStream rng_ref = rng.substream(2);
  const GibbsSampler sampler(p);
  // Hamiltonian statistic atoms: -3,-1,1,3 -> 4 cells.
  const auto cell = [](double v) { return static_cast<int>((v + 3.0) / 2.0); };
  std::vector<std::int64_t> dyn_counts(4, 0), ref_counts(4, 0);
  UpdateSequence seq;
  SpinConfig x;
  for (int r = 0; r < reps; ++r) {
    RngStream sub = rng_dyn.substream(r);
    sampler.sample_into(x, sub);
    sample_update_sequence_into(seq, p, 1.0, sub);
    evolve_voter_inplace(x, seq, p, 0.0, 1.0);
    dyn_counts[cell(hamiltonian_statistic(x))]++;
    RngStream ref = rng_ref.substream(r);
    sampler.sample_into(x, ref);
    ref_counts[cell(hamiltonian_statistic(x))]++;
  }
  const auto ts = two_sample_chi_square(dyn_counts, ref_counts);
  const double crit = chi_square_quantile(0.99, ts.dof);
  if (ts.statistic > crit) {
    return fail("two-sample chi-square " + format_double(ts.statistic) +
                " above 1% critical " + format_double(crit));
  }
  return pass();
}

CheckResult check_poisson_process(std::uint64_t seed) {
  const ModelParams p = ModelParams::make(8, 0.2);
  RngStream rng(seed, 107);
  {
    const double horizon = 2.0;
    const int draws = 10'000;
    double total = 0.0;
    std::vector<std::int64_t> site_counts(p.n, 0);
    UpdateSequence seq;
    for (int d = 0; d < draws; ++d) {
      RngStream sub = rng.substream(d);
      sample_update_sequence_into(seq, p, horizon, sub);
      total += static_cast<double>(seq.events.size());
      for (const auto& e : seq.events) site_counts[e.site]++;
      for (std::size_t i = 1; i < seq.events.size(); ++i) {
        if (!(seq.events[i - 1].time < seq.events[i].time)) {
          return fail("event times not strictly increasing");
        }
      }
    }
    const double lambda = p.n * horizon;
    const double se = std::sqrt(lambda / draws);
    const auto r = expect_near(total / draws, lambda, 3.0 * se, "mean event count");
    if (!r.passed) return r;
    std::vector<double> uniform_probs(p.n, 1.0 / p.n);
    const double events = total;
    const double stat = chi_square_gof_statistic(site_counts, uniform_probs, events);
    const double crit = chi_square_quantile(0.99, p.n - 1);
    if (stat > crit) {
      return fail("per-site event counts fail uniformity: chi-square " +
                  format_double(stat));
    }
  }
  {
    const double horizon = 1e-4;
    const int draws = 1'000'000;
    RngStream sub = rng.substream(0xeeee);
    int empty = 0;
    UpdateSequence seq;
    for (int d = 0; d < draws; ++d) {
      sample_update_sequence_into(seq, p, horizon, sub);
      empty += seq.events.empty() ? 1 : 0;
    }
    const double want = std::exp(-p.n * horizon);
    const double se = std::sqrt(want * (1.0 - want) / draws);
    return expect_near(static_cast<double>(empty) / draws, want, 3.0 * se,
                       "empty-sequence frequency");
  }
}

// --- histories -----------------------------------------------------------

CheckResult check_survival_law(std::uint64_t seed) {
  const ModelParams p = ModelParams::make(8, 0.3);
  const double dt = 1.0;
  const int reps = 200'000;
  RngStream rng(seed, 108);
  int survived = 0;
  UpdateSequence seq;
  const std::int32_t target[1] = {0};
  for (int r = 0; r < reps; ++r) {
    RngStream sub = rng.substream(r);
    sample_update_sequence_into(seq, p, dt, sub);
    const auto res = backward_support(target, 0.0, dt, seq, p);
    survived += res.support.empty() ? 0 : 1;
  }
  const double want = survival_probability(p, dt);
  const double se = std::sqrt(want * (1.0 - want) / reps);
  return expect_near(static_cast<double>(survived) / reps, want, 3.0 * se,
                     "single-history survival frequency");
}

CheckResult check_forward_consistency(std::uint64_t seed) {
  RngStream rng(seed, 109);
  for (int trial = 0; trial < 1000; ++trial) {
    const ModelParams p = ModelParams::make(16, 0.1 + 0.5 * rng.uniform());
    const double horizon = 2.0;
    UpdateSequence seq = sample_update_sequence(p, horizon, rng);
    const double s1 = horizon * rng.uniform();
    const double s2 = s1 + (horizon - s1) * rng.uniform();
    std::vector<std::int32_t> targets;
    const int a_size = 1 + rng.uniform_int(4);
    for (int k = 0; k < a_size; ++k) targets.push_back(rng.uniform_int(p.n));
    const auto res = backward_support(targets, s1, s2, seq, p);

    SpinConfig x0 = make_initial(InitialCondition::Annealed, p.n, rng);
    SpinConfig at_s1 = x0;
    evolve_voter_inplace(at_s1, seq, p, 0.0, s1);
    // Scramble everything the support does not cover; target spins at s2 must
    // be unchanged.
    SpinConfig scrambled = at_s1;
    for (int i = 0; i < p.n; ++i) {
      if (!std::binary_search(res.support.sites.begin(), res.support.sites.end(), i)) {
        scrambled[i] = -scrambled[i];
      }
    }
    SpinConfig ref = at_s1;
    evolve_voter_inplace(ref, seq, p, s1, s2);
    evolve_voter_inplace(scrambled, seq, p, s1, s2);
    for (const std::int32_t v : targets) {
      if (ref[v] != scrambled[v]) {
        return fail("spins at the queried set depend on sites outside the support");
      }
    }
  }
  return pass();
}

CheckResult check_coalescence_monotone(std::uint64_t seed) {
  RngStream rng(seed, 110);
  const ModelParams p = ModelParams::make(16, 0.25);
  std::vector<std::int32_t> all(p.n);
  for (int i = 0; i < p.n; ++i) all[i] = i;
  for (int trial = 0; trial < 50; ++trial) {
    UpdateSequence seq = sample_update_sequence(p, 2.0, rng);
    int prev = p.n + 1;
    for (int g = 10; g >= 0; --g) {
      const double s1 = 2.0 * g / 10.0;
      const auto res = backward_support(all, s1, 2.0, seq, p);
      if (res.support.size() > prev) {
        return fail("support size grew as s1 decreased");
      }
      prev = res.support.size();
    }
  }
  return pass();
}

CheckResult check_two_walker_survival(std::uint64_t seed) {
  const ModelParams p = ModelParams::make(12, 0.3);
  const double horizon = 1.0;
  const int reps = 200'000;
  RngStream rng(seed, 111);
  int both_apart = 0;
  UpdateSequence seq;
  const std::int32_t targets[2] = {0, 4};
  for (int r = 0; r < reps; ++r) {
    RngStream sub = rng.substream(r);
    sample_update_sequence_into(seq, p, horizon, sub);
    const auto res = backward_support(targets, 0.0, horizon, seq, p);
    both_apart += (res.support.size() == 2) ? 1 : 0;
  }
  const double bound = std::exp(-2.0 * p.theta * horizon);
  const double freq = static_cast<double>(both_apart) / reps;
  const double se = std::sqrt(bound * (1.0 - bound) / reps);
  return expect_le(freq, bound + 3.0 * se, "P(two histories survive apart)");
}

CheckResult check_spread_tail(std::uint64_t seed) {
  const ModelParams p = ModelParams::make(64, 0.25);
  const double horizon = 1.5;
  const int reps = 200'000;
  RngStream rng(seed, 112);
  std::vector<std::int64_t> disp_at_least(10, 0);
  UpdateSequence seq;
  const std::int32_t target[1] = {0};
  for (int r = 0; r < reps; ++r) {
    RngStream sub = rng.substream(r);
    sample_update_sequence_into(seq, p, horizon, sub);
    const auto res = backward_support(target, 0.0, horizon, seq, p);
    const int d = max_displacement(res.trajectories, p.n);
    for (int k = 1; k < 10; ++k) disp_at_least[k] += (d >= k) ? 1 : 0;
  }
  const double lambda = (1.0 - p.theta) * horizon;  // jumps of one walker
  for (int k = 1; k < 10; ++k) {
    const double bound = poisson_upper_tail(lambda, k);
    const double freq = static_cast<double>(disp_at_least[k]) / reps;
    const double se = std::sqrt(std::max(bound * (1.0 - bound), 1e-12) / reps);
    const auto r = expect_le(freq, bound + 3.0 * se,
                             "displacement tail above the jump-count tail");
    if (!r.passed) return r;
  }
  return pass();
}

CheckResult check_cluster_decomposition(std::uint64_t seed) {
  RngStream rng(seed, 113);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 24 + 2 * rng.uniform_int(40);
    const ModelParams p = ModelParams::make(n, 0.2);
    const int d_sep = 2 + rng.uniform_int(6);
    const int d_max = 2 + rng.uniform_int(10);
    SupportSet support;
    const int m = rng.uniform_int(12);
    for (int k = 0; k < m; ++k) support.sites.push_back(rng.uniform_int(n));
    std::sort(support.sites.begin(), support.sites.end());
    support.sites.erase(std::unique(support.sites.begin(), support.sites.end()),
                        support.sites.end());

    const auto decomp = cluster_decomposition(support, p, d_sep, d_max);

    // Brute-force connected components at the gap threshold.
    std::vector<char> covered(n, 0);
    for (const auto& w : decomp.intervals) {
      for (int k = 0; k < w.length; ++k) covered[(w.begin + k) % n] = 1;
    }
    for (const auto s : support.sites) {
      if (!covered[s]) return fail("interval cover misses a support site");
    }
    // Union-find over sites closer than d_sep.
    const int sz = static_cast<int>(support.sites.size());
    std::vector<int> parent(sz);
    for (int i = 0; i < sz; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int v) {
      return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    for (int i = 0; i < sz; ++i) {
      for (int j = i + 1; j < sz; ++j) {
        int d = std::abs(support.sites[i] - support.sites[j]);
        d = std::min(d, n - d);
        if (d < d_sep) parent[find(i)] = find(j);
      }
    }
    std::vector<int> roots;
    for (int i = 0; i < sz; ++i) roots.push_back(find(i));
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    if (!support.sites.empty() &&
        static_cast<int>(decomp.intervals.size()) != static_cast<int>(roots.size())) {
      return fail("interval count disagrees with gap-threshold components");
    }
    // Determinism.
    const auto again = cluster_decomposition(support, p, d_sep, d_max);
    if (again.intervals.size() != decomp.intervals.size() ||
        again.event_a != decomp.event_a) {
      return fail("decomposition is not deterministic");
    }
  }
  return pass();
}

// --- semigroup -----------------------------------------------------------

CheckResult check_transform_roundtrip(std::uint64_t seed) {
  RngStream rng(seed, 114);
  for (const int n : {6, 8, 37, 64, 130}) {
    std::vector<double> x(n);
    for (auto& v : x) v = 2.0 * rng.uniform() - 1.0;
    const SpectralVector c = to_spectral(x);
    const std::vector<double> back = from_spectral(c);
    double norm_x = 0.0, norm_c = 0.0, err = 0.0;
    for (int i = 0; i < n; ++i) {
      norm_x += x[i] * x[i];
      norm_c += c[i] * c[i];
      err = std::max(err, std::abs(back[i] - x[i]));
    }
    if (err > 1e-10) return fail("transform round trip error " + format_double(err));
    if (std::abs(norm_x - norm_c) > 1e-10 * std::max(1.0, norm_x)) {
      return fail("Parseval violated: " + format_double(norm_x) + " vs " +
                  format_double(norm_c));
    }
  }
  return pass();
}

CheckResult check_eigenvector_decay() {
  for (const int n : {8, 64}) {
    RngStream rng(0);
    const SpinConfig alt = make_initial(InitialCondition::Alt, n, rng);
    const SpinConfig blt = make_initial(InitialCondition::Blt, n, rng);
    const std::vector<double> ones(n, 1.0);
    for (const double t : {0.3, 1.0, 2.5}) {
      std::vector<double> xalt(alt.begin(), alt.end());
      std::vector<double> xblt(blt.begin(), blt.end());
      const auto palt = semigroup_apply(xalt, t, n);
      const auto pblt = semigroup_apply(xblt, t, n);
      const auto pone = semigroup_apply(ones, t, n);
      for (int i = 0; i < n; ++i) {
        if (std::abs(palt[i] - std::exp(-2.0 * t) * xalt[i]) > 1e-10) {
          return fail("alternating state does not decay at rate 2");
        }
        if (std::abs(pblt[i] - std::exp(-t) * xblt[i]) > 1e-10) {
          return fail("bi-alternating state does not decay at rate 1");
        }
        if (std::abs(pone[i] - 1.0) > 1e-10) {
          return fail("constant vector not preserved");
        }
      }
    }
    const auto lambda = walk_eigenvalues(n);
    if (std::abs(lambda[0]) > 1e-15 || std::abs(lambda[n / 2] - 2.0) > 1e-12 ||
        std::abs(lambda[n / 4] - 1.0) > 1e-12) {
      return fail("eigenvalue fixtures (0, 2 at n/2, 1 at n/4) violated");
    }
  }
  return pass();
}

CheckResult check_semigroup_property(std::uint64_t seed) {
  RngStream rng(seed, 115);
  const int n = 48;
  std::vector<double> x(n);
  for (auto& v : x) v = 2.0 * rng.uniform() - 1.0;
  for (const double s : {0.2, 0.9}) {
    for (const double t : {0.4, 1.7}) {
      const auto direct = semigroup_apply(x, s + t, n);
      const auto stepped = semigroup_apply(semigroup_apply(x, s, n), t, n);
      for (int i = 0; i < n; ++i) {
        if (std::abs(direct[i] - stepped[i]) > 1e-9) {
          return fail("P_{s+t} != P_t P_s at site " + std::to_string(i));
        }
      }
    }
  }
  return pass();
}

CheckResult check_mass_contraction(std::uint64_t seed) {
  RngStream rng(seed, 116);
  const int n = 40;
  std::vector<double> x(n);
  for (auto& v : x) v = 2.0 * rng.uniform() - 1.0;
  double mean0 = 0.0, prev_norm = 1e300;
  for (const double v : x) mean0 += v;
  for (const double t : {0.0, 0.3, 0.8, 1.5, 3.0}) {
    const auto y = semigroup_apply(x, t, n);
    double mean = 0.0, norm = 0.0;
    for (const double v : y) {
      mean += v;
      norm += v * v;
    }
    if (std::abs(mean - mean0) > 1e-9) return fail("P_t does not conserve the mean");
    if (norm > prev_norm + 1e-12) return fail("L2 norm increased under P_t");
    prev_norm = norm;
  }
  return pass();
}

CheckResult check_spectral_floor(std::uint64_t seed) {
  RngStream rng(seed, 117);
  const int n = 36;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(n);
    double norm0 = 0.0;
    for (auto& v : x) {
      v = 2.0 * rng.uniform() - 1.0;
      norm0 += v * v;
    }
    for (const double t : {0.2, 0.7, 1.9}) {
      const auto y = semigroup_apply(x, t, n);
      double norm = 0.0;
      for (const double v : y) norm += v * v;
      if (norm < std::exp(-4.0 * t) * norm0 - 1e-10) {
        return fail("||P_t x||^2 fell below e^{-4t} ||x||^2");
      }
    }
  }
  return pass();
}

CheckResult check_predicted_constants() {
  const double beta_cross_alt = 0.5 * std::atanh(1.0 / 3.0);
  const double beta_cross_blt = 0.5 * std::atanh(0.5);
  {
    const ModelParams p = ModelParams::make(8, beta_cross_alt);
    const auto r1 = expect_near(predicted_mixing_constant(InitialCondition::Alt, p),
                                3.0 / 8.0, 1e-12, "alt constant at its crossing");
    if (!r1.passed) return r1;
    const auto r2 = expect_near(
        predicted_mixing_constant(InitialCondition::Annealed, p), 3.0 / 8.0, 1e-12,
        "annealed constant at the alt crossing");
    if (!r2.passed) return r2;
  }
  {
    const ModelParams p = ModelParams::make(8, beta_cross_blt);
    const auto r = expect_near(predicted_mixing_constant(InitialCondition::Blt, p),
                               0.5, 1e-12, "blt constant at its crossing");
    if (!r.passed) return r;
  }
  double prev = 1e300;
  for (int k = 1; k <= 20; ++k) {
    const double beta = beta_cross_alt * k / 21.0;
    const ModelParams p = ModelParams::make(8, beta);
    const double c = predicted_mixing_constant(InitialCondition::Alt, p);
    if (c >= prev) return fail("alt constant not strictly decreasing below the crossing");
    prev = c;
  }
  return pass();
}

// --- oracle --------------------------------------------------------------

CheckResult check_stationary_fixed_point() {
  const ModelParams p = ModelParams::make(10, 0.3);
  const DistributionVector pi = stationary_vector(p);
  DistributionVector stepped;
  apply_uniformized_step(pi, p, stepped);
  double mass = 0.0, err = 0.0;
  for (std::size_t s = 0; s < pi.probs.size(); ++s) {
    mass += stepped.probs[s];
    err = std::max(err, std::abs(stepped.probs[s] - pi.probs[s]));
  }
  if (std::abs(mass - 1.0) > 1e-12) return fail("uniformized step lost mass");
  if (err > 1e-10) return fail("pi is not fixed by the uniformized kernel");
  const ModelParams small = ModelParams::make(4, 0.3);
  const DistributionVector pi4 = stationary_vector(small);
  const double logz = log_partition_function(small);
  for (std::uint32_t mask = 0; mask < 16; ++mask) {
    const SpinConfig x = index_to_config(mask, 4);
    const double want = std::exp(gibbs_log_weight(x, small) - logz);
    if (std::abs(pi4.probs[mask] - want) > 1e-12) {
      return fail("enumerated pi disagrees with the transfer-matrix normalizer");
    }
  }
  return pass();
}

CheckResult check_marginal_agreement(std::uint64_t seed) {
  RngStream rng(seed, 118);
  {
    const ModelParams p = ModelParams::make(10, 0.2);
    for (const auto kind : {InitialCondition::Alt, InitialCondition::Plus,
                            InitialCondition::Annealed}) {
      const SpinConfig x0 = make_initial(kind, p.n, rng);  // annealed: one draw
      for (const double t : {0.3, 1.0}) {
        const auto mu = evolve_distribution(x0, t, p);
        const auto got = site_marginals(mu);
        const auto want = conditional_magnetization(x0, t, p);
        for (int i = 0; i < p.n; ++i) {
          if (std::abs(got[i] - want[i]) > 1e-8) {
            return fail("site marginal disagrees with the killed-walk value");
          }
        }
      }
    }
  }
  {
    const ModelParams p = ModelParams::make(8, 0.35);
    const SpinConfig x0 = make_initial(InitialCondition::Blt, p.n, rng);
    const auto mu = evolve_distribution(x0, 0.8, p);
    const auto got = site_marginals(mu);
    const auto want = conditional_magnetization(x0, 0.8, p);
    for (int i = 0; i < p.n; ++i) {
      if (std::abs(got[i] - want[i]) > 1e-8) {
        return fail("blt site marginal disagrees with the killed-walk value");
      }
    }
  }
  return pass();
}

CheckResult check_tv_monotone() {
  const ModelParams p = ModelParams::make(8, 0.25);
  RngStream rng(0);
  const SpinConfig x0 = make_initial(InitialCondition::Alt, p.n, rng);
  const DistributionVector pi = stationary_vector(p);
  double prev = 2.0;
  for (const double t : {0.0, 0.2, 0.5, 1.0, 1.5, 2.5, 4.0}) {
    const double tv = total_variation(evolve_distribution(x0, t, p), pi);
    if (tv > prev + 1e-10) return fail("TV to stationarity increased in t");
    prev = tv;
  }
  return pass();
}

CheckResult check_alt_law_symmetry() {
  const ModelParams p = ModelParams::make(8, 0.3);
  RngStream rng(0);
  const SpinConfig x0 = make_initial(InitialCondition::Alt, p.n, rng);
  const auto mu = evolve_distribution(x0, 0.7, p);
  const int n = p.n;
  const auto rotate_mask = [n](std::uint32_t mask, int shift) {
    return ((mask << shift) | (mask >> (n - shift))) & ((1u << n) - 1u);
  };
  const std::uint32_t full = (1u << n) - 1u;
  for (std::uint32_t mask = 0; mask < mu.probs.size(); ++mask) {
    const double here = mu.probs[mask];
    if (std::abs(here - mu.probs[rotate_mask(mask, 2)]) > 1e-10) {
      return fail("law from alt not invariant under rotation by 2");
    }
    if (std::abs(here - mu.probs[rotate_mask(mask ^ full, 1)]) > 1e-10) {
      return fail("law from alt not invariant under flip + rotation by 1");
    }
  }
  return pass();
}

CheckResult check_beta_zero_product_form() {
  const ModelParams p = ModelParams::make(8, 0.0);
  RngStream rng(0);
  const SpinConfig x0 = make_initial(InitialCondition::Alt, p.n, rng);
  const double t = 1.0;
  const DistributionVector pi = stationary_vector(p);
  const double got = total_variation(evolve_distribution(x0, t, p), pi);
  // Independent rate-1 refreshes: the law depends only on the number of sites
  // that disagree with x0, Binomial(n, q) vs Binomial(n, 1/2).
  const double q = 0.5 * (1.0 - std::exp(-t));
  const int n = p.n;
  double sum = 0.0;
  double binom = 1.0;  // C(n, k)
  for (int k = 0; k <= n; ++k) {
    const double prob = std::pow(q, k) * std::pow(1.0 - q, n - k);
    sum += binom * std::abs(prob - std::pow(0.5, n));
    binom = binom * (n - k) / (k + 1);
  }
  return expect_near(got, 0.5 * sum, 1e-8, "independent-sites TV at beta=0");
}

CheckResult check_mixing_time_edges() {
  const ModelParams p = ModelParams::make(8, 0.2);
  RngStream rng(0);
  const SpinConfig x0 = make_initial(InitialCondition::Plus, p.n, rng);
  const DistributionVector pi = stationary_vector(p);
  const double eps_loose = 1.0 - pi.probs[config_to_index(x0)] + 1e-6;
  if (exact_mixing_time(x0, std::min(0.999, eps_loose), p) != 0.0) {
    return fail("t_mix must be 0 when the start is already within eps");
  }
  const double t_quarter = exact_mixing_time(x0, 0.25, p);
  const double t_half = exact_mixing_time(x0, 0.5, p);
  if (!(t_half <= t_quarter)) return fail("t_mix not monotone in eps");
  if (!(t_quarter > 0.0)) return fail("t_mix(1/4) should be positive here");
  return pass();
}

// --- stats ---------------------------------------------------------------

CheckResult check_autocorrelation_identity(std::uint64_t seed) {
  const ModelParams p = ModelParams::make(64, 0.2);
  RngStream rng(seed, 119);
  const SpinConfig alt = make_initial(InitialCondition::Alt, p.n, rng);
  const double t = 1.0;
  RngStream dyn = rng.substream(1);
  const auto samples =
      mc_statistic_samples(StatisticKind::Autocorrelation, alt, t, p, 100'000, dyn);
  const double want = autocorrelation_l2_prediction(alt, t, p);
  const auto r = expect_near(samples.mean(), want, 3.0 * samples.std_error(),
                             "mean autocorrelation vs L2 prediction");
  if (!r.passed) return r;
  RngStream stat = rng.substream(2);
  const auto pi_samples = mc_statistic_samples_stationary(
      StatisticKind::Autocorrelation, alt, t, p, 100'000, stat);
  return expect_near(pi_samples.mean(), 0.0, 3.0 * pi_samples.std_error(),
                     "stationary mean of the autocorrelation statistic");
}

CheckResult check_hamiltonian_statistic(std::uint64_t seed) {
  RngStream rng(seed, 120);
  const ModelParams p = ModelParams::make(64, 0.3);
  const SpinConfig alt = make_initial(InitialCondition::Alt, p.n, rng);
  const SpinConfig blt = make_initial(InitialCondition::Blt, p.n, rng);
  const SpinConfig plus = make_initial(InitialCondition::Plus, p.n, rng);
  if (hamiltonian_statistic(alt) != -p.n / 4.0) return fail("R(alt) != -n/4");
  if (hamiltonian_statistic(blt) != -p.n / 4.0) return fail("R(blt) != -n/4");
  if (hamiltonian_statistic(plus) != p.n / 4.0) return fail("R(plus) != n/4");
  RngStream stat = rng.substream(1);
  const auto pi_samples = mc_statistic_samples_stationary(
      StatisticKind::Hamiltonian, plus, 0.0, p, 100'000, stat);
  const double want = (p.n / 4.0) * pair_correlation(p, 1);
  return expect_near(pi_samples.mean(), want, 3.0 * pi_samples.std_error(),
                     "stationary Hamiltonian mean vs transfer matrix");
}

CheckResult check_variance_cap(std::uint64_t seed) {
  // Frozen cap: exact small-n values put Var(R)/n near 0.25; 1.0 leaves a
  // wide margin while still enforcing the O(n) scale at fixed t.
  RngStream rng(seed, 121);
  for (const int n : {64, 256}) {
    const ModelParams p = ModelParams::make(n, 0.3);
    const SpinConfig alt = make_initial(InitialCondition::Alt, n, rng);
    RngStream dyn = rng.substream(n);
    const auto samples =
        mc_statistic_samples(StatisticKind::Hamiltonian, alt, 1.0, p, 40'000, dyn);
    const double ratio = samples.variance() / n;
    const auto r = expect_le(ratio, 1.0, "Var(hamiltonian)/n cap");
    if (!r.passed) return r;
  }
  return pass();
}

CheckResult check_two_walk_sign(std::uint64_t seed) {
  const ModelParams p = ModelParams::make(64, 0.3);
  RngStream rng(seed, 122);
  const double t = 1.0;
  RngStream r1 = rng.substream(1);
  const auto alt = two_walk_product_experiment(InitialCondition::Alt, t, p, 200'000, r1);
  const double want_alt = -std::exp(-4.0 * (1.0 - p.theta) * t);
  auto r = expect_near(alt.mean_all, want_alt, 3.0 * alt.se_all,
                       "unconditional two-walk product (alt)");
  if (!r.passed) return r;
  r = expect_le(alt.mean_no_meet, 3.0 * alt.se_no_meet,
                "conditional-on-no-meeting product mean (alt)");
  if (!r.passed) return r;
  RngStream r2 = rng.substream(2);
  const auto blt = two_walk_product_experiment(InitialCondition::Blt, t, p, 200'000, r2);
  const double want_blt = -std::exp(-2.0 * (1.0 - p.theta) * t);
  r = expect_near(blt.mean_all, want_blt, 3.0 * blt.se_all,
                  "unconditional two-walk product (blt)");
  if (!r.passed) return r;
  return expect_le(blt.mean_no_meet, 3.0 * blt.se_no_meet,
                   "conditional-on-no-meeting product mean (blt)");
}

CheckResult check_tv_lower_bound_validity(std::uint64_t seed) {
  const ModelParams p = ModelParams::make(10, 0.25);
  RngStream rng(seed, 123);
  const SpinConfig alt = make_initial(InitialCondition::Alt, p.n, rng);
  const DistributionVector pi = stationary_vector(p);
  int idx = 0;
  for (const double t : {0.5, 1.5}) {
    const double exact = total_variation(evolve_distribution(alt, t, p), pi);
    for (const auto kind :
         {StatisticKind::Autocorrelation, StatisticKind::Magnetization}) {
      RngStream dyn = rng.substream(10 * idx + 1);
      RngStream stat = rng.substream(10 * idx + 2);
      RngStream boot = rng.substream(10 * idx + 3);
      ++idx;
      const auto a = mc_statistic_samples(kind, alt, t, p, 30'000, dyn);
      const auto b = mc_statistic_samples_stationary(kind, alt, t, p, 30'000, stat);
      const auto lb = empirical_tv_lower_bound(a, b, boot);
      auto r = expect_le(lb.value, exact + 3.0 * lb.std_error,
                         "binned TV lower bound vs exact TV");
      if (!r.passed) return r;
      const auto th = threshold_tv_lower_bound(a, b);
      r = expect_le(th.value, exact + 3.0 * th.std_error,
                    "threshold TV lower bound vs exact TV");
      if (!r.passed) return r;
    }
  }
  return pass();
}

CheckResult check_tv_lower_bound_edges(std::uint64_t seed) {
  RngStream rng(seed, 124);
  StatisticSamples a, b;
  a.values.assign(5000, 0.0);
  b.values.assign(5000, 1.0);
  for (int i = 0; i < 5000; ++i) {
    a.values[i] = rng.uniform();
    b.values[i] = a.values[i];
  }
  RngStream boot1 = rng.substream(1);
  const auto same = empirical_tv_lower_bound(a, b, boot1);
  if (same.value != 0.0) return fail("identical sample lists must give bound 0");
  a.values.assign(5000, 0.0);
  b.values.assign(5000, 1.0);
  RngStream boot2 = rng.substream(2);
  const auto apart = empirical_tv_lower_bound(a, b, boot2);
  if (apart.value < 0.99) return fail("separated point masses must give bound ~1");
  return pass();
}

CheckResult check_covariance_decay(std::uint64_t seed) {
  RngStream rng(seed, 125);
  {
    const ModelParams p = ModelParams::make(32, 0.0);
    RngStream sub = rng.substream(1);
    const auto c = covariance_decay_check(p, 1.0, 3, 100'000, sub);
    const auto r = expect_near(c.value, 0.0, 3.0 * c.std_error,
                               "covariance at beta=0");
    if (!r.passed) return r;
  }
  {
    const ModelParams p = ModelParams::make(64, 0.4);
    RngStream near_rng = rng.substream(2);
    RngStream far_rng = rng.substream(3);
    const auto near = covariance_decay_check(p, 2.0, 1, 100'000, near_rng);
    const auto far = covariance_decay_check(p, 2.0, 8, 100'000, far_rng);
    if (!(std::abs(far.value) < std::abs(near.value))) {
      return fail("covariance does not decay with separation");
    }
  }
  {
    const ModelParams p = ModelParams::make(16, 0.3);
    RngStream sub = rng.substream(4);
    const auto c = covariance_decay_check(p, 0.0, 2, 200'000, sub, std::nullopt);
    const auto r = expect_near(c.value, pair_correlation(p, 2), 3.0 * c.std_error,
                               "stationary covariance vs transfer matrix");
    if (!r.passed) return r;
  }
  return pass();
}

}  // namespace

std::vector<Check> build_check_suite(const CheckOptions& options) {
  const std::uint64_t seed = options.seed;
  const std::function<double(double)> theta_fn =
      options.theta_fn ? options.theta_fn
                       : [](double beta) { return theta_of_beta(beta); };
  std::vector<Check> checks;
  const auto add = [&](const char* name, std::function<CheckResult()> fn) {
    checks.push_back({name, std::move(fn)});
  };

  add("model.theta_range_monotone", [] { return check_theta_range_monotone(); });
  add("model.gibbs_weight_symmetry", [=] { return check_gibbs_weight_symmetry(seed); });
  add("model.partition_function_enumeration", [] { return check_partition_function(); });
  add("model.pair_correlation", [] { return check_pair_correlation(); });
  add("model.gibbs_sampler_goodness_of_fit", [=] { return check_gibbs_sampler(seed); });

  add("dynamics.encoding_equivalence",
      [=] { return check_encoding_equivalence(seed, theta_fn); });
  add("dynamics.determinism", [=] { return check_determinism(seed); });
  add("dynamics.beta_zero_uniform", [=] { return check_beta_zero_uniform(seed); });
  add("dynamics.stationarity_preserved",
      [=] { return check_stationarity_preserved(seed); });
  add("dynamics.poisson_process", [=] { return check_poisson_process(seed); });

  add("histories.survival_law", [=] { return check_survival_law(seed); });
  add("histories.forward_consistency", [=] { return check_forward_consistency(seed); });
  add("histories.coalescence_monotone",
      [=] { return check_coalescence_monotone(seed); });
  add("histories.two_walker_survival", [=] { return check_two_walker_survival(seed); });
  add("histories.spread_poisson_tail", [=] { return check_spread_tail(seed); });
  add("histories.cluster_decomposition",
      [=] { return check_cluster_decomposition(seed); });

  add("semigroup.transform_roundtrip", [=] { return check_transform_roundtrip(seed); });
  add("semigroup.eigenvector_decay", [] { return check_eigenvector_decay(); });
  add("semigroup.semigroup_property", [=] { return check_semigroup_property(seed); });
  add("semigroup.mass_contraction", [=] { return check_mass_contraction(seed); });
  add("semigroup.spectral_floor", [=] { return check_spectral_floor(seed); });
  add("semigroup.predicted_constants", [] { return check_predicted_constants(); });

  add("oracle.stationary_fixed_point", [] { return check_stationary_fixed_point(); });
  add("oracle.marginal_agreement", [=] { return check_marginal_agreement(seed); });
  add("oracle.tv_monotone", [] { return check_tv_monotone(); });
  add("oracle.alt_law_symmetry", [] { return check_alt_law_symmetry(); });
  add("oracle.beta_zero_product_form", [] { return check_beta_zero_product_form(); });
  add("oracle.mixing_time_edges", [] { return check_mixing_time_edges(); });

  add("stats.autocorrelation_identity",
      [=] { return check_autocorrelation_identity(seed); });
  add("stats.hamiltonian_statistic", [=] { return check_hamiltonian_statistic(seed); });
  add("stats.variance_cap", [=] { return check_variance_cap(seed); });
  add("stats.two_walk_sign", [=] { return check_two_walk_sign(seed); });
  add("stats.tv_lower_bound_validity",
      [=] { return check_tv_lower_bound_validity(seed); });
  add("stats.tv_lower_bound_edges", [=] { return check_tv_lower_bound_edges(seed); });
  add("stats.covariance_decay", [=] { return check_covariance_decay(seed); });

  return checks;
}

CheckRunSummary run_checks(const std::vector<Check>& checks,
                           std::string_view filter, std::ostream& out) {
  CheckRunSummary summary;
  for (const Check& check : checks) {
    if (!filter.empty() && check.name.find(filter) == std::string::npos) continue;
    ++summary.ran;
    CheckResult result;
    try {
      result = check.run();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    if (result.passed) {
      out << "[PASS] " << check.name << "\n";
    } else {
      ++summary.failed;
      out << "[FAIL] " << check.name << ": " << result.detail << "\n";
    }
  }
  return summary;
}

}  // namespace glauber
