#include "glauber/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "glauber/dynamics.hpp"
#include "glauber/errors.hpp"
#include "glauber/oracle.hpp"
#include "glauber/parallel.hpp"
#include "glauber/semigroup.hpp"

namespace glauber {

const char* to_string(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::Autocorrelation: return "autocorrelation";
    case StatisticKind::Hamiltonian: return "hamiltonian";
    case StatisticKind::Magnetization: return "magnetization";
  }
  return "?";
}

double StatisticSamples::mean() const {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (const double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double StatisticSamples::variance() const {
  if (values.size() < 2) return 0.0;
  const double m = mean();
  double s = 0.0;
  for (const double v : values) s += (v - m) * (v - m);
  return s / static_cast<double>(values.size() - 1);
}

double StatisticSamples::std_error() const {
  if (values.empty()) return 0.0;
  return std::sqrt(variance() / static_cast<double>(values.size()));
}

double autocorrelation_statistic(const SpinConfig& x, std::span<const double> profile) {
  if (x.size() != profile.size()) {
    throw InvalidParameterError("autocorrelation_statistic: shape mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * profile[i];
  return s;
}

double autocorrelation_statistic(const SpinConfig& x, const SpinConfig& x0,
                                 double t, const ModelParams& p) {
  const std::vector<double> profile = conditional_magnetization(x0, t, p);
  return autocorrelation_statistic(x, profile);
}

double hamiltonian_statistic(const SpinConfig& x) {
  const int n = static_cast<int>(x.size());
  if (n % 4 != 0) {
    throw InvalidParameterError("hamiltonian_statistic: n must be a multiple of 4");
  }
  int s = 0;
  for (int i = 0; i < n / 4; ++i) s += x[4 * i] * x[4 * i + 1];
  return static_cast<double>(s);
}

double magnetization_statistic(const SpinConfig& x) {
  int s = 0;
  for (const Spin v : x) s += v;
  return static_cast<double>(s);
}

namespace {

double eval_statistic(StatisticKind kind, const SpinConfig& x,
                      std::span<const double> profile) {
  switch (kind) {
    case StatisticKind::Autocorrelation: return autocorrelation_statistic(x, profile);
    case StatisticKind::Hamiltonian: return hamiltonian_statistic(x);
    case StatisticKind::Magnetization: return magnetization_statistic(x);
  }
  throw InvalidParameterError("unknown statistic");
}

// Shared replica engine.  annealed: fresh uniform start per replica
// (quenched x0 otherwise); stationary: exact Gibbs samples, no dynamics.
std::vector<std::vector<double>> run_replicas(std::span<const StatisticKind> kinds,
                                              const SpinConfig& x0, bool annealed,
                                              bool stationary, double t,
                                              const ModelParams& p, int replicas,
                                              RngStream& rng) {
  if (replicas < 1) {
    throw InvalidParameterError("statistic sampling requires replicas >= 1");
  }
  if (t < 0.0 || !std::isfinite(t)) {
    throw InvalidParameterError("statistic sampling: t must be finite and >= 0");
  }
  const bool need_profile =
      std::any_of(kinds.begin(), kinds.end(), [](StatisticKind k) {
        return k == StatisticKind::Autocorrelation;
      });
  std::vector<double> profile;
  if (need_profile) profile = conditional_magnetization(x0, t, p);

  std::vector<std::vector<double>> values(kinds.size());
  for (auto& v : values) v.resize(static_cast<std::size_t>(replicas));

  const GibbsSampler sampler(p);
  parallel_for_chunks(0, replicas, [&](std::int64_t lo, std::int64_t hi) {
    UpdateSequence seq;
    SpinConfig x;
    for (std::int64_t r = lo; r < hi; ++r) {
      RngStream sub = rng.substream(static_cast<std::uint64_t>(r));
      if (stationary) {
        sampler.sample_into(x, sub);
      } else {
        x = annealed ? make_initial(InitialCondition::Annealed, p.n, sub) : x0;
        if (t > 0.0) {
          sample_update_sequence_into(seq, p, t, sub);
          evolve_voter_inplace(x, seq, p, 0.0, t);
        }
      }
      for (std::size_t k = 0; k < kinds.size(); ++k) {
        values[k][r] = eval_statistic(kinds[k], x, profile);
      }
    }
  });
  return values;
}

}  // namespace

StatisticSamples mc_statistic_samples(StatisticKind kind, const SpinConfig& x0,
                                      double t, const ModelParams& p,
                                      int replicas, RngStream& rng) {
  validate_config(x0, p);
  const StatisticKind kinds[1] = {kind};
  auto values = run_replicas(kinds, x0, /*annealed=*/false, /*stationary=*/false,
                             t, p, replicas, rng);
  StatisticSamples out;
  out.statistic = kind;
  out.source = {SampleSource::Dynamics, InitialCondition::Plus, t};
  out.values = std::move(values[0]);
  return out;
}

StatisticSamples mc_statistic_samples_stationary(StatisticKind kind,
                                                 const SpinConfig& x0, double t,
                                                 const ModelParams& p,
                                                 int replicas, RngStream& rng) {
  validate_config(x0, p);
  const StatisticKind kinds[1] = {kind};
  auto values = run_replicas(kinds, x0, /*annealed=*/false, /*stationary=*/true,
                             t, p, replicas, rng);
  StatisticSamples out;
  out.statistic = kind;
  out.source = {SampleSource::Stationary, InitialCondition::Plus, t};
  out.values = std::move(values[0]);
  return out;
}

namespace {

struct SharedBinning {
  double lo = 0.0;
  double width = 1.0;
  int bins = 1;

  int index(double v) const {
    const int b = static_cast<int>((v - lo) / width);
    return std::clamp(b, 0, bins - 1);
  }
};

SharedBinning choose_binning(const std::vector<double>& a,
                             const std::vector<double>& b) {
  std::vector<double> pooled;
  pooled.reserve(a.size() + b.size());
  pooled.insert(pooled.end(), a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  const double lo = pooled.front();
  const double hi = pooled.back();
  SharedBinning bin;
  bin.lo = lo;
  if (hi <= lo) {
    bin.width = 1.0;
    bin.bins = 1;
    return bin;
  }
  const std::size_t m = pooled.size();
  const double q1 = pooled[m / 4];
  const double q3 = pooled[(3 * m) / 4];
  double h = 2.0 * (q3 - q1) * std::pow(static_cast<double>(m), -1.0 / 3.0);
  if (!(h > 0.0)) h = (hi - lo) / 64.0;  // degenerate IQR
  int bins = static_cast<int>(std::ceil((hi - lo) / h));
  bins = std::clamp(bins, 1, 128);
  bin.bins = bins;
  bin.width = (hi - lo) / bins;
  // Guard against the max landing in a phantom extra bin.
  if (bin.width <= 0.0) bin.width = 1.0;
  return bin;
}

std::vector<std::int64_t> histogram(const std::vector<double>& v,
                                    const SharedBinning& bin) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(bin.bins), 0);
  for (const double x : v) counts[bin.index(x)]++;
  return counts;
}

double binned_tv(std::span<const std::int64_t> ca, double ma,
                 std::span<const std::int64_t> cb, double mb) {
  double s = 0.0;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    s += std::abs(static_cast<double>(ca[i]) / ma - static_cast<double>(cb[i]) / mb);
  }
  return 0.5 * s;
}

}  // namespace

TvLowerBound empirical_tv_lower_bound(const StatisticSamples& a,
                                      const StatisticSamples& b, RngStream& rng,
                                      int bootstrap_resamples) {
  if (a.values.empty() || b.values.empty()) {
    throw InvalidParameterError("empirical_tv_lower_bound: empty sample set");
  }
  bootstrap_resamples = std::max(bootstrap_resamples, 200);

  const SharedBinning bin = choose_binning(a.values, b.values);
  const auto ca = histogram(a.values, bin);
  const auto cb = histogram(b.values, bin);
  const double ma = static_cast<double>(a.values.size());
  const double mb = static_cast<double>(b.values.size());
  const double plugin = binned_tv(ca, ma, cb, mb);

  auto& eng = rng.engine();

  // Plug-in TV under the pooled null: re-split every bin binomially with the
  // group proportions; its mean estimates the finite-sample bias at TV = 0.
  const double frac_a = ma / (ma + mb);
  double null_sum = 0.0;
  int null_reps = 0;
  std::vector<std::int64_t> na(ca.size()), nb(ca.size());
  for (int rep = 0; rep < bootstrap_resamples; ++rep) {
    std::int64_t tot_a = 0, tot_b = 0;
    for (std::size_t i = 0; i < ca.size(); ++i) {
      const std::int64_t pooled = ca[i] + cb[i];
      std::int64_t xa = 0;
      if (pooled > 0) {
        std::binomial_distribution<std::int64_t> dist(pooled, frac_a);
        xa = dist(eng);
      }
      na[i] = xa;
      nb[i] = pooled - xa;
      tot_a += xa;
      tot_b += pooled - xa;
    }
    if (tot_a == 0 || tot_b == 0) continue;
    null_sum += binned_tv(na, static_cast<double>(tot_a), nb, static_cast<double>(tot_b));
    ++null_reps;
  }
  const double null_bias = null_reps > 0 ? null_sum / null_reps : 0.0;

  // Bootstrap spread of the plug-in statistic (multinomial resampling of each
  // side's histogram).
  double boot_sum = 0.0, boot_sq = 0.0;
  const auto resample = [&](std::span<const std::int64_t> counts, double total,
                            std::vector<std::int64_t>& out) {
    std::int64_t remaining = static_cast<std::int64_t>(total);
    double mass = 1.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const double pi = static_cast<double>(counts[i]) / total;
      std::int64_t draw = 0;
      if (remaining > 0 && mass > 0.0) {
        const double q = std::clamp(pi / mass, 0.0, 1.0);
        std::binomial_distribution<std::int64_t> dist(remaining, q);
        draw = dist(eng);
      }
      out[i] = draw;
      remaining -= draw;
      mass -= static_cast<double>(counts[i]) / total;
    }
    if (remaining > 0) out.back() += remaining;
  };
  for (int rep = 0; rep < bootstrap_resamples; ++rep) {
    resample(ca, ma, na);
    resample(cb, mb, nb);
    const double tv = binned_tv(na, ma, nb, mb);
    boot_sum += tv;
    boot_sq += tv * tv;
  }
  const double k = static_cast<double>(bootstrap_resamples);
  const double boot_mean = boot_sum / k;
  const double boot_var = std::max(0.0, boot_sq / k - boot_mean * boot_mean);

  TvLowerBound out;
  out.value = std::clamp(plugin - null_bias, 0.0, 1.0);
  out.std_error = std::sqrt(boot_var);
  return out;
}

TvLowerBound threshold_tv_lower_bound(const StatisticSamples& a,
                                      const StatisticSamples& b) {
  if (a.values.empty() || b.values.empty()) {
    throw InvalidParameterError("threshold_tv_lower_bound: empty sample set");
  }
  const double c = 0.5 * (a.mean() + b.mean());
  const auto tail_frac = [c](const std::vector<double>& v) {
    std::size_t k = 0;
    for (const double x : v) k += (x >= c) ? 1 : 0;
    return static_cast<double>(k) / static_cast<double>(v.size());
  };
  const double pa = tail_frac(a.values);
  const double pb = tail_frac(b.values);
  TvLowerBound out;
  out.value = std::abs(pa - pb);
  out.std_error = std::sqrt(pa * (1.0 - pa) / a.values.size() +
                            pb * (1.0 - pb) / b.values.size());
  return out;
}

MixingCurve mixing_curve(InitialCondition kind, const ModelParams& p,
                         std::span<const double> times, int replicas,
                         RngStream& rng, int exact_n_max) {
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    if (!(times[i] < times[i + 1])) {
      throw InvalidParameterError("mixing_curve: times must be strictly increasing");
    }
  }
  if (!times.empty() && times.front() < 0.0) {
    throw InvalidParameterError("mixing_curve: times must be >= 0");
  }

  std::vector<StatisticKind> kinds;
  if (kind != InitialCondition::Annealed) kinds.push_back(StatisticKind::Autocorrelation);
  if (p.n % 4 == 0) kinds.push_back(StatisticKind::Hamiltonian);
  kinds.push_back(StatisticKind::Magnetization);

  const bool annealed = (kind == InitialCondition::Annealed);
  RngStream init_rng = rng.substream(0xa11);
  const SpinConfig x0 =
      annealed ? SpinConfig(static_cast<std::size_t>(p.n), Spin{1})
               : make_initial(kind, p.n, init_rng);

  const bool exact = (p.n <= exact_n_max);
  DistributionVector mu0, pi;
  if (exact) {
    mu0 = annealed ? uniform_vector(p, exact_n_max) : point_mass(x0, p, exact_n_max);
    pi = stationary_vector(p, exact_n_max);
  }

  MixingCurve curve;
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    const double t = times[ti];
    RngStream dyn_rng = rng.substream(3 * ti + 1);
    RngStream stat_rng = rng.substream(3 * ti + 2);
    RngStream tv_rng = rng.substream(3 * ti + 3);

    auto dyn_values = run_replicas(kinds, x0, annealed, /*stationary=*/false, t,
                                   p, replicas, dyn_rng);
    auto stat_values = run_replicas(kinds, x0, /*annealed=*/false,
                                    /*stationary=*/true, t, p, replicas, stat_rng);

    TvLowerBound best;
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      StatisticSamples sa{kinds[k], {SampleSource::Dynamics, kind, t},
                          std::move(dyn_values[k])};
      StatisticSamples sb{kinds[k], {SampleSource::Stationary, kind, t},
                          std::move(stat_values[k])};
      RngStream kr = tv_rng.substream(k);
      const TvLowerBound lb = empirical_tv_lower_bound(sa, sb, kr);
      if (k == 0 || lb.value > best.value) best = lb;
    }

    curve.times.push_back(t);
    curve.tv_lower_bounds.push_back(best.value);
    curve.std_errors.push_back(best.std_error);
    if (exact) {
      curve.exact_tv.push_back(total_variation(evolve_distribution(mu0, t, p), pi));
    }
  }
  return curve;
}

CovarianceEstimate covariance_decay_check(const ModelParams& p, double t,
                                          int separation, int replicas,
                                          RngStream& rng,
                                          std::optional<InitialCondition> start) {
  if (separation < 1 || separation >= p.n) {
    throw InvalidParameterError("covariance_decay_check: separation must be in [1, n-1]");
  }
  if (replicas < 2) {
    throw InvalidParameterError("covariance_decay_check: need replicas >= 2");
  }
  std::vector<double> a(static_cast<std::size_t>(replicas));
  std::vector<double> b(static_cast<std::size_t>(replicas));
  const GibbsSampler sampler(p);
  const bool stationary = !start.has_value();
  SpinConfig x0;
  bool annealed = false;
  if (!stationary) {
    annealed = (*start == InitialCondition::Annealed);
    RngStream init_rng = rng.substream(0xa11);
    x0 = annealed ? SpinConfig() : make_initial(*start, p.n, init_rng);
  }
  parallel_for_chunks(0, replicas, [&](std::int64_t lo, std::int64_t hi) {
    UpdateSequence seq;
    SpinConfig x;
    for (std::int64_t r = lo; r < hi; ++r) {
      RngStream sub = rng.substream(static_cast<std::uint64_t>(r));
      if (stationary) {
        sampler.sample_into(x, sub);
      } else {
        x = annealed ? make_initial(InitialCondition::Annealed, p.n, sub) : x0;
        if (t > 0.0) {
          sample_update_sequence_into(seq, p, t, sub);
          evolve_voter_inplace(x, seq, p, 0.0, t);
        }
      }
      a[r] = x[0];
      b[r] = x[separation];
    }
  });
  double mean_a = 0.0, mean_b = 0.0;
  for (int r = 0; r < replicas; ++r) {
    mean_a += a[r];
    mean_b += b[r];
  }
  mean_a /= replicas;
  mean_b /= replicas;
  double cov = 0.0, var_prod = 0.0;
  for (int r = 0; r < replicas; ++r) {
    const double d = (a[r] - mean_a) * (b[r] - mean_b);
    cov += d;
    var_prod += d * d;
  }
  cov /= (replicas - 1);
  var_prod = var_prod / (replicas - 1) - cov * cov * (replicas - 1) / replicas;
  CovarianceEstimate out;
  out.value = cov;
  out.std_error = std::sqrt(std::max(0.0, var_prod) / replicas);
  return out;
}

TwoWalkProductResult two_walk_product_experiment(InitialCondition kind, double t,
                                                 const ModelParams& p,
                                                 int replicas, RngStream& rng) {
  if (kind != InitialCondition::Alt && kind != InitialCondition::Blt) {
    throw InvalidParameterError("two_walk_product_experiment: kind must be alt or blt");
  }
  if (replicas < 2) {
    throw InvalidParameterError("two_walk_product_experiment: need replicas >= 2");
  }
  RngStream init_rng = rng.substream(0xa11);
  const SpinConfig x0 = make_initial(kind, p.n, init_rng);
  const double rate = 2.0 * (1.0 - p.theta);  // both walks combined
  const int n = p.n;

  std::vector<double> product(static_cast<std::size_t>(replicas));
  std::vector<std::uint8_t> met(static_cast<std::size_t>(replicas));
  parallel_for_chunks(0, replicas, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t r = lo; r < hi; ++r) {
      RngStream sub = rng.substream(static_cast<std::uint64_t>(r));
      int z1 = 0, z2 = 1;
      bool seen = false;
      if (rate > 0.0) {
        double tau = 0.0;
        for (;;) {
          tau += sub.exponential(rate);
          if (tau > t) break;
          int& z = sub.coin() ? z1 : z2;
          z += sub.coin() ? 1 : -1;
          if (z == n) z = 0;
          if (z < 0) z = n - 1;
          if (z1 == z2) seen = true;
        }
      }
      product[r] = static_cast<double>(x0[z1] * x0[z2]);
      met[r] = seen ? 1 : 0;
    }
  });

  TwoWalkProductResult out;
  double sum_all = 0.0, sq_all = 0.0, sum_nm = 0.0, sq_nm = 0.0;
  std::int64_t count_nm = 0;
  for (int r = 0; r < replicas; ++r) {
    sum_all += product[r];
    sq_all += product[r] * product[r];
    if (!met[r]) {
      sum_nm += product[r];
      sq_nm += product[r] * product[r];
      ++count_nm;
    }
  }
  out.mean_all = sum_all / replicas;
  const double var_all =
      std::max(0.0, sq_all / replicas - out.mean_all * out.mean_all);
  out.se_all = std::sqrt(var_all / replicas);
  out.no_meet_fraction = static_cast<double>(count_nm) / replicas;
  if (count_nm > 1) {
    out.mean_no_meet = sum_nm / count_nm;
    const double var_nm =
        std::max(0.0, sq_nm / count_nm - out.mean_no_meet * out.mean_no_meet);
    out.se_no_meet = std::sqrt(var_nm / count_nm);
  }
  return out;
}

void write_mixing_curve_csv(std::ostream& out, const MixingCurve& curve) {
  const bool exact = !curve.exact_tv.empty();
  out << (exact ? "t,tv_lower,stderr,exact_tv\n" : "t,tv_lower,stderr\n");
  char buf[200];
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    if (exact) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", curve.times[i],
                    curve.tv_lower_bounds[i], curve.std_errors[i], curve.exact_tv[i]);
    } else {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", curve.times[i],
                    curve.tv_lower_bounds[i], curve.std_errors[i]);
    }
    out << buf;
  }
}

}  // namespace glauber
