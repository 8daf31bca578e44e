#include "glauber/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "glauber/errors.hpp"

namespace glauber {

namespace {

// Iterator range of events with time in (t_from, t_to].
std::pair<const UpdateEvent*, const UpdateEvent*> event_window(
    const UpdateSequence& seq, double t_from, double t_to) {
  if (t_from > t_to) {
    throw InvalidParameterError("event window: t_from must be <= t_to");
  }
  const auto by_time = [](const UpdateEvent& e, double t) { return e.time <= t; };
  const UpdateEvent* begin = seq.events.data();
  const UpdateEvent* end = begin + seq.events.size();
  const UpdateEvent* lo = std::partition_point(
      begin, end, [&](const UpdateEvent& e) { return by_time(e, t_from); });
  const UpdateEvent* hi = std::partition_point(
      lo, end, [&](const UpdateEvent& e) { return by_time(e, t_to); });
  return {lo, hi};
}

void check_event(const UpdateEvent& e, int n) {
  if (static_cast<unsigned>(e.site) >= static_cast<unsigned>(n) ||
      static_cast<unsigned>(e.neighbor) >= static_cast<unsigned>(n)) {
    throw InvalidParameterError("update sequence does not match model size n = " +
                                std::to_string(n));
  }
}

}  // namespace

void sample_update_sequence_into(UpdateSequence& seq, const ModelParams& p,
                                 double horizon, RngStream& rng) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidParameterError("sample_update_sequence: horizon must be positive");
  }
  seq.events.clear();
  seq.horizon = horizon;
  const int n = p.n;
  const double rate = static_cast<double>(n);
  double t = 0.0;
  for (;;) {
    t += rng.exponential(rate);
    if (t > horizon) break;
    if (!seq.events.empty() && t == seq.events.back().time) continue;  // tie: redraw gap
    UpdateEvent e;
    e.time = t;
    e.site = rng.uniform_int(n);
    const int step = rng.coin() ? 1 : -1;
    int nb = e.site + step;
    if (nb == n) nb = 0;
    if (nb < 0) nb = n - 1;
    e.neighbor = nb;
    e.u = rng.uniform();
    seq.events.push_back(e);
  }
}

UpdateSequence sample_update_sequence(const ModelParams& p, double horizon,
                                      RngStream& rng) {
  UpdateSequence seq;
  sample_update_sequence_into(seq, p, horizon, rng);
  return seq;
}

double heat_bath_plus_probability(int neighbor_sum, const ModelParams& p) {
  if (neighbor_sum != -2 && neighbor_sum != 0 && neighbor_sum != 2) {
    throw InvalidParameterError("heat_bath_plus_probability: neighbor sum must be -2, 0, or 2");
  }
  const double a = p.beta * neighbor_sum;
  if (a > 350.0) return 1.0;
  if (a < -350.0) return 0.0;
  const double ep = std::exp(a);
  const double em = std::exp(-a);
  return ep / (ep + em);
}

void evolve_voter_inplace(SpinConfig& x, const UpdateSequence& seq,
                          const ModelParams& p, double t_from, double t_to) {
  validate_config(x, p);
  const auto [lo, hi] = event_window(seq, t_from, t_to);
  const double theta = p.theta;
  const double half_theta = 0.5 * theta;
  const int n = p.n;
  for (const UpdateEvent* e = lo; e != hi; ++e) {
    check_event(*e, n);
    if (e->u <= theta) {
      x[e->site] = (e->u <= half_theta) ? Spin{1} : Spin{-1};
    } else {
      x[e->site] = x[e->neighbor];
    }
  }
}

void evolve_heat_bath_inplace(SpinConfig& x, const UpdateSequence& seq,
                              const ModelParams& p, double t_from, double t_to) {
  validate_config(x, p);
  const auto [lo, hi] = event_window(seq, t_from, t_to);
  const int n = p.n;
  // plus-probability indexed by (neighbor_sum + 2) / 2
  const double plus_prob[3] = {heat_bath_plus_probability(-2, p),
                               heat_bath_plus_probability(0, p),
                               heat_bath_plus_probability(2, p)};
  for (const UpdateEvent* e = lo; e != hi; ++e) {
    check_event(*e, n);
    const int site = e->site;
    const int left = (site == 0) ? n - 1 : site - 1;
    const int right = (site == n - 1) ? 0 : site + 1;
    const int sum = x[left] + x[right];
    x[site] = (e->u < plus_prob[(sum + 2) / 2]) ? Spin{1} : Spin{-1};
  }
}

SpinConfig evolve_voter(SpinConfig x0, const UpdateSequence& seq,
                        const ModelParams& p) {
  evolve_voter_inplace(x0, seq, p, 0.0, seq.horizon);
  return x0;
}

SpinConfig evolve_heat_bath(SpinConfig x0, const UpdateSequence& seq,
                            const ModelParams& p) {
  evolve_heat_bath_inplace(x0, seq, p, 0.0, seq.horizon);
  return x0;
}

}  // namespace glauber
