#include "glauber/histories.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "glauber/errors.hpp"

namespace glauber {

namespace {

int cycle_distance(int a, int b, int n) {
  int d = a - b;
  if (d < 0) d = -d;
  return std::min(d, n - d);
}

}  // namespace

BackwardSupportResult backward_support(std::span<const std::int32_t> vertices,
                                       double s1, double s2,
                                       const UpdateSequence& seq,
                                       const ModelParams& p) {
  if (!(0.0 <= s1 && s1 <= s2 && s2 <= seq.horizon)) {
    throw InvalidParameterError("backward_support: need 0 <= s1 <= s2 <= horizon");
  }
  const int n = p.n;
  for (const std::int32_t v : vertices) {
    if (static_cast<unsigned>(v) >= static_cast<unsigned>(n)) {
      throw InvalidParameterError("backward_support: vertex out of range");
    }
  }

  BackwardSupportResult result;
  const int walker_count = static_cast<int>(vertices.size());
  result.trajectories.resize(walker_count);

  // Walkers currently at a site form an intrusive singly-linked list.
  std::vector<std::int32_t> head(static_cast<std::size_t>(n), -1);
  std::vector<std::int32_t> next(static_cast<std::size_t>(walker_count), -1);
  std::vector<std::int32_t> position(static_cast<std::size_t>(walker_count));
  std::vector<double> open_hi(static_cast<std::size_t>(walker_count), s2);

  for (int w = 0; w < walker_count; ++w) {
    const std::int32_t v = vertices[w];
    result.trajectories[w].origin = v;
    position[w] = v;
    next[w] = head[v];
    head[v] = w;
  }

  // Events in (s1, s2], newest first.
  const auto& events = seq.events;
  const auto first = std::partition_point(
      events.begin(), events.end(),
      [&](const UpdateEvent& e) { return e.time <= s1; });
  const auto last = std::partition_point(
      first, events.end(), [&](const UpdateEvent& e) { return e.time <= s2; });

  for (auto it = last; it != first;) {
    --it;
    const UpdateEvent& e = *it;
    std::int32_t w = head[e.site];
    if (w < 0) continue;
    if (e.u <= p.theta) {
      // Oblivious refresh: every walker here dies at this event.
      while (w >= 0) {
        auto& traj = result.trajectories[w];
        traj.segments.push_back({e.time, open_hi[w], e.site});
        traj.kill_time = e.time;
        w = next[w];
      }
      head[e.site] = -1;
    } else {
      // Copy from neighbor: walkers move there, merging with any occupants.
      std::int32_t tail = -1;
      for (std::int32_t v = w; v >= 0; v = next[v]) {
        auto& traj = result.trajectories[v];
        traj.segments.push_back({e.time, open_hi[v], e.site});
        open_hi[v] = e.time;
        position[v] = e.neighbor;
        tail = v;
      }
      next[tail] = head[e.neighbor];
      head[e.neighbor] = w;
      head[e.site] = -1;
    }
  }

  for (int w = 0; w < walker_count; ++w) {
    auto& traj = result.trajectories[w];
    if (traj.kill_time.has_value()) continue;
    traj.segments.push_back({s1, open_hi[w], position[w]});
    result.support.sites.push_back(position[w]);
  }
  std::sort(result.support.sites.begin(), result.support.sites.end());
  result.support.sites.erase(
      std::unique(result.support.sites.begin(), result.support.sites.end()),
      result.support.sites.end());
  return result;
}

double survival_probability(const ModelParams& p, double dt) {
  if (dt < 0.0 || !std::isfinite(dt)) {
    throw InvalidParameterError("survival_probability: dt must be finite and >= 0");
  }
  return std::exp(-p.theta * dt);
}

int max_displacement(std::span<const HistoryTrajectory> trajectories, int n) {
  if (trajectories.empty()) {
    throw InvalidParameterError("max_displacement: empty trajectory list");
  }
  int best = 0;
  for (const auto& traj : trajectories) {
    for (const auto& seg : traj.segments) {
      best = std::max(best, cycle_distance(seg.site, traj.origin, n));
    }
  }
  return best;
}

int default_d_sep(int n) {
  const double l = std::log(static_cast<double>(n));
  return std::max(1, static_cast<int>(std::lround(l * l)));
}

int default_d_max(int n) {
  const double l = std::log(static_cast<double>(n));
  return std::max(1, static_cast<int>(std::lround(l * l * l)));
}

ClusterDecomposition cluster_decomposition(const SupportSet& support,
                                           const ModelParams& p, int d_sep,
                                           int d_max) {
  if (d_sep < 1 || d_max < 1) {
    throw InvalidParameterError("cluster_decomposition: d_sep and d_max must be >= 1");
  }
  const int n = p.n;
  ClusterDecomposition out;
  std::vector<std::int32_t> sites = support.sites;
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  if (sites.empty()) {
    out.event_a = true;
    return out;
  }
  for (const std::int32_t s : sites) {
    if (static_cast<unsigned>(s) >= static_cast<unsigned>(n)) {
      throw InvalidParameterError("cluster_decomposition: site out of range");
    }
  }

  const int m = static_cast<int>(sites.size());
  // Cut between consecutive sites (cyclically) where the gap is >= d_sep.
  std::vector<int> cut_after;  // indices i with gap(sites[i] -> sites[i+1]) >= d_sep
  for (int i = 0; i < m; ++i) {
    const int j = (i + 1) % m;
    int gap = sites[j] - sites[i];
    if (gap <= 0) gap += n;
    if (gap >= d_sep) cut_after.push_back(i);
  }

  if (cut_after.empty()) {
    // Support chains around the whole cycle; only the full cycle covers it.
    out.intervals.push_back({0, n});
    out.event_a = (n <= d_max);
    return out;
  }

  for (std::size_t c = 0; c < cut_after.size(); ++c) {
    const int start_idx = (cut_after[c] + 1) % m;
    const int end_idx = cut_after[(c + 1) % cut_after.size()];
    const std::int32_t begin = sites[start_idx];
    int length = sites[end_idx] - begin;
    if (length < 0) length += n;
    out.intervals.push_back({begin, length + 1});
  }
  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const CycleInterval& a, const CycleInterval& b) {
              return a.begin < b.begin;
            });
  out.event_a = std::all_of(out.intervals.begin(), out.intervals.end(),
                            [&](const CycleInterval& w) { return w.length <= d_max; });
  return out;
}

void attach_interval_supports(ClusterDecomposition& decomposition,
                              double t_minus, double t_star,
                              const UpdateSequence& seq, const ModelParams& p,
                              int displacement_cap) {
  decomposition.supports.clear();
  decomposition.event_b = true;
  for (const CycleInterval& w : decomposition.intervals) {
    std::vector<std::int32_t> sites(static_cast<std::size_t>(w.length));
    for (int k = 0; k < w.length; ++k) sites[k] = (w.begin + k) % p.n;
    BackwardSupportResult r = backward_support(sites, t_minus, t_star, seq, p);
    if (!r.trajectories.empty() &&
        max_displacement(r.trajectories, p.n) > displacement_cap) {
      decomposition.event_b = false;
    }
    decomposition.supports.push_back(std::move(r.support));
  }
}

void write_trajectories_csv_header(std::ostream& out) {
  out << "replica,origin,t_start,t_end,site,killed_flag\n";
}

void write_trajectories_csv(std::ostream& out,
                            std::span<const HistoryTrajectory> trajectories,
                            long replica) {
  char buf[160];
  for (const auto& traj : trajectories) {
    for (std::size_t k = 0; k < traj.segments.size(); ++k) {
      const auto& seg = traj.segments[k];
      const bool terminal = (k + 1 == traj.segments.size());
      const int killed = (terminal && traj.kill_time.has_value()) ? 1 : 0;
      std::snprintf(buf, sizeof(buf), "%ld,%d,%.17g,%.17g,%d,%d\n", replica,
                    traj.origin, seg.t_lo, seg.t_hi, seg.site, killed);
      out << buf;
    }
  }
}

}  // namespace glauber
