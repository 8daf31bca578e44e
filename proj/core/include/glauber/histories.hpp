#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "glauber/dynamics.hpp"
#include "glauber/model.hpp"

namespace glauber {

// Constant-position stretch of a backward history: the walker sits at `site`
// during (t_lo, t_hi].
struct TrajectorySegment {
  double t_lo;
  double t_hi;
  std::int32_t site;
};

// Backward history of one vertex: a nearest-neighbor walk at rate 1 - theta,
// killed at rate theta.  Segments are reverse chronological (from s2 down to
// kill_time or s1).  Killed walkers are retained -- tests need both
// populations.
struct HistoryTrajectory {
  std::int32_t origin;
  std::vector<TrajectorySegment> segments;
  std::optional<double> kill_time;  // empty: survived down to s1

  bool survived() const { return !kill_time.has_value(); }
};

// Positions of the surviving walkers at the lower end of a backward sweep.
struct SupportSet {
  std::vector<std::int32_t> sites;  // sorted, distinct

  bool empty() const { return sites.empty(); }
  int size() const { return static_cast<int>(sites.size()); }
};

struct BackwardSupportResult {
  SupportSet support;
  std::vector<HistoryTrajectory> trajectories;  // one per queried vertex
};

// Runs the coalescing killed walks of all queried vertices through one
// reverse sweep of the events in (s1, s2].  A walker at the event's site dies
// if u <= theta, otherwise moves to the event's neighbor; walkers sharing a
// site move together from then on.
BackwardSupportResult backward_support(std::span<const std::int32_t> vertices,
                                       double s1, double s2,
                                       const UpdateSequence& seq,
                                       const ModelParams& p);

// P(single history spans a backward window of length dt) = e^{-theta dt}.
double survival_probability(const ModelParams& p, double dt);

// Max cycle distance from origin reached by any trajectory while alive.
int max_displacement(std::span<const HistoryTrajectory> trajectories, int n);

// Cyclic interval of sites begin, begin+1, ..., begin+length-1 (mod n).
struct CycleInterval {
  std::int32_t begin;
  std::int32_t length;
};

// Cover of a support by well-separated intervals.  event_a holds iff every
// interval has length <= d_max (gaps >= d_sep hold by construction).
// supports/event_b are filled by attach_interval_supports.
struct ClusterDecomposition {
  std::vector<CycleInterval> intervals;
  std::vector<SupportSet> supports;
  bool event_a = false;
  bool event_b = false;
};

// Merges support sites into maximal cyclic intervals whose consecutive-site
// gaps are < d_sep (connected components at the gap threshold); canonical:
// intervals sorted by begin.  If every circular gap is < d_sep the cover is
// the whole cycle.
ClusterDecomposition cluster_decomposition(const SupportSet& support,
                                           const ModelParams& p, int d_sep,
                                           int d_max);

int default_d_sep(int n);  // round(log^2 n)
int default_d_max(int n);  // round(log^3 n)

// Fills decomposition.supports with the backward support of each interval
// over (t_minus, t_star] and sets event_b iff no trajectory strays further
// than displacement_cap from its origin.
void attach_interval_supports(ClusterDecomposition& decomposition,
                              double t_minus, double t_star,
                              const UpdateSequence& seq, const ModelParams& p,
                              int displacement_cap);

// CSV rows (replica, origin, t_start, t_end, site, killed_flag); killed_flag
// marks the terminal segment of a killed history.
void write_trajectories_csv(std::ostream& out,
                            std::span<const HistoryTrajectory> trajectories,
                            long replica);
void write_trajectories_csv_header(std::ostream& out);

}  // namespace glauber
