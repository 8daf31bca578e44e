#pragma once

#include <cstdint>
#include <vector>

#include "glauber/model.hpp"
#include "glauber/rng.hpp"

namespace glauber {

// One clock ring: the site whose spin is refreshed, the uniformly chosen
// cycle neighbor, and the unit variable driving the update.
struct UpdateEvent {
  double time;
  std::int32_t site;
  std::int32_t neighbor;
  double u;
};

// Time-ordered events of a rate-n Poisson process on (0, horizon].  Immutable
// after creation; the same object feeds forward evolution and backward
// support extraction.
struct UpdateSequence {
  std::vector<UpdateEvent> events;
  double horizon = 0.0;
};

UpdateSequence sample_update_sequence(const ModelParams& p, double horizon,
                                      RngStream& rng);

// Reuses the event buffer; for tight replica loops.
void sample_update_sequence_into(UpdateSequence& seq, const ModelParams& p,
                                 double horizon, RngStream& rng);

// Heat-bath probability of refreshing to +1 given the neighbor spin sum
// s in {-2, 0, 2}: e^{beta s} / (e^{beta s} + e^{-beta s}).
double heat_bath_plus_probability(int neighbor_sum, const ModelParams& p);

// Voter-style update rule: u <= theta refreshes the spin obliviously
// (+1 iff u <= theta/2), otherwise the spin is copied from the chosen
// neighbor.  The single unit variable makes the sequence a complete
// coupling object shared by the forward and backward views.
SpinConfig evolve_voter(SpinConfig x0, const UpdateSequence& seq,
                        const ModelParams& p);

// Reference heat-bath rule on the same events: refresh to +1 iff
// u < heat_bath_plus_probability(current neighbor sum).  Same single-update
// law as evolve_voter, different coupling.
SpinConfig evolve_heat_bath(SpinConfig x0, const UpdateSequence& seq,
                            const ModelParams& p);

// Apply only the events with time in (t_from, t_to].
void evolve_voter_inplace(SpinConfig& x, const UpdateSequence& seq,
                          const ModelParams& p, double t_from, double t_to);
void evolve_heat_bath_inplace(SpinConfig& x, const UpdateSequence& seq,
                              const ModelParams& p, double t_from, double t_to);

}  // namespace glauber
