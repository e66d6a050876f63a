#pragma once

#include <vector>

#include "sidekick/instance.hpp"
#include "sidekick/rng.hpp"
#include "sidekick/simulator.hpp"

namespace sidekick {

// Partial schedule built edge by edge along a truck tour.
//
// `tour` is the truck tour with every drone-served customer removed so far;
// the truck stands at tour[cursor] at time `clock` (all upstream waits
// included). `tour` together with `sorties` is always a valid Solution in
// which the remainder is driven truck-only.
struct ScheduleState {
  Tour tour;
  std::size_t cursor = 0;
  std::vector<Sortie> sorties;
  double clock = 0.0;
  double drone_ready = 0.0;
  double truck_travel = 0.0;
  double total_wait = 0.0;

  bool done() const { return cursor + 1 >= tour.size(); }
  NodeId position_node() const { return tour[cursor]; }
  Solution solution() const { return {tour, sorties}; }

  // Committed prefix plus truck-only completion of the remaining stops.
  double bound(const TravelMatrices& mats) const;
};

ScheduleState initial_state(const Tour& tour);

// Sorties launching at tour[position]: every customer k still ahead of the
// truck, rendezvousing at the stop that follows tour[position] once k is
// removed, filtered by endurance. Ordered by k's position in the tour.
std::vector<Sortie> candidate_sorties(const Tour& tour, std::size_t position,
                                      const TravelMatrices& mats, const Instance& inst);

inline std::vector<Sortie> candidate_sorties(const ScheduleState& state, const TravelMatrices& mats,
                                             const Instance& inst) {
  return candidate_sorties(state.tour, state.cursor, mats, inst);
}

// Moves the truck across the next edge, optionally flying `sortie` (which
// must come from candidate_sorties(state)).
ScheduleState advance(const ScheduleState& state, const Sortie* sortie, const TravelMatrices& mats,
                      const Instance& inst);

// Ordering used for deterministic tie-breaking between schedules.
bool schedule_less(double makespan_a, const std::vector<Sortie>& a, double makespan_b,
                   const std::vector<Sortie>& b);

// At each edge, flies the candidate whose tentative solution (re-simulated
// in full) has the smallest makespan, if that beats flying nothing.
Solution greedy_assign(const Tour& tour, const TravelMatrices& mats, const Instance& inst);

// Continues greedily from `state`, never choosing a sortie in `banned`.
Solution greedy_complete(ScheduleState state, const std::vector<Sortie>& banned,
                         const TravelMatrices& mats, const Instance& inst);

// Keeps the `width` best partial schedules per edge layer by bound(); the
// final pick is the completed schedule with the lowest simulated makespan.
Solution beam_schedule(const Tour& tour, const TravelMatrices& mats, const Instance& inst,
                       std::size_t width);

struct AssignmentVNSParams {
  int iterations = 50;
  int k_max = 3;
};

// Shake: drop k random sorties (plus every later one), put their customers
// back on the truck, and re-run the greedy from the earliest dropped launch
// with the dropped triplets banned. Improvements only.
Solution assignment_vns(const Solution& sol, const TravelMatrices& mats, const Instance& inst,
                        const AssignmentVNSParams& params, Rng& rng);

} // namespace sidekick
