#pragma once

#include <limits>

#include "sidekick/instance.hpp"
#include "sidekick/simulator.hpp"

namespace sidekick {

// Moves must shorten the tour by more than this to be accepted.
inline constexpr double improvement_epsilon = 1e-9;

double tour_length(const Tour& tour, const TravelMatrices& mats);

inline constexpr int unlimited_moves = std::numeric_limits<int>::max();

// Best-improvement 2-opt to a fixed point (or until `max_moves` reversals).
Tour two_opt(const Tour& tour, const TravelMatrices& mats, int max_moves = unlimited_moves);

// Best-improvement 3-opt over all seven reconnections of each edge triple.
Tour three_opt(const Tour& tour, const TravelMatrices& mats);

// Best-improvement relocation of chains of 1..3 customers, either orientation.
Tour or_opt(const Tour& tour, const TravelMatrices& mats);

struct LocalSearchOptions {
  bool use_three_opt = false;
};

// Alternates 2-opt, Or-opt (and optionally 3-opt) until none changes the tour.
Tour local_search(const Tour& tour, const TravelMatrices& mats,
                  const LocalSearchOptions& options = {});

} // namespace sidekick
