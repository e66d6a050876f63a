#pragma once

#include <optional>

#include "sidekick/instance.hpp"
#include "sidekick/rng.hpp"
#include "sidekick/simulator.hpp"

namespace sidekick {

// The {2-opt, relocate} neighbourhood shared by the tour metaheuristics.
//
// two_opt (i, j):  reverse tour[i+1..j], 0 <= i, i + 2 <= j <= size - 2.
// relocate (i, j): move the customer at position i so that it follows the
//                  stop currently at position j (j != i, j != i - 1).
enum class MoveKind { two_opt, relocate };

struct TourMove {
  MoveKind kind = MoveKind::two_opt;
  std::size_t i = 0;
  std::size_t j = 0;

  friend bool operator==(const TourMove&, const TourMove&) = default;
};

bool move_valid(const Tour& tour, const TourMove& move);

// Change in tour length caused by applying `move`.
double move_delta(const Tour& tour, const TourMove& move, const TravelMatrices& mats);

void apply_move(Tour& tour, const TourMove& move);

// Uniform over kind, then uniform over valid positions. Nullopt if the tour
// is too short for either kind.
std::optional<TourMove> random_move(const Tour& tour, Rng& rng);

// Visits every valid move, two_opt before relocate, each in (i, j) order.
template <class F>
void for_each_move(const Tour& tour, F&& visit) {
  const std::size_t last = tour.size() - 1;
  for (std::size_t i = 0; i + 2 < last; ++i) {
    for (std::size_t j = i + 2; j < last; ++j) {
      visit(TourMove{MoveKind::two_opt, i, j});
    }
  }
  for (std::size_t i = 1; i < last; ++i) {
    for (std::size_t j = 0; j < last; ++j) {
      if (j != i && j + 1 != i) {
        visit(TourMove{MoveKind::relocate, i, j});
      }
    }
  }
}

} // namespace sidekick
