#include "sidekick/moves.hpp"

#include <algorithm>

namespace sidekick {

bool move_valid(const Tour& tour, const TourMove& m) {
  if (tour.size() < 3) {
    return false;
  }
  const std::size_t last = tour.size() - 1;
  if (m.kind == MoveKind::two_opt) {
    return m.i + 2 <= m.j && m.j < last;
  }
  return m.i >= 1 && m.i < last && m.j < last && m.j != m.i && m.j + 1 != m.i;
}

double move_delta(const Tour& t, const TourMove& m, const TravelMatrices& mats) {
  if (m.kind == MoveKind::two_opt) {
    const NodeId a = t[m.i], b = t[m.i + 1], c = t[m.j], d = t[m.j + 1];
    return mats.distance(a, c) + mats.distance(b, d) - mats.distance(a, b) - mats.distance(c, d);
  }
  const NodeId prev = t[m.i - 1], x = t[m.i], next = t[m.i + 1];
  const NodeId a = t[m.j], b = t[m.j + 1];
  const double removal = mats.distance(prev, next) - mats.distance(prev, x) - mats.distance(x, next);
  const double insertion = mats.distance(a, x) + mats.distance(x, b) - mats.distance(a, b);
  return removal + insertion;
}

void apply_move(Tour& t, const TourMove& m) {
  if (m.kind == MoveKind::two_opt) {
    std::reverse(t.begin() + static_cast<long>(m.i) + 1, t.begin() + static_cast<long>(m.j) + 1);
    return;
  }
  const NodeId x = t[m.i];
  t.erase(t.begin() + static_cast<long>(m.i));
  const std::size_t anchor = m.j < m.i ? m.j : m.j - 1;
  t.insert(t.begin() + static_cast<long>(anchor) + 1, x);
}

std::optional<TourMove> random_move(const Tour& tour, Rng& rng) {
  if (tour.size() < 4) {
    return std::nullopt;
  }
  const std::size_t last = tour.size() - 1;
  if (rng.bernoulli(0.5)) {
    for (;;) {
      const std::size_t i = rng.index(last - 2);
      const std::size_t j = i + 2 + rng.index(last - i - 2);
      TourMove m{MoveKind::two_opt, i, j};
      if (move_valid(tour, m)) {
        return m;
      }
    }
  }
  for (;;) {
    const std::size_t i = 1 + rng.index(last - 1);
    const std::size_t j = rng.index(last);
    TourMove m{MoveKind::relocate, i, j};
    if (move_valid(tour, m)) {
      return m;
    }
  }
}

} // namespace sidekick
