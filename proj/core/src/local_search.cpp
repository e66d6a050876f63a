#include "sidekick/local_search.hpp"

#include <algorithm>
#include <array>

namespace sidekick {

double tour_length(const Tour& tour, const TravelMatrices& mats) {
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < tour.size(); ++p) {
    total += mats.distance(tour[p], tour[p + 1]);
  }
  return total;
}

Tour two_opt(const Tour& input, const TravelMatrices& mats, int max_moves) {
  Tour tour = input;
  const std::size_t last = tour.size() - 1;
  for (int moves = 0; moves < max_moves; ++moves) {
    double best = -improvement_epsilon;
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = 0; i + 2 < last; ++i) {
      const NodeId a = tour[i];
      const NodeId b = tour[i + 1];
      const double ab = mats.distance(a, b);
      for (std::size_t j = i + 2; j < last; ++j) {
        const NodeId c = tour[j];
        const NodeId d = tour[j + 1];
        const double delta =
          mats.distance(a, c) + mats.distance(b, d) - ab - mats.distance(c, d);
        if (delta < best) {
          best = delta;
          bi = i;
          bj = j;
        }
      }
    }
    if (bj == 0) {
      break;
    }
    std::reverse(tour.begin() + static_cast<long>(bi) + 1, tour.begin() + static_cast<long>(bj) + 1);
  }
  return tour;
}

Tour three_opt(const Tour& input, const TravelMatrices& mats) {
  Tour tour = input;
  const std::size_t last = tour.size() - 1;
  for (;;) {
    double best = -improvement_epsilon;
    std::size_t bi = 0;
    std::size_t bj = 0;
    std::size_t bk = 0;
    int bvariant = -1;
    for (std::size_t i = 0; i + 2 < last + 1; ++i) {
      for (std::size_t j = i + 1; j + 1 < last + 1; ++j) {
        for (std::size_t k = j + 1; k < last; ++k) {
          const NodeId a = tour[i], b = tour[i + 1];
          const NodeId c = tour[j], d = tour[j + 1];
          const NodeId e = tour[k], f = tour[k + 1];
          const double base = mats.distance(a, b) + mats.distance(c, d) + mats.distance(e, f);
          const std::array<double, 7> cost = {
            mats.distance(a, c) + mats.distance(b, d) + mats.distance(e, f),
            mats.distance(a, b) + mats.distance(c, e) + mats.distance(d, f),
            mats.distance(a, e) + mats.distance(d, c) + mats.distance(b, f),
            mats.distance(a, c) + mats.distance(b, e) + mats.distance(d, f),
            mats.distance(a, d) + mats.distance(e, b) + mats.distance(c, f),
            mats.distance(a, d) + mats.distance(e, c) + mats.distance(b, f),
            mats.distance(a, e) + mats.distance(d, b) + mats.distance(c, f),
          };
          for (int v = 0; v < 7; ++v) {
            const double delta = cost[static_cast<std::size_t>(v)] - base;
            if (delta < best) {
              best = delta;
              bi = i;
              bj = j;
              bk = k;
              bvariant = v;
            }
          }
        }
      }
    }
    if (bvariant < 0) {
      break;
    }
    // Segments: s1 = tour[bi+1..bj], s2 = tour[bj+1..bk].
    Tour s1(tour.begin() + static_cast<long>(bi) + 1, tour.begin() + static_cast<long>(bj) + 1);
    Tour s2(tour.begin() + static_cast<long>(bj) + 1, tour.begin() + static_cast<long>(bk) + 1);
    Tour r1(s1.rbegin(), s1.rend());
    Tour r2(s2.rbegin(), s2.rend());
    Tour middle;
    auto append = [&middle](const Tour& seg) { middle.insert(middle.end(), seg.begin(), seg.end()); };
    switch (bvariant) {
    case 0: append(r1); append(s2); break;
    case 1: append(s1); append(r2); break;
    case 2: append(r2); append(r1); break;
    case 3: append(r1); append(r2); break;
    case 4: append(s2); append(s1); break;
    case 5: append(s2); append(r1); break;
    case 6: append(r2); append(s1); break;
    }
    std::copy(middle.begin(), middle.end(), tour.begin() + static_cast<long>(bi) + 1);
  }
  return tour;
}

Tour or_opt(const Tour& input, const TravelMatrices& mats) {
  Tour tour = input;
  const std::size_t last = tour.size() - 1;
  for (;;) {
    double best = -improvement_epsilon;
    std::size_t bl = 0, bi = 0, bj = 0;
    bool brev = false;
    for (std::size_t len = 1; len <= 3; ++len) {
      for (std::size_t i = 1; i + len <= last; ++i) {
        const std::size_t end = i + len - 1;
        const NodeId prev = tour[i - 1];
        const NodeId next = tour[end + 1];
        const NodeId first = tour[i];
        const NodeId tail = tour[end];
        const double removal =
          mats.distance(prev, next) - mats.distance(prev, first) - mats.distance(tail, next);
        for (std::size_t j = 0; j < last; ++j) {
          if (j + 1 >= i && j <= end) {
            continue;
          }
          const NodeId x = tour[j];
          const NodeId y = tour[j + 1];
          const double xy = mats.distance(x, y);
          const double forward = mats.distance(x, first) + mats.distance(tail, y) - xy;
          const double backward = mats.distance(x, tail) + mats.distance(first, y) - xy;
          if (removal + forward < best) {
            best = removal + forward;
            bl = len; bi = i; bj = j; brev = false;
          }
          if (len > 1 && removal + backward < best) {
            best = removal + backward;
            bl = len; bi = i; bj = j; brev = true;
          }
        }
      }
    }
    if (bl == 0) {
      break;
    }
    Tour chain(tour.begin() + static_cast<long>(bi), tour.begin() + static_cast<long>(bi + bl));
    if (brev) {
      std::reverse(chain.begin(), chain.end());
    }
    const NodeId anchor = tour[bj];
    tour.erase(tour.begin() + static_cast<long>(bi), tour.begin() + static_cast<long>(bi + bl));
    // The anchor is a unique stop unless it is the leading depot.
    std::size_t at = 0;
    if (bj != 0) {
      at = static_cast<std::size_t>(std::find(tour.begin() + 1, tour.end(), anchor) - tour.begin());
    }
    tour.insert(tour.begin() + static_cast<long>(at) + 1, chain.begin(), chain.end());
  }
  return tour;
}

Tour local_search(const Tour& input, const TravelMatrices& mats, const LocalSearchOptions& options) {
  Tour tour = input;
  for (;;) {
    bool changed = false;
    auto step = [&](Tour next) {
      if (next != tour) {
        changed = true;
        tour = std::move(next);
      }
    };
    step(two_opt(tour, mats));
    step(or_opt(tour, mats));
    if (options.use_three_opt) {
      step(three_opt(tour, mats));
    }
    if (!changed) {
      break;
    }
  }
  return tour;
}

} // namespace sidekick
