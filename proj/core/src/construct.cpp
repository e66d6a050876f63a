#include "sidekick/construct.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <tuple>

#include "sidekick/errors.hpp"

namespace sidekick {

namespace {

void require_customers(const Instance& inst) {
  if (inst.customer_count() < 1) {
    throw ConfigError("tour construction needs at least one customer");
  }
}

} // namespace

Tour nearest_neighbor(const Instance& inst, const TravelMatrices& mats) {
  require_customers(inst);
  const int n = inst.customer_count();
  std::vector<bool> visited(static_cast<std::size_t>(n) + 1, false);
  Tour tour{depot};
  NodeId current = depot;
  for (int step = 0; step < n; ++step) {
    NodeId best = -1;
    double best_d = 0.0;
    for (NodeId c = 1; c <= n; ++c) {
      if (visited[static_cast<std::size_t>(c)]) {
        continue;
      }
      const double d = mats.distance(current, c);
      if (best < 0 || d < best_d) {
        best = c;
        best_d = d;
      }
    }
    visited[static_cast<std::size_t>(best)] = true;
    tour.push_back(best);
    current = best;
  }
  tour.push_back(depot);
  return tour;
}

double savings(NodeId i, NodeId j, const TravelMatrices& mats) {
  return mats.distance(depot, i) + mats.distance(depot, j) - mats.distance(i, j);
}

Tour clarke_wright(const Instance& inst, const TravelMatrices& mats) {
  require_customers(inst);
  const int n = inst.customer_count();

  struct Saving {
    double value;
    NodeId i;
    NodeId j;
  };
  std::vector<Saving> list;
  list.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
  for (NodeId i = 1; i <= n; ++i) {
    for (NodeId j = i + 1; j <= n; ++j) {
      list.push_back({savings(i, j, mats), i, j});
    }
  }
  std::sort(list.begin(), list.end(), [](const Saving& a, const Saving& b) {
    if (a.value != b.value) {
      return a.value > b.value;
    }
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });

  std::vector<std::deque<NodeId>> routes(static_cast<std::size_t>(n) + 1);
  std::vector<int> route_of(static_cast<std::size_t>(n) + 1);
  for (NodeId c = 1; c <= n; ++c) {
    routes[static_cast<std::size_t>(c)] = {c};
    route_of[static_cast<std::size_t>(c)] = c;
  }
  int route_count = n;

  auto try_merge = [&](NodeId i, NodeId j) {
    const int ri = route_of[static_cast<std::size_t>(i)];
    const int rj = route_of[static_cast<std::size_t>(j)];
    if (ri == rj) {
      return;
    }
    auto& a = routes[static_cast<std::size_t>(ri)];
    auto& b = routes[static_cast<std::size_t>(rj)];
    const bool i_end = a.front() == i || a.back() == i;
    const bool j_end = b.front() == j || b.back() == j;
    if (!i_end || !j_end) {
      return;
    }
    if (a.back() != i) {
      std::reverse(a.begin(), a.end());
    }
    if (b.front() != j) {
      std::reverse(b.begin(), b.end());
    }
    for (NodeId c : b) {
      a.push_back(c);
      route_of[static_cast<std::size_t>(c)] = ri;
    }
    b.clear();
    --route_count;
  };

  for (const Saving& s : list) {
    if (route_count == 1 || s.value <= 0.0) {
      break;
    }
    try_merge(s.i, s.j);
  }
  for (const Saving& s : list) {
    if (route_count == 1) {
      break;
    }
    if (s.value <= 0.0) {
      try_merge(s.i, s.j);
    }
  }

  Tour tour{depot};
  const auto& route = routes[static_cast<std::size_t>(route_of[1])];
  tour.insert(tour.end(), route.begin(), route.end());
  tour.push_back(depot);
  return tour;
}

Tour sweep(const Instance& inst, const TravelMatrices& mats) {
  require_customers(inst);
  const int n = inst.customer_count();
  const Point origin = inst.nodes.front();

  struct Key {
    double angle;
    double radius;
    NodeId node;
  };
  std::vector<Key> keys;
  keys.reserve(static_cast<std::size_t>(n));
  for (NodeId c = 1; c <= n; ++c) {
    const Point& p = inst.nodes[static_cast<std::size_t>(c)];
    const double dx = p.x - origin.x;
    const double dy = p.y - origin.y;
    double angle = 0.0;
    if (dx != 0.0 || dy != 0.0) {
      angle = std::atan2(dy, dx);
      if (angle < 0.0) {
        angle += 2.0 * std::numbers::pi;
      }
    }
    keys.push_back({angle, mats.distance(depot, c), c});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    return std::tie(a.angle, a.radius, a.node) < std::tie(b.angle, b.radius, b.node);
  });

  Tour tour{depot};
  for (const Key& k : keys) {
    tour.push_back(k.node);
  }
  tour.push_back(depot);
  return tour;
}

} // namespace sidekick
