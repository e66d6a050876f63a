#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace oracle {

double dist(const Instance& inst, NodeId a, NodeId b) {
  const auto& p = inst.nodes[static_cast<std::size_t>(a)];
  const auto& q = inst.nodes[static_cast<std::size_t>(b)];
  return std::hypot(p.x - q.x, p.y - q.y);
}

double truck(const Instance& inst, NodeId a, NodeId b) {
  return dist(inst, a, b) / inst.params.truck_speed;
}

double drone(const Instance& inst, NodeId a, NodeId b) {
  return dist(inst, a, b) / inst.params.drone_speed;
}

double flight(const Instance& inst, NodeId u, NodeId k, NodeId v) {
  return drone(inst, u, k) + drone(inst, k, v) + inst.params.launch_time +
         inst.params.recovery_time;
}

bool feasible(const Instance& inst, NodeId u, NodeId k, NodeId v) {
  return flight(inst, u, k, v) <= inst.params.endurance + 1e-9;
}

double tour_length(const Instance& inst, const Tour& tour) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < tour.size(); ++i) {
    len += truck(inst, tour[i], tour[i + 1]);
  }
  return len;
}

TspResult brute_force_tsp(const Instance& inst) {
  std::vector<NodeId> perm(static_cast<std::size_t>(inst.customer_count()));
  std::iota(perm.begin(), perm.end(), 1);
  TspResult best;
  do {
    Tour t{0};
    t.insert(t.end(), perm.begin(), perm.end());
    t.push_back(0);
    const double len = tour_length(inst, t);
    if (len < best.length) {
      best = {len, t};
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Tour naive_two_opt(const Instance& inst, Tour tour) {
  for (;;) {
    const double base = tour_length(inst, tour);
    double best = base;
    Tour best_tour;
    for (std::size_t i = 1; i + 1 < tour.size(); ++i) {
      for (std::size_t j = i + 1; j + 1 < tour.size(); ++j) {
        Tour t = tour;
        std::reverse(t.begin() + static_cast<long>(i), t.begin() + static_cast<long>(j) + 1);
        const double len = tour_length(inst, t);
        if (len < best - 1e-9) {
          best = len;
          best_tour = std::move(t);
        }
      }
    }
    if (best_tour.empty()) {
      return tour;
    }
    tour = std::move(best_tour);
  }
}

bool two_opt_local_optimum(const Instance& inst, const Tour& tour, double eps) {
  const double base = tour_length(inst, tour);
  for (std::size_t i = 1; i + 1 < tour.size(); ++i) {
    for (std::size_t j = i + 1; j + 1 < tour.size(); ++j) {
      Tour t = tour;
      std::reverse(t.begin() + static_cast<long>(i), t.begin() + static_cast<long>(j) + 1);
      if (tour_length(inst, t) < base - eps) {
        return false;
      }
    }
  }
  return true;
}

Timeline replay(const Instance& inst, const Tour& tour, const std::vector<NodeId>& on_edge) {
  Timeline tl;
  double clock = 0.0;
  double ready = 0.0;
  for (std::size_t p = 0; p + 1 < tour.size(); ++p) {
    const NodeId u = tour[p];
    const NodeId v = tour[p + 1];
    const double drive = truck(inst, u, v);
    tl.truck_travel += drive;
    const NodeId k = p < on_edge.size() ? on_edge[p] : 0;
    if (k == 0) {
      clock += drive;
      continue;
    }
    if (!feasible(inst, u, k, v)) {
      tl.makespan = infinity;
      return tl;
    }
    const double launch = std::max(clock, ready);
    const double back = launch + flight(inst, u, k, v);
    tl.total_wait += launch - clock;
    const double arrive = launch + drive;
    tl.total_wait += std::max(0.0, back - arrive);
    clock = std::max(arrive, back);
    ready = back + inst.params.recharge;
    tl.launches.push_back(launch);
    tl.rendezvous.push_back(back);
  }
  tl.makespan = clock;
  return tl;
}

Timeline replay(const Instance& inst, const Solution& sol) {
  std::vector<NodeId> on_edge(sol.tour.size(), 0);
  for (const Sortie& s : sol.sorties) {
    for (std::size_t p = 0; p + 1 < sol.tour.size(); ++p) {
      if (sol.tour[p] == s.launch && sol.tour[p + 1] == s.rendezvous) {
        on_edge[p] = s.customer;
        break;
      }
    }
  }
  return replay(inst, sol.tour, on_edge);
}

namespace {

Solution to_solution(const Tour& tour, const std::vector<NodeId>& on_edge) {
  Solution sol{tour, {}};
  for (std::size_t p = 0; p + 1 < tour.size(); ++p) {
    if (on_edge[p] != 0) {
      sol.sorties.push_back({tour[p], on_edge[p], tour[p + 1]});
    }
  }
  return sol;
}

// Tries every injective placement of `drones` onto edges of `tour`, where
// `allowed(k, p)` says whether customer k may fly over edge p.
void assign_all(const Instance& inst, const Tour& tour, const std::vector<NodeId>& drones,
                const std::function<bool(NodeId, std::size_t)>& allowed, ScheduleResult& best) {
  std::vector<NodeId> on_edge(tour.size() - 1, 0);
  std::function<void(std::size_t)> place = [&](std::size_t idx) {
    if (idx == drones.size()) {
      const Timeline tl = replay(inst, tour, on_edge);
      ++best.evaluated;
      if (tl.makespan < best.makespan) {
        best.makespan = tl.makespan;
        best.solution = to_solution(tour, on_edge);
      }
      return;
    }
    const NodeId k = drones[idx];
    for (std::size_t p = 0; p < on_edge.size(); ++p) {
      if (on_edge[p] == 0 && allowed(k, p) && feasible(inst, tour[p], k, tour[p + 1])) {
        on_edge[p] = k;
        place(idx + 1);
        on_edge[p] = 0;
      }
    }
  };
  place(0);
}

} // namespace

ScheduleResult best_schedule_for_tour(const Instance& inst, const Tour& tour) {
  const std::vector<NodeId> customers(tour.begin() + 1, tour.end() - 1);
  const std::size_t m = customers.size();
  std::vector<std::size_t> pos(static_cast<std::size_t>(inst.node_count()), 0);
  for (std::size_t i = 0; i < tour.size() - 1; ++i) {
    pos[static_cast<std::size_t>(tour[i])] = i;
  }
  ScheduleResult best;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    Tour reduced{0};
    std::vector<NodeId> drones;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) {
        drones.push_back(customers[i]);
      } else {
        reduced.push_back(customers[i]);
      }
    }
    reduced.push_back(0);
    if (drones.size() > reduced.size() - 1) {
      continue;
    }
    auto allowed = [&](NodeId k, std::size_t p) {
      return pos[static_cast<std::size_t>(reduced[p])] < pos[static_cast<std::size_t>(k)];
    };
    assign_all(inst, reduced, drones, allowed, best);
  }
  return best;
}

ScheduleResult best_schedule_global(const Instance& inst) {
  const int n = inst.customer_count();
  ScheduleResult best;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<NodeId> truck_set;
    std::vector<NodeId> drones;
    for (int c = 1; c <= n; ++c) {
      (mask & (1u << (c - 1)) ? drones : truck_set).push_back(c);
    }
    if (drones.size() > truck_set.size() + 1) {
      continue;
    }
    do {
      Tour tour{0};
      tour.insert(tour.end(), truck_set.begin(), truck_set.end());
      tour.push_back(0);
      assign_all(inst, tour, drones, [](NodeId, std::size_t) { return true; }, best);
    } while (std::next_permutation(truck_set.begin(), truck_set.end()));
  }
  return best;
}

Tour expand_tour(const Solution& sol) {
  Tour full;
  for (std::size_t p = 0; p < sol.tour.size(); ++p) {
    full.push_back(sol.tour[p]);
    if (p + 1 == sol.tour.size()) {
      break;
    }
    for (const Sortie& s : sol.sorties) {
      if (s.launch == sol.tour[p] && s.rendezvous == sol.tour[p + 1]) {
        full.push_back(s.customer);
      }
    }
  }
  return full;
}

Solution random_solution(const Instance& inst, sidekick::Rng& rng, double sortie_share) {
  std::vector<NodeId> customers(static_cast<std::size_t>(inst.customer_count()));
  std::iota(customers.begin(), customers.end(), 1);
  rng.shuffle(std::span<NodeId>(customers));
  std::vector<NodeId> drones;
  Tour tour{0};
  for (NodeId c : customers) {
    (rng.bernoulli(sortie_share) ? drones : tour).push_back(c);
  }
  for (;;) {
    Tour closed = tour;
    closed.push_back(0);
    std::vector<NodeId> on_edge(closed.size() - 1, 0);
    std::vector<NodeId> stranded;
    for (NodeId k : drones) {
      std::vector<std::size_t> free_edges;
      for (std::size_t p = 0; p < on_edge.size(); ++p) {
        if (on_edge[p] == 0 && feasible(inst, closed[p], k, closed[p + 1])) {
          free_edges.push_back(p);
        }
      }
      if (free_edges.empty()) {
        stranded.push_back(k);
      } else {
        on_edge[free_edges[rng.index(free_edges.size())]] = k;
      }
    }
    if (stranded.empty()) {
      return to_solution(closed, on_edge);
    }
    // put the stranded customers on the truck and draw the sorties again
    tour.insert(tour.end(), stranded.begin(), stranded.end());
    std::erase_if(drones, [&](NodeId k) {
      return std::find(stranded.begin(), stranded.end(), k) != stranded.end();
    });
  }
}

Instance uniform_instance(int n, std::uint64_t seed, const sidekick::OperationalParams& params) {
  return sidekick::generate_uniform_instance(n, seed, params);
}

} // namespace oracle
