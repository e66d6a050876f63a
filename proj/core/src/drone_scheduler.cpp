#include "sidekick/drone_scheduler.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>

namespace sidekick {

double ScheduleState::bound(const TravelMatrices& mats) const {
  double t = clock;
  for (std::size_t p = cursor; p + 1 < tour.size(); ++p) {
    t += mats.truck_time(tour[p], tour[p + 1]);
  }
  return t;
}

ScheduleState initial_state(const Tour& tour) {
  ScheduleState s;
  s.tour = tour;
  return s;
}

std::vector<Sortie> candidate_sorties(const Tour& tour, std::size_t position,
                                      const TravelMatrices& mats, const Instance& inst) {
  std::vector<Sortie> out;
  if (position + 2 >= tour.size()) {
    // Only the closing edge remains; there is no customer ahead.
    return out;
  }
  const NodeId u = tour[position];
  for (std::size_t q = position + 1; q + 1 < tour.size(); ++q) {
    const NodeId k = tour[q];
    const NodeId v = q == position + 1 ? tour[q + 1] : tour[position + 1];
    if (sortie_feasible(u, k, v, mats, inst)) {
      out.push_back({u, k, v});
    }
  }
  return out;
}

ScheduleState advance(const ScheduleState& state, const Sortie* sortie, const TravelMatrices& mats,
                      const Instance& inst) {
  if (state.done()) {
    throw std::logic_error("advance: schedule already complete");
  }
  ScheduleState next = state;
  const NodeId u = next.tour[next.cursor];
  double rendezvous = 0.0;
  if (sortie != nullptr) {
    auto it = std::find(next.tour.begin() + static_cast<long>(next.cursor) + 1, next.tour.end() - 1,
                        sortie->customer);
    if (sortie->launch != u || it == next.tour.end() - 1) {
      throw std::logic_error("advance: sortie is not a candidate at this stop");
    }
    next.tour.erase(it);
    if (next.tour[next.cursor + 1] != sortie->rendezvous) {
      throw std::logic_error("advance: sortie rendezvous is not the next stop");
    }
    const double launch = std::max(next.clock, next.drone_ready);
    next.total_wait += launch - next.clock;
    next.clock = launch;
    rendezvous = launch + sortie_flight_time(u, sortie->customer, sortie->rendezvous, mats, inst);
    next.sorties.push_back(*sortie);
  }
  const NodeId v = next.tour[next.cursor + 1];
  const double leg = mats.truck_time(u, v);
  next.clock += leg;
  next.truck_travel += leg;
  if (sortie != nullptr) {
    if (rendezvous > next.clock) {
      next.total_wait += rendezvous - next.clock;
      next.clock = rendezvous;
    }
    next.drone_ready = rendezvous + inst.params.recharge;
  }
  ++next.cursor;
  return next;
}

bool schedule_less(double makespan_a, const std::vector<Sortie>& a, double makespan_b,
                   const std::vector<Sortie>& b) {
  if (makespan_a != makespan_b) {
    return makespan_a < makespan_b;
  }
  if (a.size() != b.size()) {
    return a.size() < b.size();
  }
  return a < b;
}

Solution greedy_complete(ScheduleState state, const std::vector<Sortie>& banned,
                         const TravelMatrices& mats, const Instance& inst) {
  while (!state.done()) {
    const double base = simulate(state.solution(), mats, inst).makespan;
    double best = std::numeric_limits<double>::infinity();
    std::optional<Sortie> chosen;
    for (const Sortie& c : candidate_sorties(state, mats, inst)) {
      if (std::find(banned.begin(), banned.end(), c) != banned.end()) {
        continue;
      }
      Solution trial = state.solution();
      trial.tour.erase(std::find(trial.tour.begin() + static_cast<long>(state.cursor) + 1,
                                 trial.tour.end() - 1, c.customer));
      trial.sorties.push_back(c);
      const double m = simulate(trial, mats, inst).makespan;
      if (m < best || (m == best && chosen && c < *chosen)) {
        best = m;
        chosen = c;
      }
    }
    if (chosen && best < base) {
      state = advance(state, &*chosen, mats, inst);
    } else {
      state = advance(state, nullptr, mats, inst);
    }
  }
  return state.solution();
}

Solution greedy_assign(const Tour& tour, const TravelMatrices& mats, const Instance& inst) {
  return greedy_complete(initial_state(tour), {}, mats, inst);
}

Solution beam_schedule(const Tour& tour, const TravelMatrices& mats, const Instance& inst,
                       std::size_t width) {
  if (width < 1) {
    throw std::invalid_argument("beam width must be >= 1");
  }
  struct Scored {
    double score;
    ScheduleState state;
  };
  auto scored_less = [](const Scored& a, const Scored& b) {
    return schedule_less(a.score, a.state.sorties, b.score, b.state.sorties);
  };

  std::vector<ScheduleState> beam{initial_state(tour)};
  std::vector<ScheduleState> completed;
  while (!beam.empty()) {
    std::vector<Scored> children;
    for (const ScheduleState& s : beam) {
      if (s.done()) {
        completed.push_back(s);
        continue;
      }
      ScheduleState skip = advance(s, nullptr, mats, inst);
      const double skip_score = skip.bound(mats);
      children.push_back({skip_score, std::move(skip)});
      for (const Sortie& c : candidate_sorties(s, mats, inst)) {
        ScheduleState fly = advance(s, &c, mats, inst);
        const double score = fly.bound(mats);
        children.push_back({score, std::move(fly)});
      }
    }
    if (children.size() > width) {
      std::partial_sort(children.begin(), children.begin() + static_cast<long>(width),
                        children.end(), scored_less);
      children.resize(width);
    }
    beam.clear();
    for (auto& c : children) {
      beam.push_back(std::move(c.state));
    }
  }

  const Solution* best = nullptr;
  double best_makespan = 0.0;
  std::vector<Solution> solutions;
  solutions.reserve(completed.size());
  for (const auto& s : completed) {
    solutions.push_back(s.solution());
  }
  for (const auto& sol : solutions) {
    const double m = simulate(sol, mats, inst).makespan;
    if (best == nullptr || schedule_less(m, sol.sorties, best_makespan, best->sorties)) {
      best = &sol;
      best_makespan = m;
    }
  }
  return *best;
}

Solution assignment_vns(const Solution& sol, const TravelMatrices& mats, const Instance& inst,
                        const AssignmentVNSParams& params, Rng& rng) {
  Solution best = sol;
  double best_makespan = simulate(best, mats, inst).makespan;
  int k = 1;
  for (int iter = 0; iter < params.iterations; ++iter) {
    const std::size_t count = best.sorties.size();
    if (count == 0) {
      break;
    }
    const std::size_t drop = std::min<std::size_t>(static_cast<std::size_t>(k), count);
    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) {
      order[i] = i;
    }
    rng.shuffle(std::span<std::size_t>(order));
    std::vector<std::size_t> dropped(order.begin(), order.begin() + static_cast<long>(drop));
    const std::size_t first = *std::min_element(dropped.begin(), dropped.end());
    std::vector<Sortie> banned;
    for (std::size_t i : dropped) {
      banned.push_back(best.sorties[i]);
    }

    // Put every drone customer back between its launch and rendezvous stops.
    Tour full;
    for (std::size_t p = 0; p < best.tour.size(); ++p) {
      full.push_back(best.tour[p]);
      for (const Sortie& s : best.sorties) {
        if (p + 1 < best.tour.size() && s.launch == best.tour[p] &&
            s.rendezvous == best.tour[p + 1]) {
          full.push_back(s.customer);
        }
      }
    }

    // Replay the sorties launched before the first dropped one.
    ScheduleState state = initial_state(full);
    std::size_t next_kept = 0;
    const NodeId stop_at = best.sorties[first].launch;
    while (state.position_node() != stop_at) {
      const Sortie* s = nullptr;
      if (next_kept < first && best.sorties[next_kept].launch == state.position_node()) {
        s = &best.sorties[next_kept++];
      }
      state = advance(state, s, mats, inst);
    }

    Solution candidate = greedy_complete(std::move(state), banned, mats, inst);
    const double m = simulate(candidate, mats, inst).makespan;
    if (m < best_makespan) {
      best = std::move(candidate);
      best_makespan = m;
      k = 1;
    } else {
      k = k >= params.k_max ? 1 : k + 1;
    }
  }
  return best;
}

} // namespace sidekick
