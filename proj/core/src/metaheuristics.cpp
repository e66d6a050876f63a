#include "sidekick/metaheuristics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sidekick/errors.hpp"

namespace sidekick {

void check_params(const SAParams& p) {
  if (!(p.min_temperature > 0.0) || !(p.initial_temperature > p.min_temperature)) {
    throw ConfigError("SA needs initial_temperature > min_temperature > 0");
  }
  if (!(p.cooling > 0.0 && p.cooling < 1.0)) {
    throw ConfigError("SA cooling factor must lie in (0, 1)");
  }
  if (p.iters_per_temp < 1) {
    throw ConfigError("SA iters_per_temp must be >= 1");
  }
}

void check_params(const TabuParams& p) {
  if (p.tenure < 1 || p.max_iters < 0) {
    throw ConfigError("tabu search needs tenure >= 1 and max_iters >= 0");
  }
}

void check_params(const GAParams& p) {
  if (p.pop_size < 2 || p.elite < 0 || p.elite >= p.pop_size) {
    throw ConfigError("GA needs pop_size >= 2 and 0 <= elite < pop_size");
  }
  if (p.generations < 0 || p.cleanup_moves < 0) {
    throw ConfigError("GA generations and cleanup_moves must be non-negative");
  }
  if (p.crossover_rate < 0.0 || p.crossover_rate > 1.0 || p.mutation_rate < 0.0 ||
      p.mutation_rate > 1.0) {
    throw ConfigError("GA rates must be probabilities");
  }
}

void check_params(const VNSParams& p) {
  if (p.k_max < 1 || p.max_iters < 0) {
    throw ConfigError("VNS needs k_max >= 1 and max_iters >= 0");
  }
}

double acceptance_probability(double delta, double temperature) {
  if (delta <= 0.0) {
    return 1.0;
  }
  if (temperature <= 0.0) {
    return 0.0;
  }
  return std::exp(-delta / temperature);
}

namespace {

void record(SearchTrace* trace, double best, double current) {
  if (trace != nullptr) {
    trace->best.push_back(best);
    trace->current.push_back(current);
  }
}

} // namespace

Tour simulated_annealing(const Tour& tour, const TravelMatrices& mats, const SAParams& p, Rng& rng,
                         SearchTrace* trace) {
  check_params(p);
  Tour current = tour;
  double current_len = tour_length(current, mats);
  Tour best = current;
  double best_len = current_len;
  if (tour.size() < 4) {
    return best;
  }
  const double mean_edge = current_len / static_cast<double>(tour.size() - 1);
  const double scale = mean_edge > 0.0 ? mean_edge : 1.0;

  for (double t = p.initial_temperature * scale; t > p.min_temperature; t *= p.cooling) {
    for (int it = 0; it < p.iters_per_temp; ++it) {
      const auto move = random_move(current, rng);
      const double delta = move_delta(current, *move, mats);
      const double u = rng.uniform();
      if (delta < 0.0 || u < acceptance_probability(delta, t)) {
        apply_move(current, *move);
        current_len += delta;
        if (current_len < best_len - improvement_epsilon) {
          best = current;
          best_len = tour_length(best, mats);
          current_len = best_len;
        }
      }
    }
    record(trace, best_len, current_len);
  }
  return best;
}

void TabuMemory::forbid(NodeId a, NodeId b, int until_iter) {
  expiry_[std::minmax(a, b)] = until_iter;
}

bool TabuMemory::is_forbidden(NodeId a, NodeId b, int iter) const {
  auto it = expiry_.find(std::minmax(a, b));
  return it != expiry_.end() && it->second > iter;
}

bool TabuMemory::is_tabu(const Tour& t, const TourMove& m, int iter) const {
  if (m.kind == MoveKind::two_opt) {
    return is_forbidden(t[m.i], t[m.j], iter) || is_forbidden(t[m.i + 1], t[m.j + 1], iter);
  }
  const NodeId x = t[m.i];
  return is_forbidden(t[m.i - 1], t[m.i + 1], iter) || is_forbidden(t[m.j], x, iter) ||
         is_forbidden(x, t[m.j + 1], iter);
}

bool tabu_admissible(bool tabu, double resulting_length, double best_length) {
  return !tabu || resulting_length < best_length - improvement_epsilon;
}

Tour tabu_search(const Tour& tour, const TravelMatrices& mats, const TabuParams& p, Rng& rng,
                 SearchTrace* trace) {
  check_params(p);
  (void)rng;  // the neighbourhood is scanned exhaustively; kept for a uniform signature
  Tour current = tour;
  double current_len = tour_length(current, mats);
  Tour best = current;
  double best_len = current_len;
  TabuMemory memory;

  for (int iter = 0; iter < p.max_iters; ++iter) {
    bool found = false;
    TourMove chosen;
    double chosen_delta = 0.0;
    for_each_move(current, [&](const TourMove& m) {
      const double delta = move_delta(current, m, mats);
      if (found && delta >= chosen_delta) {
        return;
      }
      if (!tabu_admissible(memory.is_tabu(current, m, iter), current_len + delta, best_len)) {
        return;
      }
      found = true;
      chosen = m;
      chosen_delta = delta;
    });
    if (!found) {
      break;
    }
    const int until = iter + 1 + p.tenure;
    if (chosen.kind == MoveKind::two_opt) {
      memory.forbid(current[chosen.i], current[chosen.i + 1], until);
      memory.forbid(current[chosen.j], current[chosen.j + 1], until);
    } else {
      const NodeId x = current[chosen.i];
      memory.forbid(current[chosen.i - 1], x, until);
      memory.forbid(x, current[chosen.i + 1], until);
      memory.forbid(current[chosen.j], current[chosen.j + 1], until);
    }
    apply_move(current, chosen);
    current_len = tour_length(current, mats);
    if (current_len < best_len - improvement_epsilon) {
      best = current;
      best_len = current_len;
    }
    record(trace, best_len, current_len);
  }
  return best;
}

std::vector<NodeId> ordered_crossover(const std::vector<NodeId>& a, const std::vector<NodeId>& b,
                                      std::size_t lo, std::size_t hi) {
  const std::size_t n = a.size();
  if (b.size() != n || lo > hi || hi >= n) {
    throw std::invalid_argument("ordered_crossover: bad parents or cut points");
  }
  std::vector<NodeId> child(n, -1);
  std::vector<NodeId> kept(a.begin() + static_cast<long>(lo), a.begin() + static_cast<long>(hi) + 1);
  std::sort(kept.begin(), kept.end());
  for (std::size_t i = lo; i <= hi; ++i) {
    child[i] = a[i];
  }
  std::size_t write = (hi + 1) % n;
  for (std::size_t step = 0; step < n; ++step) {
    const NodeId gene = b[(hi + 1 + step) % n];
    if (std::binary_search(kept.begin(), kept.end(), gene)) {
      continue;
    }
    child[write] = gene;
    write = (write + 1) % n;
  }
  return child;
}

namespace {

Tour to_tour(const std::vector<NodeId>& genes) {
  Tour t{depot};
  t.insert(t.end(), genes.begin(), genes.end());
  t.push_back(depot);
  return t;
}

std::vector<NodeId> to_genes(const Tour& t) {
  return {t.begin() + 1, t.end() - 1};
}

} // namespace

Tour genetic_algorithm(const Instance& inst, const TravelMatrices& mats, const GAParams& p, Rng& rng,
                       SearchTrace* trace) {
  check_params(p);
  const int n = inst.customer_count();
  if (n < 2) {
    throw ConfigError("GA needs at least two customers");
  }

  struct Individual {
    std::vector<NodeId> genes;
    double length;
  };
  auto evaluate = [&](std::vector<NodeId> genes) {
    const double len = tour_length(to_tour(genes), mats);
    return Individual{std::move(genes), len};
  };
  auto by_length = [](const Individual& x, const Individual& y) { return x.length < y.length; };

  std::vector<Individual> pop;
  pop.reserve(static_cast<std::size_t>(p.pop_size));
  std::vector<NodeId> base(static_cast<std::size_t>(n));
  std::iota(base.begin(), base.end(), 1);
  for (int i = 0; i < p.pop_size; ++i) {
    std::vector<NodeId> genes = base;
    rng.shuffle(std::span<NodeId>(genes));
    pop.push_back(evaluate(std::move(genes)));
  }
  std::stable_sort(pop.begin(), pop.end(), by_length);

  auto tournament = [&]() -> const Individual& {
    const auto& x = pop[rng.index(pop.size())];
    const auto& y = pop[rng.index(pop.size())];
    return y.length < x.length ? y : x;
  };

  for (int gen = 0; gen < p.generations; ++gen) {
    std::vector<Individual> next(pop.begin(), pop.begin() + p.elite);
    while (static_cast<int>(next.size()) < p.pop_size) {
      const Individual& pa = tournament();
      const Individual& pb = tournament();
      std::vector<NodeId> child = pa.genes;
      if (rng.bernoulli(p.crossover_rate)) {
        std::size_t lo = rng.index(child.size());
        std::size_t hi = rng.index(child.size());
        if (lo > hi) {
          std::swap(lo, hi);
        }
        child = ordered_crossover(pa.genes, pb.genes, lo, hi);
      }
      if (rng.bernoulli(p.mutation_rate)) {
        std::swap(child[rng.index(child.size())], child[rng.index(child.size())]);
      }
      if (p.cleanup_moves > 0) {
        child = to_genes(two_opt(to_tour(child), mats, p.cleanup_moves));
      }
      next.push_back(evaluate(std::move(child)));
    }
    pop = std::move(next);
    std::stable_sort(pop.begin(), pop.end(), by_length);
    record(trace, pop.front().length, pop.front().length);
  }
  return to_tour(pop.front().genes);
}

Tour vns(const Tour& tour, const TravelMatrices& mats, const VNSParams& p, Rng& rng,
         SearchTrace* trace) {
  check_params(p);
  Tour best = local_search(tour, mats);
  double best_len = tour_length(best, mats);
  if (best.size() < 4) {
    return best;
  }
  int k = 1;
  for (int iter = 0; iter < p.max_iters; ++iter) {
    Tour candidate = best;
    for (int s = 0; s < k; ++s) {
      apply_move(candidate, *random_move(candidate, rng));
    }
    candidate = local_search(candidate, mats);
    const double len = tour_length(candidate, mats);
    if (trace != nullptr) {
      trace->neighborhood.push_back(k);
    }
    if (len < best_len - improvement_epsilon) {
      best = std::move(candidate);
      best_len = len;
      k = 1;
    } else {
      k = k == p.k_max ? 1 : k + 1;
    }
    record(trace, best_len, len);
  }
  return best;
}

} // namespace sidekick
