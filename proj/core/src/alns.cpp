#include "sidekick/alns.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sidekick/errors.hpp"
#include "sidekick/local_search.hpp"

namespace sidekick {

void check_params(const ALNSParams& p) {
  if (!(p.destroy_fraction > 0.0 && p.destroy_fraction < 1.0)) {
    throw ConfigError("ALNS destroy_fraction must lie in (0, 1)");
  }
  if (p.iterations < 0 || p.segment_length < 1) {
    throw ConfigError("ALNS needs iterations >= 0 and segment_length >= 1");
  }
  if (!(p.reaction > 0.0 && p.reaction <= 1.0)) {
    throw ConfigError("ALNS reaction must lie in (0, 1]");
  }
  if (!(p.sigma_best >= p.sigma_better && p.sigma_better >= p.sigma_accepted &&
        p.sigma_accepted >= 0.0)) {
    throw ConfigError("ALNS scores must satisfy sigma_best >= sigma_better >= sigma_accepted >= 0");
  }
  if (!(p.accept_t0 > 0.0) || !(p.accept_cooling > 0.0 && p.accept_cooling <= 1.0)) {
    throw ConfigError("ALNS acceptance needs accept_t0 > 0 and cooling in (0, 1]");
  }
}

namespace {

int customers_in(const Tour& tour) {
  return static_cast<int>(tour.size()) - 2;
}

void check_q(const Tour& tour, int q) {
  if (q < 1 || q >= customers_in(tour)) {
    throw std::invalid_argument("removal count q must satisfy 1 <= q < customers in tour");
  }
}

void erase_node(Tour& tour, NodeId node) {
  tour.erase(std::find(tour.begin() + 1, tour.end() - 1, node));
}

std::size_t pick_rank(std::size_t size, double determinism, Rng& rng) {
  const double y = rng.uniform();
  const auto rank = static_cast<std::size_t>(std::pow(y, determinism) * static_cast<double>(size));
  return std::min(rank, size - 1);
}

} // namespace

Removal random_removal(const Tour& tour, int q, Rng& rng) {
  check_q(tour, q);
  std::vector<NodeId> pool(tour.begin() + 1, tour.end() - 1);
  rng.shuffle(std::span<NodeId>(pool));
  Removal out{tour, {pool.begin(), pool.begin() + q}};
  for (NodeId c : out.removed) {
    erase_node(out.partial, c);
  }
  return out;
}

double relatedness(NodeId i, NodeId j, const TravelMatrices& mats) {
  return mats.distance(i, j);
}

Removal shaw_removal(const Tour& tour, int q, const TravelMatrices& mats, Rng& rng,
                     double determinism) {
  check_q(tour, q);
  Removal out{tour, {}};
  const NodeId seed = out.partial[1 + rng.index(out.partial.size() - 2)];
  out.removed.push_back(seed);
  erase_node(out.partial, seed);
  while (static_cast<int>(out.removed.size()) < q) {
    const NodeId ref = out.removed[rng.index(out.removed.size())];
    std::vector<NodeId> remaining(out.partial.begin() + 1, out.partial.end() - 1);
    std::stable_sort(remaining.begin(), remaining.end(), [&](NodeId a, NodeId b) {
      return relatedness(ref, a, mats) < relatedness(ref, b, mats);
    });
    const NodeId pick = remaining[pick_rank(remaining.size(), determinism, rng)];
    out.removed.push_back(pick);
    erase_node(out.partial, pick);
  }
  return out;
}

double removal_gain(const Tour& tour, std::size_t p, const TravelMatrices& mats) {
  const NodeId prev = tour[p - 1], node = tour[p], next = tour[p + 1];
  return mats.distance(prev, node) + mats.distance(node, next) - mats.distance(prev, next);
}

Removal worst_removal(const Tour& tour, int q, const TravelMatrices& mats, Rng& rng,
                      double determinism) {
  check_q(tour, q);
  Removal out{tour, {}};
  while (static_cast<int>(out.removed.size()) < q) {
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t p = 1; p + 1 < out.partial.size(); ++p) {
      ranked.emplace_back(removal_gain(out.partial, p, mats), p);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    const std::size_t pos = ranked[pick_rank(ranked.size(), determinism, rng)].second;
    out.removed.push_back(out.partial[pos]);
    out.partial.erase(out.partial.begin() + static_cast<long>(pos));
  }
  return out;
}

Tour greedy_insertion(const Tour& partial, const std::vector<NodeId>& removed,
                      const TravelMatrices& mats) {
  Tour tour = partial;
  std::vector<NodeId> pending = removed;
  constexpr double tie = 1e-12;
  while (!pending.empty()) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_pos = 0;
    std::size_t best_idx = 0;
    for (std::size_t p = 0; p + 1 < tour.size(); ++p) {
      const NodeId a = tour[p], b = tour[p + 1];
      const double ab = mats.distance(a, b);
      for (std::size_t idx = 0; idx < pending.size(); ++idx) {
        const NodeId x = pending[idx];
        const double cost = mats.distance(a, x) + mats.distance(x, b) - ab;
        if (cost < best - tie) {
          best = cost;
          best_pos = p;
          best_idx = idx;
        }
      }
    }
    tour.insert(tour.begin() + static_cast<long>(best_pos) + 1, pending[best_idx]);
    pending.erase(pending.begin() + static_cast<long>(best_idx));
  }
  return tour;
}

OperatorWeights::OperatorWeights(std::size_t count)
  : weights_(count, 1.0), scores_(count, 0.0), uses_(count, 0) {}

std::size_t OperatorWeights::select(Rng& rng) const {
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  double target = rng.uniform() * total;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    target -= weights_[i];
    if (target < 0.0) {
      return i;
    }
  }
  return weights_.size() - 1;
}

void OperatorWeights::credit(std::size_t op, double score) {
  scores_[op] += score;
  uses_[op] += 1;
}

void OperatorWeights::end_segment(double reaction) {
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (uses_[i] > 0) {
      const double performance = scores_[i] / static_cast<double>(uses_[i]);
      weights_[i] = std::max(min_weight, (1.0 - reaction) * weights_[i] + reaction * performance);
    }
    scores_[i] = 0.0;
    uses_[i] = 0;
  }
}

std::vector<double> OperatorWeights::probabilities() const {
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  std::vector<double> out(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    out[i] = weights_[i] / total;
  }
  return out;
}

Tour alns_run(const Tour& tour, const TravelMatrices& mats, const ALNSParams& p, Rng& rng,
              ALNSTrace* trace) {
  check_params(p);
  Tour current = tour;
  double current_len = tour_length(current, mats);
  Tour best = current;
  double best_len = current_len;
  const int n = customers_in(tour);
  if (n < 2) {
    return best;
  }
  const int q = std::clamp(static_cast<int>(std::lround(p.destroy_fraction * n)), 1, n - 1);

  OperatorWeights destroy_w(destroy_ops.size());
  OperatorWeights repair_w(repair_ops.size());
  double temperature = p.accept_t0 * current_len;

  for (int iter = 0; iter < p.iterations; ++iter) {
    const std::size_t d = destroy_w.select(rng);
    const std::size_t r = repair_w.select(rng);
    Removal removal;
    switch (destroy_ops[d]) {
    case DestroyOp::random: removal = random_removal(current, q, rng); break;
    case DestroyOp::shaw: removal = shaw_removal(current, q, mats, rng, p.shaw_determinism); break;
    case DestroyOp::worst: removal = worst_removal(current, q, mats, rng, p.worst_determinism); break;
    }
    Tour candidate;
    switch (repair_ops[r]) {
    case RepairOp::greedy: candidate = greedy_insertion(removal.partial, removal.removed, mats); break;
    }
    const double cand_len = tour_length(candidate, mats);

    double score = 0.0;
    const double u = rng.uniform();
    if (cand_len < best_len - improvement_epsilon) {
      best = candidate;
      best_len = cand_len;
      current = std::move(candidate);
      current_len = cand_len;
      score = p.sigma_best;
    } else if (cand_len < current_len - improvement_epsilon) {
      current = std::move(candidate);
      current_len = cand_len;
      score = p.sigma_better;
    } else if (u < acceptance_probability(cand_len - current_len, temperature)) {
      current = std::move(candidate);
      current_len = cand_len;
      score = p.sigma_accepted;
    }
    destroy_w.credit(d, score);
    repair_w.credit(r, score);
    temperature *= p.accept_cooling;

    if ((iter + 1) % p.segment_length == 0) {
      destroy_w.end_segment(p.reaction);
      repair_w.end_segment(p.reaction);
      if (trace != nullptr) {
        trace->destroy_weights.push_back(destroy_w.weights());
      }
    }
    if (trace != nullptr) {
      trace->best.push_back(best_len);
      trace->current.push_back(current_len);
    }
  }
  return best;
}

} // namespace sidekick
