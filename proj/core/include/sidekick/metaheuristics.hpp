#pragma once

#include <map>
#include <utility>
#include <vector>

#include "sidekick/instance.hpp"
#include "sidekick/local_search.hpp"
#include "sidekick/moves.hpp"
#include "sidekick/rng.hpp"
#include "sidekick/simulator.hpp"

namespace sidekick {

// Optional per-iteration diagnostics recorded by the searches.
struct SearchTrace {
  std::vector<double> best;        // best-seen length after each iteration
  std::vector<double> current;     // incumbent length after each iteration
  std::vector<int> neighborhood;   // VNS shake size used at each iteration
};

struct SAParams {
  double initial_temperature = 1.0;  // multiplied by the mean edge length of the input tour
  double cooling = 0.995;
  int iters_per_temp = 50;
  double min_temperature = 1e-4;
};

struct TabuParams {
  int tenure = 15;
  int max_iters = 2000;
};

struct GAParams {
  int pop_size = 50;
  int generations = 200;
  double crossover_rate = 0.9;
  double mutation_rate = 0.2;
  int elite = 2;
  int cleanup_moves = 5;  // 2-opt move cap for the child clean-up
};

struct VNSParams {
  int k_max = 5;
  int max_iters = 500;
};

void check_params(const SAParams& p);
void check_params(const TabuParams& p);
void check_params(const GAParams& p);
void check_params(const VNSParams& p);

// Metropolis acceptance probability for a length change `delta` at temperature `t`.
double acceptance_probability(double delta, double temperature);

Tour simulated_annealing(const Tour& tour, const TravelMatrices& mats, const SAParams& p, Rng& rng,
                         SearchTrace* trace = nullptr);

// Short-term memory over undirected edges. Removing an edge forbids
// re-adding it for `tenure` iterations.
class TabuMemory {
public:
  void forbid(NodeId a, NodeId b, int until_iter);
  bool is_forbidden(NodeId a, NodeId b, int iter) const;
  // True if `move` would re-create a forbidden edge.
  bool is_tabu(const Tour& tour, const TourMove& move, int iter) const;

private:
  std::map<std::pair<NodeId, NodeId>, int> expiry_;
};

// Tabu moves are admissible only when they beat the best length seen so far.
bool tabu_admissible(bool tabu, double resulting_length, double best_length);

Tour tabu_search(const Tour& tour, const TravelMatrices& mats, const TabuParams& p, Rng& rng,
                 SearchTrace* trace = nullptr);

// OX on customer sequences: keep parent_a[cut_lo..cut_hi], fill the other
// positions with parent_b's remaining genes in order starting after cut_hi.
std::vector<NodeId> ordered_crossover(const std::vector<NodeId>& parent_a,
                                      const std::vector<NodeId>& parent_b, std::size_t cut_lo,
                                      std::size_t cut_hi);

Tour genetic_algorithm(const Instance& inst, const TravelMatrices& mats, const GAParams& p,
                       Rng& rng, SearchTrace* trace = nullptr);

Tour vns(const Tour& tour, const TravelMatrices& mats, const VNSParams& p, Rng& rng,
         SearchTrace* trace = nullptr);

} // namespace sidekick
