#pragma once

#include <array>
#include <limits>
#include <vector>

#include "sidekick/instance.hpp"
#include "sidekick/metaheuristics.hpp"
#include "sidekick/rng.hpp"
#include "sidekick/simulator.hpp"

namespace sidekick {

struct ALNSParams {
  int iterations = 2000;
  double destroy_fraction = 0.2;
  int segment_length = 50;
  double reaction = 0.2;
  double sigma_best = 5.0;
  double sigma_better = 2.0;
  double sigma_accepted = 1.0;
  // Acceptance temperature starts at accept_t0 * (initial tour length).
  double accept_t0 = 0.02;
  double accept_cooling = 0.998;
  double shaw_determinism = 6.0;
  double worst_determinism = 3.0;
};

void check_params(const ALNSParams& p);

struct Removal {
  Tour partial;
  std::vector<NodeId> removed;
};

Removal random_removal(const Tour& tour, int q, Rng& rng);

// Relatedness of two customers; plain distance, smaller is more related.
double relatedness(NodeId i, NodeId j, const TravelMatrices& mats);

// Each step ranks the customers still in the tour by relatedness to a random
// already-removed one and takes rank floor(y^determinism * size), y ~ U[0,1).
Removal shaw_removal(const Tour& tour, int q, const TravelMatrices& mats, Rng& rng,
                     double determinism = 6.0);

// Detour d(prev,i) + d(i,next) - d(prev,next) of the customer at position p.
double removal_gain(const Tour& tour, std::size_t p, const TravelMatrices& mats);

// Same rank-selection scheme over customers sorted by decreasing detour.
// determinism = +inf always removes the current worst customer.
Removal worst_removal(const Tour& tour, int q, const TravelMatrices& mats, Rng& rng,
                      double determinism = 3.0);

// Inserts the globally cheapest (customer, position) pair until none remain.
// Ties: earlier position, then earlier entry in `removed`.
Tour greedy_insertion(const Tour& partial, const std::vector<NodeId>& removed,
                      const TravelMatrices& mats);

enum class DestroyOp { random, shaw, worst };
enum class RepairOp { greedy };

inline constexpr std::array<DestroyOp, 3> destroy_ops = {DestroyOp::random, DestroyOp::shaw,
                                                         DestroyOp::worst};
inline constexpr std::array<RepairOp, 1> repair_ops = {RepairOp::greedy};

// Roulette-wheel weights with segment-wise smoothing:
// w <- (1 - reaction) * w + reaction * score / uses for every operator used.
class OperatorWeights {
public:
  explicit OperatorWeights(std::size_t count);

  std::size_t select(Rng& rng) const;
  void credit(std::size_t op, double score);
  void end_segment(double reaction);

  const std::vector<double>& weights() const { return weights_; }
  std::vector<double> probabilities() const;

  static constexpr double min_weight = 1e-6;

private:
  std::vector<double> weights_;
  std::vector<double> scores_;
  std::vector<int> uses_;
};

struct ALNSTrace {
  std::vector<double> best;
  std::vector<double> current;
  std::vector<std::vector<double>> destroy_weights;  // after each segment update
};

Tour alns_run(const Tour& tour, const TravelMatrices& mats, const ALNSParams& p, Rng& rng,
              ALNSTrace* trace = nullptr);

} // namespace sidekick
