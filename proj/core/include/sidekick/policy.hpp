#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sidekick/drone_scheduler.hpp"
#include "sidekick/instance.hpp"
#include "sidekick/rng.hpp"
#include "sidekick/simulator.hpp"

namespace sidekick {

// Learned drone scheduler: a linear scorer over per-sortie features, softmax
// over {no-op} + endurance-feasible candidates, trained with REINFORCE using
// the greedy rollout as the self-critical baseline.

inline constexpr std::size_t feature_count = 7;
// Time-valued features are divided by the mean truck leg time of the
// remaining tour, so a policy trained at one size transfers to another.
inline constexpr std::array<std::string_view, feature_count> feature_names = {
  "flight_time",      // F_k including handling
  "endurance_slack",  // E - F_k
  "truck_edge_time",  // truck time of the edge the sortie spans
  "detour_saved",     // truck time saved by skipping k
  "tour_position",    // cursor / (stops - 1)
  "launch_idle",      // time the truck would hold at launch for recharge
  "bias",             // 1 for sorties, 0 for the no-op
};

using FeatureVector = std::array<double, feature_count>;

struct PolicyParams {
  FeatureVector theta{};
  double temperature = 1.0;
};

// Action 0 is always the no-op (all-zero features); actions 1.. follow
// candidate_sorties(state) order.
struct ActionSet {
  std::vector<Sortie> sorties;
  std::vector<FeatureVector> features;

  std::size_t size() const { return features.size(); }
};

FeatureVector sortie_features(const ScheduleState& state, const Sortie& sortie,
                              const TravelMatrices& mats, const Instance& inst);

ActionSet enumerate_actions(const ScheduleState& state, const TravelMatrices& mats,
                            const Instance& inst);

double dot(const FeatureVector& a, const FeatureVector& b);

// softmax(scores / temperature) restricted to mask; masked entries get exactly 0.
std::vector<double> masked_softmax(std::span<const double> scores, const std::vector<bool>& mask,
                                   double temperature);

std::vector<double> action_probabilities(const ActionSet& actions, const PolicyParams& policy);

inline std::vector<double> action_distribution(const ScheduleState& state,
                                               const PolicyParams& policy,
                                               const TravelMatrices& mats, const Instance& inst) {
  return action_probabilities(enumerate_actions(state, mats, inst), policy);
}

enum class DecodeMode { sample, greedy };

struct TrajectoryStep {
  std::vector<FeatureVector> features;
  std::size_t action = 0;
};

struct Rollout {
  Solution solution;
  double makespan = 0.0;
  double log_prob = 0.0;
  std::vector<TrajectoryStep> steps;
};

// Greedy mode picks the lowest-index most probable action; `rng` may be null.
Rollout rollout(const Tour& tour, const TravelMatrices& mats, const Instance& inst,
                const PolicyParams& policy, DecodeMode mode, Rng* rng);

// sum_t log pi(a_t | s_t) and its gradient for a recorded trajectory.
double trajectory_log_prob(const Rollout& r, const PolicyParams& policy);
FeatureVector trajectory_log_prob_gradient(const Rollout& r, const PolicyParams& policy);

// sum_t H(pi(. | s_t)) over the states visited by a recorded trajectory.
double trajectory_entropy(const Rollout& r, const PolicyParams& policy);
FeatureVector trajectory_entropy_gradient(const Rollout& r, const PolicyParams& policy);

// (1/N) sum_i [advantage_i * log pi(traj_i) + entropy_coef * H(traj_i)] with the
// trajectories (and advantages) held fixed; its gradient is the SCST update.
double surrogate_objective(std::span<const Rollout> samples, std::span<const double> advantages,
                           const PolicyParams& policy, double entropy_coef);
FeatureVector surrogate_gradient(std::span<const Rollout> samples,
                                 std::span<const double> advantages, const PolicyParams& policy,
                                 double entropy_coef);

struct TrainConfig {
  int batch_size = 32;
  int steps = 500;
  double learning_rate = 0.01;
  double entropy_coef = 0.01;
  double grad_clip = 1.0;
  int customers = 20;
  OperationalParams params;
  std::uint64_t seed = 1;
};

void check_config(const TrainConfig& cfg);

// One training instance with the truck tour the policy schedules on.
struct TrainingCase {
  Instance inst;
  TravelMatrices mats;
  Tour tour;
};

// Uniform instance, nearest-neighbour tour cleaned by local search.
TrainingCase make_training_case(int customers, std::uint64_t seed, const OperationalParams& params);

struct StepDiagnostics {
  double mean_sample_makespan = 0.0;
  double mean_greedy_makespan = 0.0;
  double mean_advantage = 0.0;
  double grad_norm = 0.0;
  double entropy = 0.0;
};

// Samples one trajectory per case, baselines it with the greedy rollout,
// clips the surrogate gradient to grad_clip (global norm) and takes one
// ascent step. Throws TrainingError on a non-finite gradient.
PolicyParams scst_step(std::span<const TrainingCase> batch, const PolicyParams& policy,
                       const TrainConfig& cfg, Rng& rng, StepDiagnostics* diagnostics = nullptr);

struct TrainResult {
  PolicyParams policy;
  std::vector<StepDiagnostics> history;
};

TrainResult train_policy(const TrainConfig& cfg, const PolicyParams& start = {});

// Greedy rollout plus K samples; sample i draws from Rng(mix_seed(seed, i)),
// so the sample sets for increasing K are nested.
Solution best_of_k_decode(const Tour& tour, const TravelMatrices& mats, const Instance& inst,
                          const PolicyParams& policy, int k, std::uint64_t seed);

// Beam over trajectories ranked by cumulative log-probability; completed
// trajectories are ranked by their simulated makespan.
Solution masked_beam_decode(const Tour& tour, const TravelMatrices& mats, const Instance& inst,
                            const PolicyParams& policy, std::size_t width);

// Checkpoint: {"features": {"flight_time": w, ...}, "temperature": t}.
PolicyParams parse_policy(const std::string& text);
std::string format_policy(const PolicyParams& policy);
PolicyParams read_policy(const std::filesystem::path& path);
void write_policy(const PolicyParams& policy, const std::filesystem::path& path);

} // namespace sidekick
