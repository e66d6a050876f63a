#include "sidekick/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "json_util.hpp"
#include "sidekick/construct.hpp"
#include "sidekick/errors.hpp"
#include "sidekick/local_search.hpp"

namespace sidekick {

namespace {

// Mean truck leg time of the remaining tour. Time features are divided by it
// so that weights carry over between instance sizes.
double time_scale(const ScheduleState& state, const TravelMatrices& mats) {
  const Tour& t = state.tour;
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < t.size(); ++p) {
    total += mats.truck_time(t[p], t[p + 1]);
  }
  const double mean = total / static_cast<double>(std::max<std::size_t>(1, t.size() - 1));
  return mean > 0.0 ? mean : 1.0;
}

FeatureVector features_scaled(const ScheduleState& state, const Sortie& s, const TravelMatrices& mats,
                              const Instance& inst, double scale) {
  const Tour& t = state.tour;
  const auto q = static_cast<std::size_t>(
    std::find(t.begin() + static_cast<long>(state.cursor) + 1, t.end() - 1, s.customer) - t.begin());
  const double flight = sortie_flight_time(s.launch, s.customer, s.rendezvous, mats, inst);
  const double detour = mats.truck_time(t[q - 1], t[q]) + mats.truck_time(t[q], t[q + 1]) -
                        mats.truck_time(t[q - 1], t[q + 1]);
  const double position =
    static_cast<double>(state.cursor) / static_cast<double>(std::max<std::size_t>(1, t.size() - 1));
  return {
    flight / scale,
    (inst.params.endurance - flight) / scale,
    mats.truck_time(s.launch, s.rendezvous) / scale,
    detour / scale,
    position,
    std::max(0.0, state.drone_ready - state.clock) / scale,
    1.0,
  };
}

} // namespace

FeatureVector sortie_features(const ScheduleState& state, const Sortie& s,
                              const TravelMatrices& mats, const Instance& inst) {
  return features_scaled(state, s, mats, inst, time_scale(state, mats));
}

ActionSet enumerate_actions(const ScheduleState& state, const TravelMatrices& mats,
                            const Instance& inst) {
  ActionSet actions;
  actions.sorties = candidate_sorties(state, mats, inst);
  actions.features.reserve(actions.sorties.size() + 1);
  actions.features.push_back(FeatureVector{});
  const double scale = time_scale(state, mats);
  for (const Sortie& s : actions.sorties) {
    actions.features.push_back(features_scaled(state, s, mats, inst, scale));
  }
  return actions;
}

double dot(const FeatureVector& a, const FeatureVector& b) {
  double total = 0.0;
  for (std::size_t i = 0; i < feature_count; ++i) {
    total += a[i] * b[i];
  }
  return total;
}

std::vector<double> masked_softmax(std::span<const double> scores, const std::vector<bool>& mask,
                                   double temperature) {
  if (scores.size() != mask.size()) {
    throw std::invalid_argument("masked_softmax: scores and mask differ in size");
  }
  if (!(temperature > 0.0)) {
    throw std::invalid_argument("masked_softmax: temperature must be positive");
  }
  std::vector<double> probs(scores.size(), 0.0);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (mask[i]) {
      top = std::max(top, scores[i] / temperature);
    }
  }
  if (!std::isfinite(top)) {
    throw std::invalid_argument("masked_softmax: no admissible action");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (mask[i]) {
      probs[i] = std::exp(scores[i] / temperature - top);
      total += probs[i];
    }
  }
  for (double& p : probs) {
    p /= total;
  }
  return probs;
}

namespace {

std::vector<double> scores_of(const std::vector<FeatureVector>& features, const PolicyParams& policy) {
  std::vector<double> scores(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    scores[i] = dot(policy.theta, features[i]);
  }
  return scores;
}

// Log-probabilities via log-sum-exp; every action is admissible here because
// infeasible sorties never enter the action set.
std::vector<double> log_softmax(const std::vector<FeatureVector>& features, const PolicyParams& policy) {
  std::vector<double> z = scores_of(features, policy);
  double top = -std::numeric_limits<double>::infinity();
  for (double& v : z) {
    v /= policy.temperature;
    top = std::max(top, v);
  }
  double total = 0.0;
  for (double v : z) {
    total += std::exp(v - top);
  }
  const double lse = top + std::log(total);
  for (double& v : z) {
    v -= lse;
  }
  return z;
}

FeatureVector& axpy(FeatureVector& y, double a, const FeatureVector& x) {
  for (std::size_t i = 0; i < feature_count; ++i) {
    y[i] += a * x[i];
  }
  return y;
}

} // namespace

std::vector<double> action_probabilities(const ActionSet& actions, const PolicyParams& policy) {
  const std::vector<double> scores = scores_of(actions.features, policy);
  return masked_softmax(scores, std::vector<bool>(scores.size(), true), policy.temperature);
}

Rollout rollout(const Tour& tour, const TravelMatrices& mats, const Instance& inst,
                const PolicyParams& policy, DecodeMode mode, Rng* rng) {
  if (mode == DecodeMode::sample && rng == nullptr) {
    throw std::invalid_argument("rollout: sampling needs a random stream");
  }
  Rollout out;
  ScheduleState state = initial_state(tour);
  while (!state.done()) {
    ActionSet actions = enumerate_actions(state, mats, inst);
    const std::vector<double> probs = action_probabilities(actions, policy);
    std::size_t pick = 0;
    if (mode == DecodeMode::greedy) {
      pick = static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
    } else {
      double u = rng->uniform();
      pick = probs.size() - 1;
      for (std::size_t a = 0; a < probs.size(); ++a) {
        u -= probs[a];
        if (u < 0.0) {
          pick = a;
          break;
        }
      }
      while (probs[pick] == 0.0) {
        --pick;
      }
    }
    out.log_prob += std::log(probs[pick]);
    const Sortie* s = pick == 0 ? nullptr : &actions.sorties[pick - 1];
    state = advance(state, s, mats, inst);
    out.steps.push_back({std::move(actions.features), pick});
  }
  out.solution = state.solution();
  out.makespan = simulate(out.solution, mats, inst).makespan;
  return out;
}

double trajectory_log_prob(const Rollout& r, const PolicyParams& policy) {
  double total = 0.0;
  for (const auto& step : r.steps) {
    total += log_softmax(step.features, policy)[step.action];
  }
  return total;
}

FeatureVector trajectory_log_prob_gradient(const Rollout& r, const PolicyParams& policy) {
  FeatureVector grad{};
  const double inv_t = 1.0 / policy.temperature;
  for (const auto& step : r.steps) {
    const std::vector<double> lp = log_softmax(step.features, policy);
    axpy(grad, inv_t, step.features[step.action]);
    for (std::size_t b = 0; b < lp.size(); ++b) {
      axpy(grad, -inv_t * std::exp(lp[b]), step.features[b]);
    }
  }
  return grad;
}

double trajectory_entropy(const Rollout& r, const PolicyParams& policy) {
  double total = 0.0;
  for (const auto& step : r.steps) {
    for (double lp : log_softmax(step.features, policy)) {
      total -= std::exp(lp) * lp;
    }
  }
  return total;
}

FeatureVector trajectory_entropy_gradient(const Rollout& r, const PolicyParams& policy) {
  FeatureVector grad{};
  const double inv_t = 1.0 / policy.temperature;
  for (const auto& step : r.steps) {
    const std::vector<double> lp = log_softmax(step.features, policy);
    double entropy = 0.0;
    for (double v : lp) {
      entropy -= std::exp(v) * v;
    }
    // dH/dz_b = -p_b (log p_b + H)
    for (std::size_t b = 0; b < lp.size(); ++b) {
      axpy(grad, -inv_t * std::exp(lp[b]) * (lp[b] + entropy), step.features[b]);
    }
  }
  return grad;
}

double surrogate_objective(std::span<const Rollout> samples, std::span<const double> advantages,
                           const PolicyParams& policy, double entropy_coef) {
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    total += advantages[i] * trajectory_log_prob(samples[i], policy) +
             entropy_coef * trajectory_entropy(samples[i], policy);
  }
  return total / static_cast<double>(samples.size());
}

FeatureVector surrogate_gradient(std::span<const Rollout> samples,
                                 std::span<const double> advantages, const PolicyParams& policy,
                                 double entropy_coef) {
  FeatureVector grad{};
  const double inv_n = 1.0 / static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    axpy(grad, advantages[i] * inv_n, trajectory_log_prob_gradient(samples[i], policy));
    if (entropy_coef != 0.0) {
      axpy(grad, entropy_coef * inv_n, trajectory_entropy_gradient(samples[i], policy));
    }
  }
  return grad;
}

void check_config(const TrainConfig& cfg) {
  if (cfg.batch_size < 1 || cfg.steps < 0 || cfg.customers < 1) {
    throw ConfigError("training needs batch_size >= 1, steps >= 0, customers >= 1");
  }
  if (!(cfg.learning_rate > 0.0) || !(cfg.grad_clip > 0.0) || cfg.entropy_coef < 0.0) {
    throw ConfigError("training needs learning_rate > 0, grad_clip > 0, entropy_coef >= 0");
  }
}

TrainingCase make_training_case(int customers, std::uint64_t seed, const OperationalParams& params) {
  Instance inst = generate_uniform_instance(customers, seed, params);
  TravelMatrices mats(inst);
  Tour tour = local_search(nearest_neighbor(inst, mats), mats);
  return {std::move(inst), std::move(mats), std::move(tour)};
}

PolicyParams scst_step(std::span<const TrainingCase> batch, const PolicyParams& policy,
                       const TrainConfig& cfg, Rng& rng, StepDiagnostics* diagnostics) {
  check_config(cfg);
  if (batch.empty()) {
    throw ConfigError("scst_step needs a non-empty batch");
  }
  std::vector<Rollout> samples;
  std::vector<double> advantages;
  samples.reserve(batch.size());
  StepDiagnostics diag;
  for (const TrainingCase& c : batch) {
    Rollout sampled = rollout(c.tour, c.mats, c.inst, policy, DecodeMode::sample, &rng);
    const Rollout baseline = rollout(c.tour, c.mats, c.inst, policy, DecodeMode::greedy, nullptr);
    // reward = -makespan, so (r_sample - r_greedy) = greedy - sample
    advantages.push_back(baseline.makespan - sampled.makespan);
    diag.mean_sample_makespan += sampled.makespan;
    diag.mean_greedy_makespan += baseline.makespan;
    diag.entropy += trajectory_entropy(sampled, policy);
    samples.push_back(std::move(sampled));
  }
  FeatureVector grad = surrogate_gradient(samples, advantages, policy, cfg.entropy_coef);

  double norm = 0.0;
  for (double g : grad) {
    norm += g * g;
  }
  norm = std::sqrt(norm);
  if (!std::isfinite(norm)) {
    throw TrainingError("non-finite policy gradient (mean advantage " +
                        std::to_string(std::accumulate(advantages.begin(), advantages.end(), 0.0) /
                                       static_cast<double>(advantages.size())) +
                        ")");
  }
  const double scale = norm > cfg.grad_clip ? cfg.grad_clip / norm : 1.0;
  PolicyParams next = policy;
  axpy(next.theta, cfg.learning_rate * scale, grad);

  if (diagnostics != nullptr) {
    const double n = static_cast<double>(batch.size());
    diag.mean_sample_makespan /= n;
    diag.mean_greedy_makespan /= n;
    diag.entropy /= n;
    diag.mean_advantage = std::accumulate(advantages.begin(), advantages.end(), 0.0) / n;
    diag.grad_norm = norm;
    *diagnostics = diag;
  }
  return next;
}

TrainResult train_policy(const TrainConfig& cfg, const PolicyParams& start) {
  check_config(cfg);
  TrainResult result{start, {}};
  Rng rng(mix_seed(cfg.seed, 0x5c57));
  std::uint64_t instance_counter = 0;
  for (int step = 0; step < cfg.steps; ++step) {
    std::vector<TrainingCase> batch;
    batch.reserve(static_cast<std::size_t>(cfg.batch_size));
    for (int i = 0; i < cfg.batch_size; ++i) {
      batch.push_back(make_training_case(cfg.customers, mix_seed(cfg.seed, ++instance_counter),
                                         cfg.params));
    }
    StepDiagnostics diag;
    result.policy = scst_step(batch, result.policy, cfg, rng, &diag);
    result.history.push_back(diag);
  }
  return result;
}

Solution best_of_k_decode(const Tour& tour, const TravelMatrices& mats, const Instance& inst,
                          const PolicyParams& policy, int k, std::uint64_t seed) {
  if (k < 1) {
    throw ConfigError("best-of-K decoding needs K >= 1");
  }
  Rollout best = rollout(tour, mats, inst, policy, DecodeMode::greedy, nullptr);
  for (int i = 0; i < k; ++i) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    Rollout r = rollout(tour, mats, inst, policy, DecodeMode::sample, &rng);
    if (r.makespan < best.makespan) {
      best = std::move(r);
    }
  }
  return best.solution;
}

Solution masked_beam_decode(const Tour& tour, const TravelMatrices& mats, const Instance& inst,
                            const PolicyParams& policy, std::size_t width) {
  if (width < 1) {
    throw ConfigError("masked beam decoding needs width >= 1");
  }
  struct Beam {
    ScheduleState state;
    double log_prob;
  };
  std::vector<Beam> beam{{initial_state(tour), 0.0}};
  std::vector<Beam> completed;
  while (!beam.empty()) {
    std::vector<Beam> children;
    for (const Beam& b : beam) {
      if (b.state.done()) {
        completed.push_back(b);
        continue;
      }
      const ActionSet actions = enumerate_actions(b.state, mats, inst);
      const std::vector<double> probs = action_probabilities(actions, policy);
      for (std::size_t a = 0; a < actions.size(); ++a) {
        const Sortie* s = a == 0 ? nullptr : &actions.sorties[a - 1];
        children.push_back({advance(b.state, s, mats, inst), b.log_prob + std::log(probs[a])});
      }
    }
    std::stable_sort(children.begin(), children.end(),
                     [](const Beam& x, const Beam& y) { return x.log_prob > y.log_prob; });
    if (children.size() > width) {
      children.resize(width);
    }
    beam = std::move(children);
  }

  std::optional<Solution> best;
  double best_makespan = 0.0;
  for (const Beam& b : completed) {
    Solution sol = b.state.solution();
    const double m = simulate(sol, mats, inst).makespan;
    if (!best || m < best_makespan) {
      best = std::move(sol);
      best_makespan = m;
    }
  }
  return *best;
}

PolicyParams parse_policy(const std::string& text) {
  using detail::json;
  const json doc = detail::parse_json(text, "policy");
  PolicyParams p;
  const json& features = detail::require(doc, "features");
  for (std::size_t i = 0; i < feature_count; ++i) {
    p.theta[i] = detail::require_number(features, std::string(feature_names[i]));
  }
  p.temperature = detail::value_or<double>(doc, "temperature", 1.0);
  if (!(p.temperature > 0.0)) {
    throw SchemaError("'temperature' must be positive", "temperature");
  }
  for (double w : p.theta) {
    if (!std::isfinite(w)) {
      throw SchemaError("policy weights must be finite", "features");
    }
  }
  return p;
}

std::string format_policy(const PolicyParams& policy) {
  detail::ordered_json doc;
  detail::ordered_json features;
  for (std::size_t i = 0; i < feature_count; ++i) {
    features[std::string(feature_names[i])] = policy.theta[i];
  }
  doc["features"] = std::move(features);
  doc["temperature"] = policy.temperature;
  return doc.dump(2) + "\n";
}

PolicyParams read_policy(const std::filesystem::path& path) {
  return parse_policy(detail::read_text_file(path));
}

void write_policy(const PolicyParams& policy, const std::filesystem::path& path) {
  detail::write_text_file(path, format_policy(policy));
}

} // namespace sidekick
