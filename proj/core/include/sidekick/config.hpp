#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sidekick/alns.hpp"
#include "sidekick/drone_scheduler.hpp"
#include "sidekick/local_search.hpp"
#include "sidekick/metaheuristics.hpp"
#include "sidekick/policy.hpp"

namespace sidekick {

enum class Constructor { nearest_neighbor, clarke_wright, sweep };
enum class Improver { none, sa, tabu, ga, vns, alns };
enum class Scheduler { none, greedy, beam, greedy_vns, policy_best_of_k, policy_beam };

Constructor parse_constructor(const std::string& name);
Improver parse_improver(const std::string& name);
Scheduler parse_scheduler(const std::string& name);
const char* to_string(Constructor c);
const char* to_string(Improver i);
const char* to_string(Scheduler s);

// Tunables shared by every method of an experiment.
struct SolverParams {
  LocalSearchOptions local_search;
  SAParams sa;
  TabuParams tabu;
  GAParams ga;
  VNSParams vns;
  ALNSParams alns;
  std::size_t beam_width = 16;
  AssignmentVNSParams assignment_vns;
  int policy_k = 32;
  std::size_t policy_beam_width = 8;
};

struct MethodSpec {
  std::string name;
  Constructor construct = Constructor::nearest_neighbor;
  Improver improve = Improver::none;
  bool local_search = true;
  Scheduler scheduler = Scheduler::greedy;
  std::optional<std::size_t> beam_width;
  std::optional<int> policy_k;
  std::optional<PolicyParams> policy;
};

struct ExperimentConfig {
  int customers = 50;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  OperationalParams params;
  std::vector<MethodSpec> methods;
  SolverParams solver;
  TrainConfig train;
  // Method the others are tested against; empty means no Wilcoxon tests.
  std::string reference;
  std::filesystem::path output_dir = "results";
  int jobs = 1;
  bool record_wall_time = false;
  // Exact text the config was loaded from, kept for provenance.
  std::string source_text;
};

// Validates seeds, unique method names and every parameter block.
void check_config(const ExperimentConfig& cfg);

// Relative checkpoint paths resolve against `base_dir`.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig read_config(const std::filesystem::path& path);

// Only the "train" block (plus instance parameters); checkpoints are not
// loaded, so this works before any policy exists.
TrainConfig read_train_config(const std::filesystem::path& path);

} // namespace sidekick
