#pragma once

#include <vector>

#include "sidekick/config.hpp"
#include "sidekick/instance.hpp"
#include "sidekick/simulator.hpp"
#include "sidekick/stats.hpp"

namespace sidekick {

struct PipelineOutcome {
  RunRecord record;
  Solution solution;  // empty when the run failed
  SimReport report;
};

// construct / improve -> local search -> schedule sorties -> simulate.
// Stage failures are reported in the record, never thrown. The random stream
// is derived from (instance seed, method name).
PipelineOutcome run_pipeline(const MethodSpec& method, const SolverParams& solver,
                             const Instance& inst, bool record_wall_time = false);

struct BatchResult {
  std::vector<Instance> instances;       // one per seed, shared by all methods
  std::vector<PipelineOutcome> outcomes;  // method-major, seed-minor
};

// Runs methods x seeds on `jobs` worker threads. Output order and contents do
// not depend on `jobs`.
BatchResult run_batch(const ExperimentConfig& cfg, int jobs);

} // namespace sidekick
