#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sidekick/config.hpp"
#include "sidekick/pipeline.hpp"
#include "sidekick/stats.hpp"

namespace sidekick {

inline constexpr const char* runs_csv_header =
  "method,seed,makespan,truck_travel,wait,n_sorties,wall_time";
inline constexpr const char* aggregate_csv_header = "method,n,mean,se,min,max";
inline constexpr const char* tests_csv_header =
  "method,reference,n_pairs,w_plus,w_minus,z,p,r,exact_p,note";

std::string format_runs_csv(std::span<const RunRecord> records);
std::vector<RunRecord> parse_runs_csv(const std::string& text);
std::vector<RunRecord> read_runs_csv(const std::filesystem::path& path);

std::string format_aggregate_csv(std::span<const MethodAggregate> aggregates);
std::string format_tests_csv(std::span<const PairedTest> tests);

// Plotting bundle for one run: coordinates, solution, report and event log.
std::string format_plot_bundle(const Instance& inst, const PipelineOutcome& outcome);
std::string format_aggregate_bundle(std::span<const MethodAggregate> aggregates);

// Tests every method against `reference` (if it is set and present).
std::vector<PairedTest> reference_tests(std::span<const RunRecord> records,
                                        const std::string& reference);

struct EmittedFiles {
  std::filesystem::path runs;
  std::filesystem::path aggregate;
  std::filesystem::path tests;
  std::filesystem::path failures;
  std::filesystem::path bundle;
  std::vector<std::filesystem::path> plot_bundles;
};

// Writes runs.csv, aggregate.csv, tests.csv, failures.csv, bundle.json and
// plots/*.json under `dir`. I/O failures throw with the offending path.
EmittedFiles emit_results(const ExperimentConfig& cfg, const BatchResult& batch,
                          const std::filesystem::path& dir);

// File-system safe slug of a method name.
std::string slugify(const std::string& name);

} // namespace sidekick
