#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sidekick {

// One (method, seed) outcome of a pipeline run.
struct RunRecord {
  std::string method;
  std::uint64_t seed = 0;
  double makespan = 0.0;
  double truck_travel = 0.0;
  double total_wait = 0.0;
  int n_sorties = 0;
  double wall_time = 0.0;
  // Set when a stage threw; the numeric fields are then meaningless.
  std::optional<std::string> failed_stage;
  std::string error;

  bool ok() const { return !failed_stage.has_value(); }
};

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // sample sd (n - 1) / sqrt(n); 0 for a single value
};

MeanSe mean_and_se(std::span<const double> values);

struct MethodAggregate {
  std::string method;
  int count = 0;
  double mean = 0.0;
  double se = 0.0;
  double min = 0.0;
  double max = 0.0;
  bool single_seed = false;
};

// Per-method makespan summary over successful records, in first-seen order.
std::vector<MethodAggregate> aggregate(std::span<const RunRecord> records);

struct WilcoxonOptions {
  // Also compute the exact permutation p-value (small samples). The normal
  // approximation is always reported in `p`.
  bool exact = false;
};

struct WilcoxonResult {
  int n_pairs = 0;  // non-zero differences
  double w_plus = 0.0;
  double w_minus = 0.0;
  double z = 0.0;
  double p = 1.0;
  double r = 0.0;  // rank-biserial (W+ - W-) / (W+ + W-)
  bool no_effect = false;
  std::optional<double> exact_p;
};

// Paired signed-rank test on d = x - y. Zero differences are dropped; ties
// get average ranks; z uses a 0.5 continuity correction toward the mean.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                    const WilcoxonOptions& options = {});

// Two-sided standard normal tail probability 2 * (1 - Phi(|z|)).
double two_sided_normal_p(double z);

struct PairedTest {
  std::string method;
  std::string reference;
  WilcoxonResult result;
};

// Pairs the successful records of `method` and `reference` by seed.
PairedTest paired_test(std::span<const RunRecord> records, const std::string& method,
                       const std::string& reference, const WilcoxonOptions& options = {});

} // namespace sidekick
