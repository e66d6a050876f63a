#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "sidekick/config.hpp"
#include "sidekick/errors.hpp"
#include "sidekick/instance.hpp"
#include "sidekick/pipeline.hpp"
#include "sidekick/policy.hpp"
#include "sidekick/results.hpp"
#include "sidekick/simulator.hpp"
#include "sidekick/stats.hpp"

namespace fs = std::filesystem;
using namespace sidekick;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> jobs;
};

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    throw std::runtime_error("cannot write " + path.string());
  }
}

ExperimentConfig load(const Globals& g) {
  if (g.config.empty()) {
    throw ConfigError("--config is required");
  }
  ExperimentConfig cfg = read_config(g.config);
  if (g.seed) {
    cfg.seeds = {*g.seed};
  }
  if (g.jobs) {
    cfg.jobs = *g.jobs;
  }
  if (!g.out.empty()) {
    cfg.output_dir = g.out;
  }
  check_config(cfg);
  return cfg;
}

void print_aggregates(const std::vector<MethodAggregate>& agg) {
  for (const MethodAggregate& a : agg) {
    std::printf("%-28s n=%d  mean=%.3f  se=%.3f  min=%.3f  max=%.3f%s\n", a.method.c_str(),
                a.count, a.mean, a.se, a.min, a.max, a.single_seed ? "  (single seed)" : "");
  }
}

void print_tests(const std::vector<PairedTest>& tests) {
  for (const PairedTest& t : tests) {
    const WilcoxonResult& w = t.result;
    if (w.no_effect) {
      std::printf("%s vs %s: no effect measurable\n", t.method.c_str(), t.reference.c_str());
      continue;
    }
    std::printf("%s vs %s: m=%d  z=%.3f  p=%.3f  r=%.3f", t.method.c_str(), t.reference.c_str(),
                w.n_pairs, w.z, w.p, w.r);
    if (w.exact_p) {
      std::printf("  exact_p=%.4f", *w.exact_p);
    }
    std::printf("\n");
  }
}

int cmd_generate(const Globals& g, int n, std::uint64_t count) {
  OperationalParams params;
  if (!g.config.empty()) {
    const ExperimentConfig cfg = read_config(g.config);
    params = cfg.params;
    if (n <= 0) {
      n = cfg.customers;
    }
  }
  if (n <= 0) {
    n = 50;
  }
  const std::uint64_t first = g.seed.value_or(1);
  const fs::path out = g.out.empty() ? fs::path("instances") : fs::path(g.out);
  for (std::uint64_t s = first; s < first + count; ++s) {
    const fs::path path = out / ("n" + std::to_string(n) + "_seed" + std::to_string(s) + ".json");
    write_instance(generate_uniform_instance(n, s, params), path);
    std::cout << path.string() << "\n";
  }
  return 0;
}

int cmd_run(const Globals& g, const std::string& method_name, const std::string& instance_path) {
  const ExperimentConfig cfg = load(g);
  const MethodSpec* method = &cfg.methods.front();
  if (!method_name.empty()) {
    method = nullptr;
    for (const MethodSpec& m : cfg.methods) {
      if (m.name == method_name) {
        method = &m;
      }
    }
    if (method == nullptr) {
      throw ConfigError("no method named '" + method_name + "' in the config");
    }
  }
  const Instance inst = instance_path.empty()
                          ? generate_uniform_instance(cfg.customers, cfg.seeds.front(), cfg.params)
                          : read_instance(instance_path);
  const PipelineOutcome out = run_pipeline(*method, cfg.solver, inst, cfg.record_wall_time);
  if (!out.record.ok()) {
    std::cerr << "stage '" << *out.record.failed_stage << "' failed: " << out.record.error << "\n";
    return 1;
  }
  std::printf("%s seed=%llu makespan=%.4f truck=%.4f wait=%.4f sorties=%d\n",
              out.record.method.c_str(), static_cast<unsigned long long>(inst.seed),
              out.record.makespan, out.record.truck_travel, out.record.total_wait,
              out.record.n_sorties);
  if (!g.out.empty()) {
    const fs::path dir = g.out;
    write_solution(out.solution, dir / "solution.json");
    write_file(dir / "report.json", format_report(out.report));
    write_file(dir / "plot.json", format_plot_bundle(inst, out));
  }
  return 0;
}

int cmd_batch(const Globals& g) {
  const ExperimentConfig cfg = load(g);
  const BatchResult batch = run_batch(cfg, cfg.jobs);
  const EmittedFiles files = emit_results(cfg, batch, cfg.output_dir);

  std::vector<RunRecord> records;
  int failed = 0;
  for (const PipelineOutcome& o : batch.outcomes) {
    records.push_back(o.record);
    if (!o.record.ok()) {
      ++failed;
      std::cerr << o.record.method << " seed " << o.record.seed << ": stage '"
                << *o.record.failed_stage << "' failed: " << o.record.error << "\n";
    }
  }
  print_aggregates(aggregate(records));
  print_tests(reference_tests(records, cfg.reference));
  std::cout << "results written to " << cfg.output_dir.string() << "\n";
  return failed == 0 ? 0 : 1;
}

int cmd_train(const Globals& g, std::optional<int> steps) {
  TrainConfig tc;
  if (!g.config.empty()) {
    tc = read_train_config(g.config);
  }
  if (g.seed) {
    tc.seed = *g.seed;
  }
  if (steps) {
    tc.steps = *steps;
  }
  const TrainResult res = train_policy(tc);
  for (std::size_t i = 0; i < res.history.size(); ++i) {
    if (i % 50 == 0 || i + 1 == res.history.size()) {
      const StepDiagnostics& d = res.history[i];
      std::printf("step %4zu  sample=%.4f  greedy=%.4f  |g|=%.4f  H=%.3f\n", i + 1,
                  d.mean_sample_makespan, d.mean_greedy_makespan, d.grad_norm, d.entropy);
    }
  }
  const fs::path out = g.out.empty() ? fs::path("policy.json") : fs::path(g.out);
  write_policy(res.policy, out);
  std::cout << "policy written to " << out.string() << "\n";
  return 0;
}

int cmd_stats(const Globals& g, const std::string& runs, const std::string& reference, bool exact) {
  const std::vector<RunRecord> records = read_runs_csv(runs);
  const auto agg = aggregate(records);
  std::vector<PairedTest> tests;
  if (!reference.empty()) {
    WilcoxonOptions opts;
    opts.exact = exact;
    for (const MethodAggregate& a : agg) {
      if (a.method != reference) {
        tests.push_back(paired_test(records, a.method, reference, opts));
      }
    }
  }
  print_aggregates(agg);
  print_tests(tests);
  if (!g.out.empty()) {
    write_file(fs::path(g.out) / "aggregate.csv", format_aggregate_csv(agg));
    write_file(fs::path(g.out) / "tests.csv", format_tests_csv(tests));
  }
  return 0;
}

int cmd_export_plots(const Globals& g) {
  const ExperimentConfig cfg = load(g);
  const BatchResult batch = run_batch(cfg, cfg.jobs);
  const fs::path dir = g.out.empty() ? cfg.output_dir / "plots" : fs::path(g.out);
  std::vector<RunRecord> records;
  for (std::size_t i = 0; i < batch.outcomes.size(); ++i) {
    const PipelineOutcome& o = batch.outcomes[i];
    records.push_back(o.record);
    if (!o.record.ok()) {
      continue;
    }
    const Instance& inst = batch.instances[i % batch.instances.size()];
    const fs::path p = dir / (slugify(o.record.method) + "_seed" + std::to_string(o.record.seed) + ".json");
    write_file(p, format_plot_bundle(inst, o));
    std::cout << p.string() << "\n";
  }
  write_file(dir / "aggregate.json", format_aggregate_bundle(aggregate(records)));
  std::cout << (dir / "aggregate.json").string() << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truck-and-drone routing solvers and experiment harness"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "Experiment config (JSON)");
  app.add_option("--seed", g.seed, "Seed override");
  app.add_option("--out", g.out, "Output file or directory");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);

  int n = 0;
  std::uint64_t count = 1;
  auto* generate = app.add_subcommand("generate", "Write uniform random instances");
  generate->add_option("-n,--customers", n, "Customer count (default: config or 50)");
  generate->add_option("--count", count, "Number of consecutive seeds")->check(CLI::PositiveNumber);

  std::string method;
  std::string instance;
  auto* run = app.add_subcommand("run", "Run one method of the config on one instance");
  run->add_option("--method", method, "Method name (default: first in config)");
  run->add_option("--instance", instance, "Instance file (default: generated from --seed)");

  auto* batch = app.add_subcommand("batch", "Run every method on every seed and write results");

  std::optional<int> steps;
  auto* train = app.add_subcommand("train", "Train the sortie policy");
  train->add_option("--steps", steps, "Override the number of training steps");

  std::string runs;
  std::string reference;
  bool exact = false;
  auto* stats = app.add_subcommand("stats", "Aggregate and test a runs.csv");
  stats->add_option("--runs", runs, "runs.csv to read")->required();
  stats->add_option("--reference", reference, "Method the others are tested against");
  stats->add_flag("--exact", exact, "Also report the exact signed-rank p-value");

  auto* plots = app.add_subcommand("export-plots", "Run the config and write plotting bundles only");

  for (CLI::App* sub : {generate, run, batch, train, stats, plots}) {
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      return cmd_generate(g, n, count);
    }
    if (run->parsed()) {
      return cmd_run(g, method, instance);
    }
    if (batch->parsed()) {
      return cmd_batch(g);
    }
    if (train->parsed()) {
      return cmd_train(g, steps);
    }
    if (stats->parsed()) {
      return cmd_stats(g, runs, reference, exact);
    }
    if (plots->parsed()) {
      return cmd_export_plots(g);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
