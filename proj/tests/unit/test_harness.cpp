#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sidekick/config.hpp"
#include "sidekick/construct.hpp"
#include "sidekick/errors.hpp"
#include "sidekick/local_search.hpp"
#include "sidekick/pipeline.hpp"
#include "sidekick/results.hpp"
#include "sidekick/simulator.hpp"

using namespace sidekick;

namespace {

const char* small_config = R"({
  "instance": {"n": 12, "seeds": [1, 2, 3]},
  "params": {
    "alns": {"iterations": 200},
    "sa": {"iters_per_temp": 20},
    "assignment_vns": {"iterations": 20}
  },
  "methods": [
    {"name": "NN", "construct": "nn", "scheduler": "greedy"},
    {"name": "ALNS", "construct": "nn", "improve": "alns", "scheduler": "greedy"},
    {"name": "Beam", "construct": "sweep", "scheduler": "beam", "beam_width": 4}
  ],
  "reference": "NN"
})";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("sidekick_harness_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

} // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = parse_config(small_config);
  CHECK(cfg.customers == 12);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1, 2, 3});
  REQUIRE(cfg.methods.size() == 3);
  CHECK(cfg.methods[1].improve == Improver::alns);
  CHECK(cfg.methods[2].construct == Constructor::sweep);
  CHECK(cfg.methods[2].beam_width == std::size_t{4});
  CHECK(cfg.solver.alns.iterations == 200);
  CHECK(cfg.reference == "NN");
  CHECK(cfg.source_text == small_config);
  CHECK_FALSE(cfg.record_wall_time);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("{\"methods\": [{\"name\": \"a\"}, {\"name\": \"a\"}]}"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("{\"instance\": {\"seeds\": []}, \"methods\": [{\"name\": \"a\"}]}"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("{\"methods\": []}"), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"methods\": [{\"name\": \"a\", \"scheduler\": \"magic\"}]}"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("{\"methods\": [{\"name\": \"a\"}], \"reference\": \"b\"}"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("{\"instance\": 3, \"methods\": [{\"name\": \"a\"}]}"), SchemaError);
  CHECK_THROWS_AS(parse_config("{\"params\": {}}"), SchemaError);
  CHECK_THROWS_AS(parse_config("{\"methods\": [ }"), ParseError);
  CHECK_THROWS_AS(parse_config("{\"params\": {\"sa\": {\"cooling\": 1.5}}, \"methods\": [{\"name\": \"a\"}]}"),
                  ConfigError);
  CHECK_THROWS_AS(read_config("/nonexistent/sidekick.json"), std::exception);
}

TEST_CASE("pipeline without a scheduler is the truck-only tour") {
  const Instance inst = generate_uniform_instance(15, 4);
  const TravelMatrices mats = build_matrices(inst);
  MethodSpec m;
  m.name = "plain";
  m.scheduler = Scheduler::none;
  const SolverParams sp;
  const PipelineOutcome out = run_pipeline(m, sp, inst);
  REQUIRE(out.record.ok());
  CHECK(out.solution.sorties.empty());
  const Tour expected = local_search(nearest_neighbor(inst, mats), mats, sp.local_search);
  CHECK(out.solution.tour == expected);
  CHECK(out.record.makespan == truck_only_makespan(expected, mats));
  CHECK(out.record.total_wait == 0.0);
  CHECK(out.record.n_sorties == 0);
  CHECK(out.record.wall_time == 0.0);
}

TEST_CASE("pipeline is deterministic and greedy never hurts") {
  const ExperimentConfig cfg = parse_config(small_config);
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const Instance inst = generate_uniform_instance(12, seed, cfg.params);
    const TravelMatrices mats = build_matrices(inst);
    for (const MethodSpec& m : cfg.methods) {
      const PipelineOutcome a = run_pipeline(m, cfg.solver, inst);
      const PipelineOutcome b = run_pipeline(m, cfg.solver, inst);
      REQUIRE(a.record.ok());
      CHECK(a.solution.tour == b.solution.tour);
      CHECK(a.solution.sorties == b.solution.sorties);
      CHECK(a.record.makespan == b.record.makespan);
      CHECK(validate_solution(a.solution, inst).ok());
      CHECK(decomposition_holds(a.record.makespan, a.record.truck_travel, a.record.total_wait, 1e-9));

      MethodSpec plain = m;
      plain.scheduler = Scheduler::none;
      const PipelineOutcome t = run_pipeline(plain, cfg.solver, inst);
      CHECK(a.record.makespan <= t.record.makespan + 1e-12);
      (void)mats;
    }
  }
}

TEST_CASE("stage failures are recorded") {
  const Instance inst = generate_uniform_instance(8, 2);
  MethodSpec m;
  m.name = "learned";
  m.scheduler = Scheduler::policy_best_of_k;
  const PipelineOutcome out = run_pipeline(m, SolverParams{}, inst);
  CHECK_FALSE(out.record.ok());
  CHECK(*out.record.failed_stage == "schedule");
  CHECK(out.record.error.find("policy") != std::string::npos);

  MethodSpec ga;
  ga.name = "ga";
  ga.improve = Improver::ga;
  SolverParams bad;
  bad.ga.pop_size = 0;
  const PipelineOutcome g = run_pipeline(ga, bad, inst);
  CHECK_FALSE(g.record.ok());
  CHECK(*g.record.failed_stage == "improve");
}

TEST_CASE("batch layout and job independence") {
  ExperimentConfig cfg = parse_config(small_config);
  const BatchResult one = run_batch(cfg, 1);
  const BatchResult four = run_batch(cfg, 4);
  REQUIRE(one.outcomes.size() == 9);
  REQUIRE(one.instances.size() == 3);
  for (std::size_t job = 0; job < 9; ++job) {
    const RunRecord& r = one.outcomes[job].record;
    CHECK(r.method == cfg.methods[job / 3].name);
    CHECK(r.seed == cfg.seeds[job % 3]);
    CHECK(r.ok());
  }
  CHECK(one.instances[1].seed == 2);
  CHECK(one.instances[1] == four.instances[1]);

  std::vector<RunRecord> a;
  std::vector<RunRecord> b;
  for (std::size_t i = 0; i < 9; ++i) {
    a.push_back(one.outcomes[i].record);
    b.push_back(four.outcomes[i].record);
    CHECK(one.outcomes[i].solution.sorties == four.outcomes[i].solution.sorties);
  }
  CHECK(format_runs_csv(a) == format_runs_csv(b));
}

TEST_CASE("runs csv round trip") {
  std::vector<RunRecord> records;
  RunRecord r;
  r.method = "odd, \"name\"";
  r.seed = 18446744073709551615ull;
  r.makespan = 5.0803456789123;
  r.truck_travel = 4.5851234567;
  r.total_wait = 0.4952222222123;
  r.n_sorties = 7;
  records.push_back(r);
  r.method = "plain";
  r.seed = 2;
  records.push_back(r);
  RunRecord failed = r;
  failed.failed_stage = "schedule";
  records.push_back(failed);

  const std::string text = format_runs_csv(records);
  CHECK(text.rfind(std::string(runs_csv_header) + "\n", 0) == 0);
  const auto back = parse_runs_csv(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0].method == records[0].method);
  CHECK(back[0].seed == records[0].seed);
  CHECK(back[0].makespan == doctest::Approx(records[0].makespan).epsilon(1e-9));
  CHECK(back[0].truck_travel == doctest::Approx(records[0].truck_travel).epsilon(1e-9));
  CHECK(back[0].total_wait == doctest::Approx(records[0].total_wait).epsilon(1e-9));
  CHECK(back[0].n_sorties == 7);
  CHECK(format_runs_csv(back) == format_runs_csv(parse_runs_csv(format_runs_csv(back))));

  CHECK_THROWS_AS(parse_runs_csv(""), ParseError);
  CHECK_THROWS_AS(parse_runs_csv("method,seed\n"), ParseError);
  CHECK_THROWS_AS(parse_runs_csv(std::string(runs_csv_header) + "\na,1,2\n"), ParseError);
  CHECK_THROWS_AS(parse_runs_csv(std::string(runs_csv_header) + "\na,-1,1,1,0,0,0\n"), ParseError);
  CHECK_THROWS_AS(parse_runs_csv(std::string(runs_csv_header) + "\na,1,x,1,0,0,0\n"), ParseError);
}

TEST_CASE("aggregate and tests csv headers") {
  const std::vector<MethodAggregate> agg{{"NN", 3, 5.2, 0.1, 5.0, 5.4, false}};
  const std::string a = format_aggregate_csv(agg);
  CHECK(a.rfind(std::string(aggregate_csv_header) + "\n", 0) == 0);
  CHECK(a.find("NN,3,") != std::string::npos);

  std::vector<RunRecord> records;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    RunRecord x;
    x.method = "A";
    x.seed = s;
    x.makespan = 1.0;
    records.push_back(x);
    x.method = "B";
    records.push_back(x);
  }
  const auto tests = reference_tests(records, "A");
  REQUIRE(tests.size() == 1);
  CHECK(tests[0].method == "B");
  CHECK(tests[0].result.no_effect);
  const std::string t = format_tests_csv(tests);
  CHECK(t.rfind(std::string(tests_csv_header) + "\n", 0) == 0);
  CHECK(t.find("no_effect") != std::string::npos);
  CHECK(reference_tests(records, "").empty());
}

TEST_CASE("slugs") {
  CHECK(slugify("PointerRL (Proposed)") == "pointerrl_proposed");
  CHECK(slugify("NN") == "nn");
  CHECK(slugify("a--b") == "a_b");
}

TEST_CASE("emit results") {
  ExperimentConfig cfg = parse_config(small_config);
  const BatchResult batch = run_batch(cfg, 2);
  const auto dir = scratch_dir("emit");
  const EmittedFiles files = emit_results(cfg, batch, dir);
  for (const auto& p : {files.runs, files.aggregate, files.tests, files.failures, files.bundle}) {
    CHECK(std::filesystem::exists(p));
  }
  CHECK(files.plot_bundles.size() == 10);
  CHECK(std::filesystem::exists(dir / "plots" / "nn_seed1.json"));
  CHECK(std::filesystem::exists(dir / "plots" / "aggregate.json"));
  const std::string bundle = slurp(files.bundle);
  CHECK(bundle.find("\"config\"") != std::string::npos);
  CHECK(slurp(files.failures) == "method,seed,stage,error\n");
  CHECK(parse_runs_csv(slurp(files.runs)).size() == 9);

  const std::string plot = slurp(dir / "plots" / "alns_seed2.json");
  for (const char* key : {"\"nodes\"", "\"tour\"", "\"sorties\"", "\"events\"", "\"makespan\""}) {
    CHECK(plot.find(key) != std::string::npos);
  }

  // a second emission is byte-identical
  const auto dir2 = scratch_dir("emit2");
  const EmittedFiles again = emit_results(cfg, run_batch(cfg, 1), dir2);
  CHECK(slurp(files.runs) == slurp(again.runs));
  CHECK(slurp(files.bundle) == slurp(again.bundle));
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(dir2);
}
