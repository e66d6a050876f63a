#include "sidekick/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

#include "sidekick/alns.hpp"
#include "sidekick/construct.hpp"
#include "sidekick/drone_scheduler.hpp"
#include "sidekick/errors.hpp"
#include "sidekick/local_search.hpp"
#include "sidekick/metaheuristics.hpp"
#include "sidekick/policy.hpp"

namespace sidekick {

namespace {

Tour construct_tour(Constructor c, const Instance& inst, const TravelMatrices& mats) {
  switch (c) {
  case Constructor::nearest_neighbor: return nearest_neighbor(inst, mats);
  case Constructor::clarke_wright: return clarke_wright(inst, mats);
  case Constructor::sweep: return sweep(inst, mats);
  }
  return nearest_neighbor(inst, mats);
}

Tour improve_tour(Improver imp, const Tour& tour, const Instance& inst, const TravelMatrices& mats,
                  const SolverParams& sp, Rng& rng) {
  switch (imp) {
  case Improver::none: return tour;
  case Improver::sa: return simulated_annealing(tour, mats, sp.sa, rng);
  case Improver::tabu: return tabu_search(tour, mats, sp.tabu, rng);
  case Improver::ga:
    return inst.customer_count() < 2 ? tour : genetic_algorithm(inst, mats, sp.ga, rng);
  case Improver::vns: return vns(tour, mats, sp.vns, rng);
  case Improver::alns: return alns_run(tour, mats, sp.alns, rng);
  }
  return tour;
}

Solution schedule(const MethodSpec& m, const Tour& tour, const Instance& inst,
                  const TravelMatrices& mats, const SolverParams& sp, Rng& rng) {
  switch (m.scheduler) {
  case Scheduler::none: return {tour, {}};
  case Scheduler::greedy: return greedy_assign(tour, mats, inst);
  case Scheduler::beam: return beam_schedule(tour, mats, inst, m.beam_width.value_or(sp.beam_width));
  case Scheduler::greedy_vns:
    return assignment_vns(greedy_assign(tour, mats, inst), mats, inst, sp.assignment_vns, rng);
  case Scheduler::policy_best_of_k:
    return best_of_k_decode(tour, mats, inst, *m.policy, m.policy_k.value_or(sp.policy_k),
                            rng.next_u64());
  case Scheduler::policy_beam:
    return masked_beam_decode(tour, mats, inst, *m.policy, sp.policy_beam_width);
  }
  return {tour, {}};
}

} // namespace

PipelineOutcome run_pipeline(const MethodSpec& method, const SolverParams& solver,
                             const Instance& inst, bool record_wall_time) {
  PipelineOutcome out;
  out.record.method = method.name;
  out.record.seed = inst.seed;
  const auto started = std::chrono::steady_clock::now();
  const char* stage = "construct";
  try {
    const TravelMatrices mats(inst);
    Rng rng(mix_seed(inst.seed, stable_hash(method.name)));
    Tour tour;
    if (method.improve == Improver::ga) {
      stage = "improve";
      tour = improve_tour(method.improve, construct_tour(method.construct, inst, mats), inst, mats,
                          solver, rng);
    } else {
      tour = construct_tour(method.construct, inst, mats);
      stage = "improve";
      tour = improve_tour(method.improve, tour, inst, mats, solver, rng);
    }
    if (method.local_search) {
      stage = "local_search";
      tour = local_search(tour, mats, solver.local_search);
    }
    stage = "schedule";
    if ((method.scheduler == Scheduler::policy_best_of_k ||
         method.scheduler == Scheduler::policy_beam) &&
        !method.policy) {
      throw ConfigError("learned scheduler without a policy");
    }
    out.solution = schedule(method, tour, inst, mats, solver, rng);
    stage = "simulate";
    out.report = simulate(out.solution, mats, inst);
    out.record.makespan = out.report.makespan;
    out.record.truck_travel = out.report.truck_travel;
    out.record.total_wait = out.report.total_wait;
    out.record.n_sorties = out.report.n_sorties;
  } catch (const std::exception& e) {
    out.record.failed_stage = stage;
    out.record.error = e.what();
    out.solution = {};
    out.report = {};
  }
  if (record_wall_time) {
    out.record.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }
  return out;
}

BatchResult run_batch(const ExperimentConfig& cfg, int jobs) {
  check_config(cfg);
  BatchResult result;
  for (std::uint64_t seed : cfg.seeds) {
    result.instances.push_back(generate_uniform_instance(cfg.customers, seed, cfg.params));
  }
  const std::size_t n_seeds = cfg.seeds.size();
  const std::size_t total = cfg.methods.size() * n_seeds;
  result.outcomes.resize(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t job = next++; job < total; job = next++) {
      const MethodSpec& m = cfg.methods[job / n_seeds];
      const Instance& inst = result.instances[job % n_seeds];
      result.outcomes[job] = run_pipeline(m, cfg.solver, inst, cfg.record_wall_time);
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }
  return result;
}

} // namespace sidekick
