#include "sidekick/config.hpp"

#include <set>

#include "json_util.hpp"
#include "sidekick/errors.hpp"

namespace sidekick {

namespace {

using detail::json;
using detail::value_or;

template <class Enum, std::size_t N>
Enum lookup(const std::string& name, const std::pair<const char*, Enum> (&table)[N],
            const char* what) {
  for (const auto& [key, value] : table) {
    if (name == key) {
      return value;
    }
  }
  throw ConfigError(std::string("unknown ") + what + " '" + name + "'");
}

template <class Enum, std::size_t N>
const char* name_of(Enum e, const std::pair<const char*, Enum> (&table)[N]) {
  for (const auto& [key, value] : table) {
    if (value == e) {
      return key;
    }
  }
  return "unknown";
}

const std::pair<const char*, Constructor> constructors[] = {
  {"nn", Constructor::nearest_neighbor},
  {"cw", Constructor::clarke_wright},
  {"sweep", Constructor::sweep},
};
const std::pair<const char*, Improver> improvers[] = {
  {"none", Improver::none}, {"sa", Improver::sa},   {"tabu", Improver::tabu},
  {"ga", Improver::ga},     {"vns", Improver::vns}, {"alns", Improver::alns},
};
const std::pair<const char*, Scheduler> schedulers[] = {
  {"none", Scheduler::none},
  {"greedy", Scheduler::greedy},
  {"beam", Scheduler::beam},
  {"greedy_vns", Scheduler::greedy_vns},
  {"policy_best_of_k", Scheduler::policy_best_of_k},
  {"policy_beam", Scheduler::policy_beam},
};

const json& section(const json& doc, const char* name) {
  static const json empty = json::object();
  auto it = doc.find(name);
  if (it == doc.end() || it->is_null()) {
    return empty;
  }
  if (!it->is_object()) {
    throw SchemaError(std::string("'") + name + "' must be an object", name);
  }
  return *it;
}

PolicyParams load_policy(const json& v, const std::filesystem::path& base_dir) {
  if (v.is_string()) {
    std::filesystem::path p = v.get<std::string>();
    if (p.is_relative()) {
      p = base_dir / p;
    }
    return read_policy(p);
  }
  if (v.is_object()) {
    return parse_policy(v.dump());
  }
  throw SchemaError("'policy' must be a checkpoint path or an inline checkpoint", "policy");
}

OperationalParams parse_operational(const json& s, OperationalParams p) {
  p.truck_speed = value_or(s, "v_T", p.truck_speed);
  p.drone_speed = value_or(s, "v_D", p.drone_speed);
  p.endurance = value_or(s, "E", p.endurance);
  p.recharge = value_or(s, "R", p.recharge);
  p.launch_time = value_or(s, "ell", p.launch_time);
  p.recovery_time = value_or(s, "r", p.recovery_time);
  return p;
}

TrainConfig parse_train(const json& doc, const OperationalParams& instance_params) {
  const json& train = section(doc, "train");
  TrainConfig t;
  t.batch_size = value_or(train, "batch_size", t.batch_size);
  t.steps = value_or(train, "steps", t.steps);
  t.learning_rate = value_or(train, "learning_rate", t.learning_rate);
  t.entropy_coef = value_or(train, "entropy_coef", t.entropy_coef);
  t.grad_clip = value_or(train, "grad_clip", t.grad_clip);
  t.customers = value_or(train, "n", t.customers);
  t.seed = value_or(train, "seed", t.seed);
  t.params = parse_operational(train, instance_params);
  return t;
}

} // namespace

Constructor parse_constructor(const std::string& name) { return lookup(name, constructors, "constructor"); }
Improver parse_improver(const std::string& name) { return lookup(name, improvers, "improver"); }
Scheduler parse_scheduler(const std::string& name) { return lookup(name, schedulers, "scheduler"); }
const char* to_string(Constructor c) { return name_of(c, constructors); }
const char* to_string(Improver i) { return name_of(i, improvers); }
const char* to_string(Scheduler s) { return name_of(s, schedulers); }

void check_config(const ExperimentConfig& cfg) {
  if (cfg.seeds.empty()) {
    throw ConfigError("experiment needs at least one seed");
  }
  if (cfg.customers < 1) {
    throw ConfigError("experiment needs n >= 1 customers");
  }
  if (cfg.methods.empty()) {
    throw ConfigError("experiment needs at least one method");
  }
  std::set<std::string> names;
  for (const MethodSpec& m : cfg.methods) {
    if (m.name.empty()) {
      throw ConfigError("method names must be non-empty");
    }
    if (!names.insert(m.name).second) {
      throw ConfigError("duplicate method name '" + m.name + "'");
    }
    const bool needs_policy =
      m.scheduler == Scheduler::policy_best_of_k || m.scheduler == Scheduler::policy_beam;
    if (needs_policy && !m.policy) {
      throw ConfigError("method '" + m.name + "' uses a learned scheduler but has no policy");
    }
  }
  if (!cfg.reference.empty() && !names.contains(cfg.reference)) {
    throw ConfigError("reference method '" + cfg.reference + "' is not in the method list");
  }
  if (cfg.jobs < 1) {
    throw ConfigError("jobs must be >= 1");
  }
  check_params(cfg.solver.sa);
  check_params(cfg.solver.tabu);
  check_params(cfg.solver.ga);
  check_params(cfg.solver.vns);
  check_params(cfg.solver.alns);
  check_config(cfg.train);
  if (cfg.solver.beam_width < 1 || cfg.solver.policy_beam_width < 1 || cfg.solver.policy_k < 1) {
    throw ConfigError("beam widths and K must be >= 1");
  }
  Instance probe = generate_uniform_instance(1, 0, cfg.params);
  check_instance(probe);
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  const json doc = detail::parse_json(text, "config");
  if (!doc.is_object()) {
    throw SchemaError("config must be a JSON object", "");
  }
  ExperimentConfig cfg;
  cfg.source_text = text;

  const json& inst = section(doc, "instance");
  cfg.customers = value_or(inst, "n", cfg.customers);
  cfg.seeds = value_or(inst, "seeds", cfg.seeds);
  cfg.params = parse_operational(inst, cfg.params);

  const json& params = section(doc, "params");
  SolverParams& sp = cfg.solver;
  const json& ls = section(params, "local_search");
  sp.local_search.use_three_opt = value_or(ls, "three_opt", sp.local_search.use_three_opt);

  const json& sa = section(params, "sa");
  sp.sa.initial_temperature = value_or(sa, "T0", sp.sa.initial_temperature);
  sp.sa.cooling = value_or(sa, "cooling", sp.sa.cooling);
  sp.sa.iters_per_temp = value_or(sa, "iters_per_temp", sp.sa.iters_per_temp);
  sp.sa.min_temperature = value_or(sa, "T_min", sp.sa.min_temperature);

  const json& tabu = section(params, "tabu");
  sp.tabu.tenure = value_or(tabu, "tenure", sp.tabu.tenure);
  sp.tabu.max_iters = value_or(tabu, "max_iters", sp.tabu.max_iters);

  const json& ga = section(params, "ga");
  sp.ga.pop_size = value_or(ga, "pop_size", sp.ga.pop_size);
  sp.ga.generations = value_or(ga, "generations", sp.ga.generations);
  sp.ga.crossover_rate = value_or(ga, "crossover_rate", sp.ga.crossover_rate);
  sp.ga.mutation_rate = value_or(ga, "mutation_rate", sp.ga.mutation_rate);
  sp.ga.elite = value_or(ga, "elite", sp.ga.elite);
  sp.ga.cleanup_moves = value_or(ga, "cleanup_moves", sp.ga.cleanup_moves);

  const json& vns = section(params, "vns");
  sp.vns.k_max = value_or(vns, "k_max", sp.vns.k_max);
  sp.vns.max_iters = value_or(vns, "max_iters", sp.vns.max_iters);

  const json& alns = section(params, "alns");
  sp.alns.iterations = value_or(alns, "iterations", sp.alns.iterations);
  sp.alns.destroy_fraction = value_or(alns, "destroy_fraction", sp.alns.destroy_fraction);
  sp.alns.segment_length = value_or(alns, "segment_length", sp.alns.segment_length);
  sp.alns.reaction = value_or(alns, "reaction", sp.alns.reaction);
  sp.alns.sigma_best = value_or(alns, "sigma_best", sp.alns.sigma_best);
  sp.alns.sigma_better = value_or(alns, "sigma_better", sp.alns.sigma_better);
  sp.alns.sigma_accepted = value_or(alns, "sigma_accepted", sp.alns.sigma_accepted);
  sp.alns.accept_t0 = value_or(alns, "accept_T0", sp.alns.accept_t0);
  sp.alns.accept_cooling = value_or(alns, "accept_cooling", sp.alns.accept_cooling);
  sp.alns.shaw_determinism = value_or(alns, "shaw_determinism", sp.alns.shaw_determinism);
  sp.alns.worst_determinism = value_or(alns, "worst_determinism", sp.alns.worst_determinism);

  const json& beam = section(params, "beam");
  sp.beam_width = value_or(beam, "width", sp.beam_width);

  const json& avns = section(params, "assignment_vns");
  sp.assignment_vns.iterations = value_or(avns, "iterations", sp.assignment_vns.iterations);
  sp.assignment_vns.k_max = value_or(avns, "k_max", sp.assignment_vns.k_max);

  const json& pol = section(params, "policy");
  sp.policy_k = value_or(pol, "k", sp.policy_k);
  sp.policy_beam_width = value_or(pol, "beam_width", sp.policy_beam_width);
  std::optional<PolicyParams> default_policy;
  if (auto it = pol.find("checkpoint"); it != pol.end() && !it->is_null()) {
    default_policy = load_policy(*it, base_dir);
  }

  cfg.train = parse_train(doc, cfg.params);

  const json& methods = detail::require(doc, "methods");
  if (!methods.is_array()) {
    throw SchemaError("'methods' must be an array", "methods");
  }
  for (const json& m : methods) {
    MethodSpec spec;
    if (!m.is_object()) {
      throw SchemaError("each method must be an object", "methods");
    }
    const json& name = detail::require(m, "name");
    if (!name.is_string()) {
      throw SchemaError("method 'name' must be a string", "name");
    }
    spec.name = name.get<std::string>();
    spec.construct = parse_constructor(value_or<std::string>(m, "construct", "nn"));
    spec.improve = parse_improver(value_or<std::string>(m, "improve", "none"));
    spec.local_search = value_or(m, "local_search", true);
    spec.scheduler = parse_scheduler(value_or<std::string>(m, "scheduler", "greedy"));
    if (m.contains("beam_width")) {
      spec.beam_width = value_or<std::size_t>(m, "beam_width", sp.beam_width);
    }
    if (m.contains("k")) {
      spec.policy_k = value_or<int>(m, "k", sp.policy_k);
    }
    if (auto it = m.find("policy"); it != m.end() && !it->is_null()) {
      spec.policy = load_policy(*it, base_dir);
    } else if (spec.scheduler == Scheduler::policy_best_of_k ||
               spec.scheduler == Scheduler::policy_beam) {
      spec.policy = default_policy;
    }
    cfg.methods.push_back(std::move(spec));
  }

  cfg.reference = value_or<std::string>(doc, "reference", "");
  const json& output = section(doc, "output");
  cfg.output_dir = value_or<std::string>(output, "dir", cfg.output_dir.string());
  cfg.jobs = value_or(doc, "jobs", cfg.jobs);
  cfg.record_wall_time = value_or(doc, "record_wall_time", cfg.record_wall_time);
  check_config(cfg);
  return cfg;
}

ExperimentConfig read_config(const std::filesystem::path& path) {
  return parse_config(detail::read_text_file(path), path.parent_path());
}

TrainConfig read_train_config(const std::filesystem::path& path) {
  const json doc = detail::parse_json(detail::read_text_file(path), "config");
  if (!doc.is_object()) {
    throw SchemaError("config must be a JSON object", "");
  }
  TrainConfig t = parse_train(doc, parse_operational(section(doc, "instance"), {}));
  check_config(t);
  return t;
}

} // namespace sidekick
