#include "sidekick/instance.hpp"

#include <cmath>

#include "json_util.hpp"
#include "sidekick/errors.hpp"
#include "sidekick/rng.hpp"

namespace sidekick {

namespace {

using detail::json;

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw ConfigError(std::string(name) + " must be finite");
  }
}

Point parse_point(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw SchemaError("'" + field + "' entries must be [x, y] number pairs", field);
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

} // namespace

void check_instance(const Instance& inst) {
  const auto& p = inst.params;
  if (inst.nodes.size() < 2) {
    throw ConfigError("instance needs a depot and at least one customer");
  }
  for (const auto& pt : inst.nodes) {
    require_finite(pt.x, "coordinate");
    require_finite(pt.y, "coordinate");
  }
  require_finite(p.truck_speed, "v_T");
  require_finite(p.drone_speed, "v_D");
  require_finite(p.endurance, "E");
  require_finite(p.recharge, "R");
  require_finite(p.launch_time, "ell");
  require_finite(p.recovery_time, "r");
  if (p.truck_speed <= 0.0 || p.drone_speed <= 0.0) {
    throw ConfigError("vehicle speeds must be positive");
  }
  if (p.endurance <= 0.0) {
    throw ConfigError("endurance E must be positive");
  }
  if (p.recharge < 0.0 || p.launch_time < 0.0 || p.recovery_time < 0.0) {
    throw ConfigError("recharge and handling times must be non-negative");
  }
  if (p.launch_time + p.recovery_time >= p.endurance) {
    throw ConfigError("launch + recovery handling must be below endurance E");
  }
}

TravelMatrices::TravelMatrices(const Instance& inst) : size_(inst.node_count()) {
  const auto& p = inst.params;
  if (!(p.truck_speed > 0.0) || !(p.drone_speed > 0.0)) {
    throw ConfigError("vehicle speeds must be positive");
  }
  const auto cells = static_cast<std::size_t>(size_) * static_cast<std::size_t>(size_);
  dist_.assign(cells, 0.0);
  truck_.assign(cells, 0.0);
  drone_.assign(cells, 0.0);
  for (NodeId i = 0; i < size_; ++i) {
    for (NodeId j = i + 1; j < size_; ++j) {
      const double d = euclidean_distance(inst.nodes[static_cast<std::size_t>(i)],
                                          inst.nodes[static_cast<std::size_t>(j)]);
      dist_[at(i, j)] = dist_[at(j, i)] = d;
      truck_[at(i, j)] = truck_[at(j, i)] = d / p.truck_speed;
      drone_[at(i, j)] = drone_[at(j, i)] = d / p.drone_speed;
    }
  }
}

TravelMatrices build_matrices(const Instance& inst) {
  return TravelMatrices(inst);
}

Instance generate_uniform_instance(int n, std::uint64_t seed, const OperationalParams& params) {
  if (n < 1) {
    throw ConfigError("instance generation needs n >= 1 customers");
  }
  Instance inst;
  inst.params = params;
  inst.seed = seed;
  inst.nodes.reserve(static_cast<std::size_t>(n) + 1);
  inst.nodes.push_back({0.0, 0.0});
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    inst.nodes.push_back({x, y});
  }
  return inst;
}

Instance parse_instance(const std::string& text) {
  const json doc = detail::parse_json(text, "instance");
  if (!doc.is_object()) {
    throw SchemaError("instance document must be a JSON object", "");
  }
  Instance inst;
  const auto n = detail::require_integer(doc, "n");
  inst.nodes.push_back(parse_point(detail::require(doc, "depot"), "depot"));
  const json& customers = detail::require(doc, "customers");
  if (!customers.is_array()) {
    throw SchemaError("'customers' must be an array", "customers");
  }
  for (const auto& c : customers) {
    inst.nodes.push_back(parse_point(c, "customers"));
  }
  if (n != static_cast<std::int64_t>(customers.size())) {
    throw SchemaError("'n' does not match the number of customers", "n");
  }
  inst.params.truck_speed = detail::require_number(doc, "v_T");
  inst.params.drone_speed = detail::require_number(doc, "v_D");
  inst.params.endurance = detail::require_number(doc, "E");
  inst.params.recharge = detail::require_number(doc, "R");
  inst.params.launch_time = detail::require_number(doc, "ell");
  inst.params.recovery_time = detail::require_number(doc, "r");
  const json& seed = detail::require(doc, "seed");
  if (!seed.is_number_integer()) {
    throw SchemaError("field 'seed' must be an integer", "seed");
  }
  inst.seed = seed.get<std::uint64_t>();
  check_instance(inst);
  return inst;
}

std::string format_instance(const Instance& inst) {
  detail::ordered_json doc;
  doc["n"] = inst.customer_count();
  doc["depot"] = {inst.nodes.front().x, inst.nodes.front().y};
  auto customers = detail::ordered_json::array();
  for (std::size_t i = 1; i < inst.nodes.size(); ++i) {
    customers.push_back({inst.nodes[i].x, inst.nodes[i].y});
  }
  doc["customers"] = std::move(customers);
  doc["v_T"] = inst.params.truck_speed;
  doc["v_D"] = inst.params.drone_speed;
  doc["E"] = inst.params.endurance;
  doc["R"] = inst.params.recharge;
  doc["ell"] = inst.params.launch_time;
  doc["r"] = inst.params.recovery_time;
  doc["seed"] = inst.seed;
  return doc.dump(2) + "\n";
}

Instance read_instance(const std::filesystem::path& path) {
  return parse_instance(detail::read_text_file(path));
}

void write_instance(const Instance& inst, const std::filesystem::path& path) {
  detail::write_text_file(path, format_instance(inst));
}

} // namespace sidekick
