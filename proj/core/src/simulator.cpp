#include "sidekick/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json_util.hpp"
#include "sidekick/errors.hpp"

namespace sidekick {

const char* to_string(EventKind kind) {
  switch (kind) {
  case EventKind::truck_depart: return "truck_depart";
  case EventKind::truck_arrive: return "truck_arrive";
  case EventKind::truck_wait_begin: return "truck_wait_begin";
  case EventKind::truck_wait_end: return "truck_wait_end";
  case EventKind::drone_launch: return "drone_launch";
  case EventKind::drone_serve: return "drone_serve";
  case EventKind::drone_land: return "drone_land";
  case EventKind::recharge_begin: return "recharge_begin";
  case EventKind::recharge_end: return "recharge_end";
  }
  return "unknown";
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
  case ViolationKind::tour_endpoints: return "tour_endpoints";
  case ViolationKind::invalid_node: return "invalid_node";
  case ViolationKind::duplicate_visit: return "duplicate_visit";
  case ViolationKind::coverage: return "coverage";
  case ViolationKind::sortie_not_adjacent: return "sortie_not_adjacent";
  case ViolationKind::edge_reused: return "edge_reused";
  case ViolationKind::sortie_order: return "sortie_order";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

double sortie_flight_time(NodeId u, NodeId k, NodeId v, const TravelMatrices& mats,
                          const Instance& inst) {
  return mats.drone_time(u, k) + mats.drone_time(k, v) + inst.params.launch_time +
         inst.params.recovery_time;
}

bool sortie_feasible(NodeId u, NodeId k, NodeId v, const TravelMatrices& mats,
                     const Instance& inst) {
  return sortie_flight_time(u, k, v, mats, inst) <= inst.params.endurance + endurance_tolerance;
}

std::optional<std::size_t> edge_position(const Tour& tour, NodeId u, NodeId v) {
  for (std::size_t p = 0; p + 1 < tour.size(); ++p) {
    if (tour[p] == u && tour[p + 1] == v) {
      return p;
    }
  }
  return std::nullopt;
}

namespace {

std::string sortie_text(const Sortie& s) {
  std::ostringstream os;
  os << "(" << s.launch << "," << s.customer << "," << s.rendezvous << ")";
  return os.str();
}

} // namespace

ValidationReport validate_solution(const Solution& sol, const Instance& inst) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::string msg) {
    report.violations.push_back({kind, std::move(msg)});
  };

  const int n = inst.customer_count();
  const Tour& tour = sol.tour;
  if (tour.size() < 2 || tour.front() != depot || tour.back() != depot) {
    add(ViolationKind::tour_endpoints, "tour must start and end at the depot");
  }

  std::vector<int> served(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t p = 0; p < tour.size(); ++p) {
    const NodeId node = tour[p];
    const bool endpoint = p == 0 || p + 1 == tour.size();
    if (endpoint && node == depot) {
      continue;
    }
    if (node < 1 || node > n) {
      add(ViolationKind::invalid_node,
          "tour stop " + std::to_string(p) + " is not a customer: " + std::to_string(node));
      continue;
    }
    if (++served[static_cast<std::size_t>(node)] == 2) {
      add(ViolationKind::duplicate_visit, "customer " + std::to_string(node) + " visited twice");
    }
  }

  std::optional<std::size_t> last_position;
  for (const Sortie& s : sol.sorties) {
    if (s.customer < 1 || s.customer > n || s.launch < 0 || s.launch > n ||
        s.rendezvous < 0 || s.rendezvous > n) {
      add(ViolationKind::invalid_node, "sortie " + sortie_text(s) + " references an invalid node");
      continue;
    }
    if (++served[static_cast<std::size_t>(s.customer)] == 2) {
      add(ViolationKind::duplicate_visit,
          "customer " + std::to_string(s.customer) + " served more than once");
    }
    const auto pos = edge_position(tour, s.launch, s.rendezvous);
    if (!pos) {
      add(ViolationKind::sortie_not_adjacent,
          "sortie " + sortie_text(s) + " does not launch and land on consecutive tour stops");
      continue;
    }
    if (last_position) {
      if (*pos == *last_position) {
        add(ViolationKind::edge_reused, "sortie " + sortie_text(s) + " reuses a tour edge");
      } else if (*pos < *last_position) {
        add(ViolationKind::sortie_order, "sortie " + sortie_text(s) + " is out of launch order");
      }
    }
    last_position = pos;
  }

  for (int i = 1; i <= n; ++i) {
    if (served[static_cast<std::size_t>(i)] == 0) {
      add(ViolationKind::coverage, "customer " + std::to_string(i) + " is not served");
    }
  }
  return report;
}

SimReport simulate(const Solution& sol, const TravelMatrices& mats, const Instance& inst) {
  const ValidationReport verdict = validate_solution(sol, inst);
  if (!verdict.ok()) {
    throw ValidationError("invalid solution: " + verdict.violations.front().message);
  }

  const Tour& tour = sol.tour;
  std::vector<const Sortie*> on_edge(tour.size(), nullptr);
  for (const Sortie& s : sol.sorties) {
    if (!sortie_feasible(s.launch, s.customer, s.rendezvous, mats, inst)) {
      throw FeasibilityError("sortie " + sortie_text(s) + " exceeds drone endurance");
    }
    on_edge[*edge_position(tour, s.launch, s.rendezvous)] = &s;
  }

  SimReport rep;
  rep.n_sorties = static_cast<int>(sol.sorties.size());
  double clock = 0.0;
  double drone_ready = 0.0;
  auto log = [&rep](double t, EventKind kind, NodeId node) { rep.events.push_back({t, kind, node}); };

  for (std::size_t p = 0; p + 1 < tour.size(); ++p) {
    const NodeId u = tour[p];
    const NodeId v = tour[p + 1];
    const Sortie* s = on_edge[p];
    double rendezvous_time = 0.0;
    if (s != nullptr) {
      const double launch = std::max(clock, drone_ready);
      if (launch > clock) {
        log(clock, EventKind::truck_wait_begin, u);
        log(launch, EventKind::truck_wait_end, u);
        rep.total_wait += launch - clock;
        clock = launch;
      }
      rendezvous_time = launch + sortie_flight_time(u, s->customer, v, mats, inst);
      log(launch, EventKind::drone_launch, u);
      log(launch + inst.params.launch_time + mats.drone_time(u, s->customer), EventKind::drone_serve,
          s->customer);
    }
    log(clock, EventKind::truck_depart, u);
    const double leg = mats.truck_time(u, v);
    clock += leg;
    rep.truck_travel += leg;
    log(clock, EventKind::truck_arrive, v);
    if (s != nullptr) {
      log(rendezvous_time, EventKind::drone_land, v);
      if (rendezvous_time > clock) {
        log(clock, EventKind::truck_wait_begin, v);
        log(rendezvous_time, EventKind::truck_wait_end, v);
        rep.total_wait += rendezvous_time - clock;
        clock = rendezvous_time;
      }
      drone_ready = rendezvous_time + inst.params.recharge;
      log(rendezvous_time, EventKind::recharge_begin, v);
      log(drone_ready, EventKind::recharge_end, v);
    }
  }
  rep.makespan = clock;
  std::stable_sort(rep.events.begin(), rep.events.end(),
                   [](const Event& a, const Event& b) { return a.time < b.time; });
  return rep;
}

double truck_only_makespan(const Tour& tour, const TravelMatrices& mats) {
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < tour.size(); ++p) {
    total += mats.truck_time(tour[p], tour[p + 1]);
  }
  return total;
}

bool decomposition_holds(double makespan, double truck_travel, double total_wait, double tol) {
  return std::abs(makespan - (truck_travel + total_wait)) <= tol;
}

Solution parse_solution(const std::string& text) {
  using detail::json;
  const json doc = detail::parse_json(text, "solution");
  Solution sol;
  const json& tour = detail::require(doc, "tour");
  if (!tour.is_array()) {
    throw SchemaError("'tour' must be an array of node indices", "tour");
  }
  for (const auto& v : tour) {
    if (!v.is_number_integer()) {
      throw SchemaError("'tour' must be an array of node indices", "tour");
    }
    sol.tour.push_back(v.get<NodeId>());
  }
  const json& sorties = detail::require(doc, "sorties");
  if (!sorties.is_array()) {
    throw SchemaError("'sorties' must be an array of [u, k, v] triplets", "sorties");
  }
  for (const auto& s : sorties) {
    if (!s.is_array() || s.size() != 3 || !s[0].is_number_integer() ||
        !s[1].is_number_integer() || !s[2].is_number_integer()) {
      throw SchemaError("'sorties' must be an array of [u, k, v] triplets", "sorties");
    }
    sol.sorties.push_back({s[0].get<NodeId>(), s[1].get<NodeId>(), s[2].get<NodeId>()});
  }
  return sol;
}

std::string format_solution(const Solution& sol) {
  detail::ordered_json doc;
  doc["tour"] = sol.tour;
  auto sorties = detail::ordered_json::array();
  for (const Sortie& s : sol.sorties) {
    sorties.push_back({s.launch, s.customer, s.rendezvous});
  }
  doc["sorties"] = std::move(sorties);
  return doc.dump(2) + "\n";
}

Solution read_solution(const std::filesystem::path& path) {
  return parse_solution(detail::read_text_file(path));
}

void write_solution(const Solution& sol, const std::filesystem::path& path) {
  detail::write_text_file(path, format_solution(sol));
}

std::string format_report(const SimReport& report) {
  detail::ordered_json doc;
  doc["makespan"] = report.makespan;
  doc["truck_travel"] = report.truck_travel;
  doc["total_wait"] = report.total_wait;
  doc["n_sorties"] = report.n_sorties;
  auto events = detail::ordered_json::array();
  for (const Event& e : report.events) {
    events.push_back({{"time", e.time}, {"event", to_string(e.kind)}, {"node", e.node}});
  }
  doc["events"] = std::move(events);
  return doc.dump(2) + "\n";
}

} // namespace sidekick
