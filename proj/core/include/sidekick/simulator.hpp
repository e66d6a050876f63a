#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sidekick/instance.hpp"

namespace sidekick {

// Truck stop sequence, depot first and last: (0, i1, ..., im, 0).
using Tour = std::vector<NodeId>;

// Drone trip: launch at truck stop `launch`, serve `customer`, land on the
// truck at `rendezvous`. Launch and rendezvous are consecutive tour stops.
struct Sortie {
  NodeId launch = depot;
  NodeId customer = depot;
  NodeId rendezvous = depot;

  friend bool operator==(const Sortie&, const Sortie&) = default;
  friend auto operator<=>(const Sortie&, const Sortie&) = default;
};

// Sorties are ordered by their launch position along the tour.
struct Solution {
  Tour tour;
  std::vector<Sortie> sorties;

  friend bool operator==(const Solution&, const Solution&) = default;
};

enum class EventKind {
  truck_depart,
  truck_arrive,
  truck_wait_begin,
  truck_wait_end,
  drone_launch,
  drone_serve,
  drone_land,
  recharge_begin,
  recharge_end,
};

const char* to_string(EventKind kind);

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::truck_depart;
  NodeId node = depot;
};

struct SimReport {
  double makespan = 0.0;
  double truck_travel = 0.0;
  double total_wait = 0.0;
  int n_sorties = 0;
  std::vector<Event> events;
};

enum class ViolationKind {
  tour_endpoints,
  invalid_node,
  duplicate_visit,
  coverage,
  sortie_not_adjacent,
  edge_reused,
  sortie_order,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
};

// Flight time of a sortie including launch and recovery handling.
double sortie_flight_time(NodeId u, NodeId k, NodeId v, const TravelMatrices& mats,
                          const Instance& inst);

inline constexpr double endurance_tolerance = 1e-9;

bool sortie_feasible(NodeId u, NodeId k, NodeId v, const TravelMatrices& mats,
                     const Instance& inst);

ValidationReport validate_solution(const Solution& sol, const Instance& inst);

// Position p such that tour[p] == u and tour[p + 1] == v, if any.
std::optional<std::size_t> edge_position(const Tour& tour, NodeId u, NodeId v);

// Replays the truck/drone timeline. Throws ValidationError on structural
// problems and FeasibilityError for a sortie exceeding endurance.
SimReport simulate(const Solution& sol, const TravelMatrices& mats, const Instance& inst);

double truck_only_makespan(const Tour& tour, const TravelMatrices& mats);

// |makespan - (truck + wait)| <= tol.
bool decomposition_holds(double makespan, double truck_travel, double total_wait, double tol);

// Solution files: {"tour": [...], "sorties": [[u, k, v], ...]}.
Solution parse_solution(const std::string& text);
std::string format_solution(const Solution& sol);
Solution read_solution(const std::filesystem::path& path);
void write_solution(const Solution& sol, const std::filesystem::path& path);

// SimReport with its event log, for the plotting scripts.
std::string format_report(const SimReport& report);

} // namespace sidekick
