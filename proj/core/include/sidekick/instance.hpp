#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sidekick/geometry.hpp"

namespace sidekick {

using NodeId = int;
inline constexpr NodeId depot = 0;

// Vehicle and drone operating parameters shared by a family of instances.
struct OperationalParams {
  double truck_speed = 1.0;
  double drone_speed = 2.0;
  double endurance = 0.7;
  double recharge = 0.1;
  double launch_time = 0.01;
  double recovery_time = 0.01;

  friend bool operator==(const OperationalParams&, const OperationalParams&) = default;
};

// Node 0 is the depot; nodes 1..n are customers.
struct Instance {
  std::vector<Point> nodes;
  OperationalParams params;
  std::uint64_t seed = 0;

  int customer_count() const { return static_cast<int>(nodes.size()) - 1; }
  int node_count() const { return static_cast<int>(nodes.size()); }

  friend bool operator==(const Instance&, const Instance&) = default;
};

// Throws ConfigError when speeds are non-positive, times negative, the node
// list has no customer, or launch+recovery handling alone exceeds endurance.
void check_instance(const Instance& inst);

// Dense distance and travel-time matrices, row-major.
class TravelMatrices {
public:
  explicit TravelMatrices(const Instance& inst);

  int size() const { return size_; }
  double distance(NodeId i, NodeId j) const { return dist_[at(i, j)]; }
  double truck_time(NodeId i, NodeId j) const { return truck_[at(i, j)]; }
  double drone_time(NodeId i, NodeId j) const { return drone_[at(i, j)]; }

private:
  std::size_t at(NodeId i, NodeId j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(size_) +
           static_cast<std::size_t>(j);
  }

  int size_;
  std::vector<double> dist_;
  std::vector<double> truck_;
  std::vector<double> drone_;
};

TravelMatrices build_matrices(const Instance& inst);

// Depot at the origin, `n` customers i.i.d. uniform on [0,1]^2.
Instance generate_uniform_instance(int n, std::uint64_t seed,
                                   const OperationalParams& params = {});

// JSON instance documents; see docs/formats.md for the schema.
Instance parse_instance(const std::string& text);
std::string format_instance(const Instance& inst);
Instance read_instance(const std::filesystem::path& path);
void write_instance(const Instance& inst, const std::filesystem::path& path);

} // namespace sidekick
