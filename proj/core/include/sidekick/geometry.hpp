#pragma once

namespace sidekick {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double euclidean_distance(const Point& a, const Point& b);

} // namespace sidekick
