#include "sidekick/geometry.hpp"

#include <cmath>

namespace sidekick {

double euclidean_distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

} // namespace sidekick
