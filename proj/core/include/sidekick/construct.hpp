#pragma once

#include "sidekick/instance.hpp"
#include "sidekick/simulator.hpp"

namespace sidekick {

// Repeatedly visits the closest unvisited customer; ties go to the lower index.
Tour nearest_neighbor(const Instance& inst, const TravelMatrices& mats);

// Clarke-Wright saving of serving i and j back to back instead of via the depot.
double savings(NodeId i, NodeId j, const TravelMatrices& mats);

// Uncapacitated savings construction. Positive savings are merged first in
// descending order (ties by (i, j)); any routes still apart afterwards are
// joined in the same list order, so the result is always a single tour.
Tour clarke_wright(const Instance& inst, const TravelMatrices& mats);

// Visits customers by polar angle around the depot, counter-clockwise from the
// positive x-axis; ties by radius then index. A customer on the depot gets angle 0.
Tour sweep(const Instance& inst, const TravelMatrices& mats);

} // namespace sidekick
