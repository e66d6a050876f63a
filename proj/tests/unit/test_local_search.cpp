#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "sidekick/construct.hpp"
#include "sidekick/local_search.hpp"

using namespace sidekick;

namespace {

Instance make(std::vector<Point> nodes) {
  Instance inst;
  inst.nodes = std::move(nodes);
  return inst;
}

bool same_customers(const Tour& a, const Tour& b) {
  auto x = a;
  auto y = b;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

} // namespace

TEST_CASE("2-opt removes a crossing") {
  // depot at (0,0); visiting (1,0) -> (0,1) -> (1,1) crosses itself
  const Instance inst = make({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  const TravelMatrices m(inst);
  const Tour crossed{0, 1, 2, 3, 0};
  const Tour fixed = two_opt(crossed, m);
  CHECK(tour_length(fixed, m) < tour_length(crossed, m) - 0.1);
  CHECK(tour_length(fixed, m) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("2-opt leaves an optimal tour alone") {
  const Instance inst = make({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const TravelMatrices m(inst);
  const Tour square{0, 1, 2, 3, 0};
  CHECK(two_opt(square, m) == square);
  CHECK(or_opt(square, m) == square);
  CHECK(three_opt(square, m) == square);
  CHECK(local_search(square, m) == square);
}

TEST_CASE("2-opt matches the naive reversal search") {
  Rng rng(31);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 3 + static_cast<int>(rng.index(6));
    const Instance inst = oracle::uniform_instance(n, 300 + static_cast<std::uint64_t>(trial));
    const TravelMatrices m(inst);
    Tour start{0};
    for (int c = 1; c <= n; ++c) {
      start.push_back(c);
    }
    start.push_back(0);
    std::shuffle(start.begin() + 1, start.end() - 1, std::mt19937_64(static_cast<std::uint64_t>(trial)));
    const Tour ours = two_opt(start, m);
    const Tour ref = oracle::naive_two_opt(inst, start);
    CHECK(tour_length(ours, m) == doctest::Approx(oracle::tour_length(inst, ref)).epsilon(1e-9));
    CHECK(oracle::two_opt_local_optimum(inst, ours));
    CHECK(tour_length(ours, m) <= tour_length(start, m) + 1e-12);
  }
}

TEST_CASE("max_moves caps 2-opt") {
  const Instance inst = oracle::uniform_instance(12, 4);
  const TravelMatrices m(inst);
  Tour start{0, 12, 1, 11, 2, 10, 3, 9, 4, 8, 5, 7, 6, 0};
  CHECK(two_opt(start, m, 0) == start);
  const Tour one = two_opt(start, m, 1);
  CHECK(one != start);
  CHECK(tour_length(one, m) < tour_length(start, m));
  CHECK(tour_length(two_opt(start, m), m) <= tour_length(one, m));
}

TEST_CASE("3-opt fixture: only a segment move helps") {
  // n = 7, seed 2047: a 2-opt local optimum that a segment exchange improves
  const Instance inst = oracle::uniform_instance(7, 2047);
  const TravelMatrices m(inst);
  const Tour t2{0, 5, 6, 4, 1, 3, 2, 7, 0};
  REQUIRE(oracle::two_opt_local_optimum(inst, t2));
  CHECK(two_opt(t2, m) == t2);
  CHECK(tour_length(t2, m) == doctest::Approx(3.466150).epsilon(1e-6));
  const Tour t3 = three_opt(t2, m);
  CHECK(tour_length(t3, m) == doctest::Approx(oracle::tour_length(inst, t3)).epsilon(1e-12));
  CHECK(tour_length(t3, m) == doctest::Approx(3.362790).epsilon(1e-6));
  CHECK(same_customers(t3, t2));
}

TEST_CASE("3-opt never loses to 2-opt") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Instance inst = oracle::uniform_instance(5 + static_cast<int>(seed % 3), 900 + seed);
    const TravelMatrices m(inst);
    const Tour start = sweep(inst, m);
    const Tour t2 = two_opt(start, m);
    const Tour t3 = three_opt(t2, m);
    CHECK(tour_length(t3, m) <= tour_length(t2, m) + 1e-12);
    CHECK(tour_length(three_opt(start, m), m) <= tour_length(start, m) + 1e-12);
    CHECK(same_customers(t3, start));
  }
}

TEST_CASE("or-opt relocates a misplaced customer") {
  // cluster A near (0.2, 0.8), cluster B near (0.8, 0.2); customer 3 belongs to A
  const Instance inst = make({{0, 0}, {0.2, 0.8}, {0.25, 0.85}, {0.22, 0.78}, {0.8, 0.2},
                              {0.85, 0.25}});
  const TravelMatrices m(inst);
  const Tour start{0, 1, 2, 4, 3, 5, 0};
  const Tour t = or_opt(start, m);
  CHECK(tour_length(t, m) < tour_length(start, m) - 0.5);
  CHECK(same_customers(t, start));
  const auto pos = [&](NodeId c) { return std::find(t.begin(), t.end(), c) - t.begin(); };
  CHECK(std::abs(pos(3) - pos(1)) + std::abs(pos(3) - pos(2)) <= 3);
}

TEST_CASE("property: local search is idempotent, monotone and close to optimal") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Instance inst = oracle::uniform_instance(7, 70 + seed);
    const TravelMatrices m(inst);
    const Tour nn = nearest_neighbor(inst, m);
    const Tour ls = local_search(nn, m);
    CHECK(local_search(ls, m) == ls);
    CHECK(tour_length(ls, m) <= tour_length(nn, m) + 1e-12);
    CHECK(validate_solution({ls, {}}, inst).ok());
    const auto opt = oracle::brute_force_tsp(inst);
    CHECK(tour_length(ls, m) <= opt.length * 1.05);

    LocalSearchOptions with3;
    with3.use_three_opt = true;
    const Tour ls3 = local_search(nn, m, with3);
    CHECK(local_search(ls3, m, with3) == ls3);
    CHECK(tour_length(ls3, m) <= tour_length(nn, m) + 1e-12);
  }
}

TEST_CASE("degenerate tours") {
  const Instance one = make({{0, 0}, {0.3, 0.3}});
  const TravelMatrices m1(one);
  CHECK(local_search({0, 1, 0}, m1) == Tour{0, 1, 0});
  const Instance two = make({{0, 0}, {0.3, 0.3}, {0.9, 0.1}});
  const TravelMatrices m2(two);
  CHECK(local_search({0, 1, 2, 0}, m2) == Tour{0, 1, 2, 0});
  CHECK(three_opt({0, 2, 1, 0}, m2) == Tour{0, 2, 1, 0});
}
