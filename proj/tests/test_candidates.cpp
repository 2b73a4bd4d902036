#include "doctest.h"
#include "test_helpers.hpp"
#include "uam/candidates.hpp"

using namespace uam;
using uam::testing::diamond;
using uam::testing::make_network;

namespace {

std::vector<double> lengths(const RoutingNetwork& net) {
  std::vector<double> c;
  for (const auto& e : net.edges()) c.push_back(e.length);
  return c;
}

FlightRequest request(NodeId s, NodeId d) { return {1, s, d, 0, 0, 60}; }

}  // namespace

TEST_CASE("shortest_path on the diamond") {
  const auto net = diamond();
  const auto p = shortest_path(net, 0, 3, lengths(net));
  CHECK(p.nodes == std::vector<NodeId>{0, 1, 3});
  CHECK(p.cost == doctest::Approx(2.0));

  // Oracle: minimum over all simple paths.
  double best = 1e18;
  for (const auto& path : uam::testing::all_simple_paths(net, 0, 3)) {
    best = std::min(best, path_length(net, path));
  }
  CHECK(p.cost == doctest::Approx(best));
}

TEST_CASE("shortest_path edge cases") {
  const auto net = diamond();
  const auto trivial = shortest_path(net, 2, 2, lengths(net));
  CHECK(trivial.nodes == std::vector<NodeId>{2});
  CHECK(trivial.cost == 0.0);

  auto bad = lengths(net);
  bad[0] = 0.0;
  CHECK_THROWS_AS(shortest_path(net, 0, 3, bad), std::invalid_argument);

  const auto split = make_network({{0, 0, 0}, {10, 0, 0}, {50, 0, 0, false}, {60, 0, 0, false}},
                                  {{0, 1}, {2, 3}});
  CHECK_THROWS_AS(shortest_path(split, 0, 3, lengths(split)), NoPathError);
}

TEST_CASE("equal-cost paths resolve to the lexicographically smallest sequence") {
  // Square 0-2-3 and 0-1-3, edges listed so the larger id is discovered first.
  const auto net = make_network({{0, 0, 0}, {100, 100, 0}, {100, -100, 0}, {200, 0, 0}},
                                {{0, 2}, {2, 3}, {0, 1}, {1, 3}});
  CHECK(shortest_path(net, 0, 3, lengths(net)).nodes == std::vector<NodeId>{0, 1, 3});
  CHECK(shortest_path(net, 3, 0, lengths(net)).nodes == std::vector<NodeId>{3, 1, 0});
}

TEST_CASE("generate_candidates on the diamond, k = 2, factor 5") {
  const auto net = diamond();
  const auto routes = generate_candidates(net, request(0, 3), {2, 5.0, PenaltyMode::cumulative});
  REQUIRE(routes.size() == 2);
  CHECK(routes[0].nodes == std::vector<NodeId>{0, 1, 3});
  CHECK(routes[0].weight == 1.0);
  CHECK(routes[0].length == doctest::Approx(2.0));
  CHECK(routes[1].nodes == std::vector<NodeId>{0, 2, 3});
  CHECK(routes[1].length == doctest::Approx(3.0));
  CHECK(routes[1].weight == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("penalty accumulates across rounds unless mode is once") {
  // Two routes 0-1-3 (length 2) and 0-2-3 (length 2.2). With cumulative
  // penalties factor 0.05 the short route is penalized 2x before the long
  // one wins: costs 2 -> 2.1 -> 2.2 (tie, lexicographic keeps 0-1-3) -> 2.3.
  const double cy = std::sqrt(1.1 * 1.1 - 1.0);
  const auto net = make_network({{0, 0, 0}, {1, 0, 0}, {1, cy, 0}, {2, 0, 0}},
                                {{0, 1}, {1, 3}, {0, 2}, {2, 3}});
  const auto cum = generate_candidates(net, request(0, 3), {4, 0.05, PenaltyMode::cumulative});
  CHECK(cum.size() == 2);
  const auto once = generate_candidates(net, request(0, 3), {4, 0.02, PenaltyMode::once});
  // Once-penalized short route costs 2.04 < 2.2 forever.
  CHECK(once.size() == 1);
}

TEST_CASE("unique route yields one candidate") {
  const auto net = make_network({{0, 0, 0}, {100, 0, 0}, {200, 0, 0}}, {{0, 1}, {1, 2}});
  const auto routes = generate_candidates(net, request(0, 2), {5, 5.0, PenaltyMode::cumulative});
  REQUIRE(routes.size() == 1);
  CHECK(routes[0].nodes == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("k = 1 gives the shortest route with weight 1") {
  const auto net = generate_synthetic_network({4, 4, 500, 100, 120, 3});
  const auto routes = generate_candidates(net, request(0, 15), {1, 5.0, PenaltyMode::cumulative});
  REQUIRE(routes.size() == 1);
  CHECK(routes[0].weight == 1.0);
}

TEST_CASE("penalty factor 0 repeats the shortest route") {
  const auto net = generate_synthetic_network({3, 3, 500, 100, 0, 0});
  CHECK(generate_candidates(net, request(0, 8), {5, 0.0, PenaltyMode::cumulative}).size() == 1);
}

TEST_CASE("candidate invariants on random jittered grids") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int cols = 3 + static_cast<int>(seed % 2);
    const auto net = generate_synthetic_network({2, cols, 400, 100, 150, seed});
    REQUIRE(net.num_nodes() <= 8);
    const auto& aero = net.aerodromes();
    const NodeId s = aero[seed % aero.size()];
    const NodeId d = aero[(seed * 7 + 3) % aero.size()];
    if (s == d) continue;
    const auto routes = generate_candidates(net, {static_cast<std::int64_t>(seed), s, d, 0, 0, 60},
                                            {5, 5.0, PenaltyMode::cumulative});
    REQUIRE_FALSE(routes.empty());
    CHECK(routes.front().weight == 1.0);

    double oracle = 1e18;
    for (const auto& p : uam::testing::all_simple_paths(net, s, d)) {
      oracle = std::min(oracle, path_length(net, p));
    }
    CHECK(routes.front().length == doctest::Approx(oracle).epsilon(1e-12));

    for (std::size_t i = 0; i < routes.size(); ++i) {
      const auto& r = routes[i];
      CHECK(r.nodes.front() == s);
      CHECK(r.nodes.back() == d);
      auto sorted = r.nodes;
      std::sort(sorted.begin(), sorted.end());
      CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
      CHECK(r.weight > 0.0);
      CHECK(r.weight <= 1.0);
      CHECK(r.weight * r.length == doctest::Approx(oracle).epsilon(1e-9));
      if (i > 0) CHECK(routes[i - 1].weight >= r.weight);
      for (std::size_t j = 0; j < i; ++j) CHECK(routes[j].nodes != r.nodes);
    }
  }
}

TEST_CASE("validate_request") {
  const auto net = make_network({{0, 0, 0}, {100, 0, 0, false}, {200, 0, 0}}, {{0, 1}, {1, 2}});
  CHECK_NOTHROW(validate_request(net, {1, 0, 2, 0, 0, 60}));
  CHECK_THROWS_AS(validate_request(net, {1, 0, 0, 0, 0, 60}), std::invalid_argument);
  CHECK_THROWS_AS(validate_request(net, {1, 0, 1, 0, 0, 60}), std::invalid_argument);
  CHECK_THROWS_AS(validate_request(net, {1, 0, 2, 0, 70, 60}), std::invalid_argument);
}
