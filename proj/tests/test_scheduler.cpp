#include <map>

#include "doctest.h"
#include "test_helpers.hpp"
#include "uam/scheduler.hpp"

using namespace uam;
using uam::testing::make_network;

namespace {

// W(0) and E(1) joined directly (2000 m) and by a northern (2) and southern
// (3) detour; node 4 is a spare aerodrome east of E.
RoutingNetwork corridor_network() {
  return make_network({{0, 0, 100}, {2000, 0, 100}, {1000, 800, 100, false},
                       {1000, -800, 100, false}, {3000, 0, 100}},
                      {{0, 1}, {0, 2}, {2, 1}, {0, 3}, {3, 1}, {1, 4}});
}

// Head-on pair submitted together.
std::vector<FlightRequest> head_on() { return {{0, 0, 1, 0, 0, 60}, {1, 1, 0, 0, 0, 60}}; }

SimConfig small_config(int k) {
  SimConfig c;
  c.horizon = 300;
  c.candidates_per_request = k;
  return c;
}

}  // namespace

TEST_CASE("generate_requests") {
  const auto net = generate_synthetic_network({4, 4, 800, 120, 0, 0});
  SimConfig c;
  const auto reqs = generate_requests(net, c);
  CHECK(reqs.size() == 117);
  CHECK(reqs.back().submitted_at == 3480.0);
  for (const auto& r : reqs) {
    CHECK(r.source != r.destination);
    CHECK(net.node(r.source).aerodrome);
    CHECK(net.node(r.destination).aerodrome);
    CHECK(r.latest_start == r.earliest_start + 60.0);
  }
  const auto again = generate_requests(net, c);
  CHECK(requests_to_json(reqs) == requests_to_json(again));
  c.seed = 1;
  CHECK(requests_to_json(reqs) != requests_to_json(generate_requests(net, c)));

  c.requests_per_period = 3;
  const auto burst = generate_requests(net, c);
  CHECK(burst.size() == 351);

  const auto lonely = make_network({{0, 0, 0}, {100, 0, 0, false}}, {{0, 1}});
  CHECK_THROWS(generate_requests(lonely, SimConfig{}));
}

TEST_CASE("requests JSON round trip") {
  const auto reqs = head_on();
  const auto back = requests_from_json(requests_to_json(reqs));
  REQUIRE(back.size() == 2);
  CHECK(back[1].source == 1);
  CHECK(back[1].latest_start == 60.0);
}

TEST_CASE("config JSON is strict and round-trips") {
  SimConfig c;
  c.solver = SolverKind::sa;
  c.penalty_mode = PenaltyMode::once;
  c.sa.num_samples = 33;
  c.seed = 9;
  const auto back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(back.sa.num_samples == 33);
  CHECK_THROWS(config_from_json(nlohmann::json{{"d_mn", 100}}));
  CHECK_THROWS(config_from_json(nlohmann::json{{"sa", {{"sweep", 3}}}}));
  CHECK_THROWS(config_from_json(nlohmann::json{{"solver", "qaoa"}}));
  SimConfig bad;
  bad.d_min = 0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("step_times") {
  SimConfig c;
  const auto t = step_times(c);
  CHECK(t.size() == 117);
  CHECK(t.back() == 3480.0);
}

TEST_CASE("single request in empty airspace") {
  const auto net = corridor_network();
  const std::vector<FlightRequest> reqs{{5, 0, 1, 0, 0, 60}};
  const auto sim = run_simulation(net, reqs, small_config(5));
  REQUIRE(sim.approved.size() == 1);
  CHECK(sim.approved[0].approved_at == 0.0);
  CHECK(sim.approved[0].route.weight == 1.0);
  CHECK(sim.approved[0].route.nodes == std::vector<NodeId>{0, 1});
  CHECK(sim.rejected.empty());

  const auto fifo = run_fifo_baseline(net, reqs, small_config(5));
  CHECK(flights_csv(fifo.approved) == flights_csv(sim.approved));
}

TEST_CASE("head-on requests both fly when detours exist") {
  const auto net = corridor_network();
  auto cfg = small_config(5);
  cfg.export_instances = true;
  const auto sim = run_simulation(net, head_on(), cfg);
  REQUIRE(sim.approved.size() == 2);
  CHECK((sim.approved[0].route.weight < 1.0 || sim.approved[1].route.weight < 1.0));
  REQUIRE_FALSE(sim.instances.empty());
  CHECK(sim.instances[0].step == 0);
  const auto opt = brute_force_mwis(sim.instances[0].problem).objective;
  CHECK(sim.steps[0].objective == doctest::Approx(opt));
  CHECK(sim.approved[0].route.weight + sim.approved[1].route.weight == doctest::Approx(opt));
  CHECK(check_separation(net, sim.approved, cfg).empty());
}

TEST_CASE("head-on requests with shortest routes only") {
  const auto net = corridor_network();
  const auto cfg = small_config(1);

  const auto fifo = run_fifo_baseline(net, head_on(), cfg);
  REQUIRE(fifo.approved.size() == 1);
  CHECK(fifo.approved[0].request_id == 0);
  REQUIRE(fifo.rejected.size() == 1);
  CHECK(fifo.rejected[0].request_id == 1);
  CHECK(fifo.rejected[0].reason == RejectReason::expired);
  CHECK(fifo.rejected[0].at == 90.0);  // latest_start + interval

  // The optimizer cannot do better with one candidate each; the loser is
  // blocked at every step of its window by the winner.
  const auto sim = run_simulation(net, head_on(), cfg);
  REQUIRE(sim.approved.size() == 1);
  REQUIRE(sim.rejected.size() == 1);
  CHECK(sim.rejected[0].reason == RejectReason::expired);
  CHECK(sim.rejected[0].at == 90.0);

  const auto fifo5 = run_fifo_baseline(net, head_on(), small_config(5));
  CHECK(fifo5.approved.size() == 2);
}

TEST_CASE("requests must join two aerodromes") {
  const auto net = make_network({{0, 0, 0}, {1000, 0, 0}, {5000, 0, 0, false}, {6000, 0, 0, false}},
                                {{0, 1}, {2, 3}});
  CHECK_THROWS(run_simulation(net, {{0, 0, 2, 0, 0, 60}}, small_config(5)));
}

TEST_CASE("simulation invariants across seeds and solvers") {
  const auto net = generate_synthetic_network({4, 4, 700, 120, 150, 2});
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    for (auto kind : {SolverKind::exact, SolverKind::greedy, SolverKind::sa, SolverKind::fifo}) {
      SimConfig cfg;
      cfg.horizon = 900;
      cfg.requests_per_period = 4;
      cfg.seed = seed;
      cfg.solver = kind;
      cfg.sa.num_samples = 20;
      cfg.export_instances = true;
      const auto reqs = generate_requests(net, cfg);
      const auto sim = run(net, reqs, cfg);

      CHECK(check_separation(net, sim.approved, cfg).empty());

      std::map<std::int64_t, int> seen;
      for (const auto& f : sim.approved) seen[f.request_id]++;
      for (const auto& r : sim.rejected) seen[r.request_id]++;
      for (auto id : sim.pending) seen[id]++;
      CHECK(seen.size() == reqs.size());
      for (const auto& [id, n] : seen) CHECK(n == 1);

      std::map<std::int64_t, FlightRequest> by_id;
      for (const auto& r : reqs) by_id[r.request_id] = r;
      for (const auto& f : sim.approved) {
        const auto& r = by_id.at(f.request_id);
        CHECK(f.approved_at >= r.earliest_start);
        CHECK(f.approved_at <= r.latest_start);
        CHECK(f.trajectory.start_time == f.approved_at);
        CHECK(f.route.nodes.front() == r.source);
        CHECK(f.route.nodes.back() == r.destination);
      }
      for (const auto& st : sim.steps) {
        CHECK(st.candidates_generated <= st.eligible * 5);
        CHECK(st.candidates_surviving <= st.candidates_generated);
        if (kind != SolverKind::fifo) CHECK(st.mwis_vertices == st.candidates_surviving);
      }
      if (kind == SolverKind::exact) {
        std::size_t idx = 0;
        for (const auto& inst : sim.instances) {
          while (sim.steps[idx].step != inst.step) ++idx;
          if (inst.problem.size() <= 20) {
            CHECK(sim.steps[idx].objective ==
                  doctest::Approx(brute_force_mwis(inst.problem).objective));
          }
        }
      }
      // Same seed, same outcome.
      const auto again = run(net, reqs, cfg);
      CHECK(flights_csv(again.approved) == flights_csv(sim.approved));
      CHECK(rejected_csv(again.rejected) == rejected_csv(sim.rejected));
    }
  }
}

TEST_CASE("check_separation catches an injected conflict") {
  const auto net = corridor_network();
  const auto cfg = small_config(1);
  const auto sim = run_simulation(net, {{0, 0, 1, 0, 0, 60}}, cfg);
  REQUIRE(sim.approved.size() == 1);
  auto flights = sim.approved;
  auto twin = flights[0];
  twin.request_id = 99;
  twin.route.nodes = {1, 0};
  flights.push_back(twin);
  const auto v = check_separation(net, flights, cfg);
  REQUIRE(v.size() == 1);
  CHECK(v[0].first == 0);
  CHECK(v[0].second == 99);
  CHECK(v[0].distance < 100.0);
}

TEST_CASE("CSV exports") {
  const auto net = corridor_network();
  const auto sim = run_fifo_baseline(net, head_on(), small_config(1));
  CHECK(flights_csv(sim.approved) ==
        "request_id,approved_at,route,length,weight\n0,0.000,0;1,2000.000000,1.000000000\n");
  CHECK(rejected_csv(sim.rejected) == "request_id,reason,at\n1,expired,90.000\n");
  CHECK(steps_csv(sim.steps).rfind("step,time,eligible,candidates,surviving,", 0) == 0);
}
