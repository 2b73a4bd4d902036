#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "uam/candidates.hpp"
#include "uam/conflict.hpp"
#include "uam/mwis.hpp"
#include "uam/network.hpp"
#include "uam/solvers.hpp"
#include "uam/trajectory.hpp"

namespace uam {

struct SimConfig {
  double scheduling_interval = 30.0;
  double horizon = 3500.0;
  int candidates_per_request = 5;
  double d_min = 100.0;
  double request_period = 30.0;
  int requests_per_period = 1;
  double start_delay_window = 60.0;
  double speed = 20.0;
  double sample_interval = 1.0;
  double penalty_factor = 5.0;
  PenaltyMode penalty_mode = PenaltyMode::cumulative;
  SolverKind solver = SolverKind::exact;
  double lambda = 2.0;
  double exact_time_limit = 10.0;
  SaSchedule sa;  // sa.seed is replaced per step from `seed`
  std::uint64_t seed = 0;
  bool export_instances = false;

  void validate() const;
  CandidateOptions candidate_options() const;
};

/// Strict: unknown keys are rejected. Missing keys keep their defaults.
SimConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const SimConfig& config);

struct ScheduledFlight {
  std::int64_t request_id = 0;
  CandidateRoute route;
  Trajectory trajectory;
  double approved_at = 0.0;
};

enum class RejectReason { expired, no_safe_route };
std::string_view reject_reason_name(RejectReason reason);

struct Rejection {
  std::int64_t request_id = 0;
  RejectReason reason = RejectReason::expired;
  double at = 0.0;
};

struct StepRecord {
  std::size_t step = 0;
  double time = 0.0;
  std::size_t eligible = 0;
  std::size_t candidates_generated = 0;
  std::size_t candidates_surviving = 0;
  std::size_t mwis_vertices = 0;
  std::size_t mwis_edges = 0;
  double objective = 0.0;
  double solver_time = 0.0;
};

struct StepInstance {
  std::size_t step = 0;
  MwisProblem problem;
};

struct SimResult {
  std::vector<ScheduledFlight> approved;
  std::vector<Rejection> rejected;
  std::vector<std::int64_t> pending;  // still open at horizon end
  std::vector<StepRecord> steps;
  std::vector<StepInstance> instances;  // when export_instances is set
};

std::vector<FlightRequest> generate_requests(const RoutingNetwork& network,
                                             const SimConfig& config);

std::vector<FlightRequest> requests_from_json(const nlohmann::json& doc);
nlohmann::json requests_to_json(const std::vector<FlightRequest>& requests);

/// Step times t = 0, interval, 2 * interval, ... strictly below horizon.
std::vector<double> step_times(const SimConfig& config);

/// Scheduling loop with joint route selection through the configured MWIS solver.
SimResult run_simulation(const RoutingNetwork& network, const std::vector<FlightRequest>& requests,
                         const SimConfig& config);

/// Arrival-order baseline: each request takes its best candidate that is
/// clear of every flight approved so far.
SimResult run_fifo_baseline(const RoutingNetwork& network,
                            const std::vector<FlightRequest>& requests, const SimConfig& config);

/// Dispatches to run_fifo_baseline for SolverKind::fifo, else run_simulation.
SimResult run(const RoutingNetwork& network, const std::vector<FlightRequest>& requests,
              const SimConfig& config);

/// request_id,approved_at,route,length,weight (route nodes joined by ';').
std::string flights_csv(const std::vector<ScheduledFlight>& flights);
/// request_id,reason,at
std::string rejected_csv(const std::vector<Rejection>& rejected);
/// step,time,eligible,candidates,surviving,mwis_vertices,mwis_edges,objective,solver_time
std::string steps_csv(const std::vector<StepRecord>& steps);

struct SeparationViolation {
  std::int64_t first = 0;
  std::int64_t second = 0;
  double time = 0.0;
  double distance = 0.0;
};

/// Replays every approved flight from its route geometry (not the stored
/// samples) on the shared sampling lattice and reports pairs closer than d_min.
std::vector<SeparationViolation> check_separation(const RoutingNetwork& network,
                                                  const std::vector<ScheduledFlight>& flights,
                                                  const SimConfig& config);

}  // namespace uam
