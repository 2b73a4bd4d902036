#pragma once

#include <optional>
#include <vector>

#include "uam/candidates.hpp"
#include "uam/network.hpp"

namespace uam {

struct TrajectorySample {
  double time = 0.0;
  Point3 position = Point3::Zero();
};

// Constant-speed flight along a route polyline. Samples sit at
// start_time + i * sample_interval, plus a final sample exactly at end_time.
struct Trajectory {
  std::int64_t request_id = 0;
  double start_time = 0.0;
  double end_time = 0.0;
  double sample_interval = 1.0;
  std::vector<TrajectorySample> samples;
};

Trajectory sample_trajectory(const CandidateRoute& route, const RoutingNetwork& network,
                             double start_time, double speed, double sample_interval);

/// Position at time t: exact sample value at sample times, linear
/// interpolation between neighbouring samples, nullopt outside the flight.
std::optional<Point3> position_at(const Trajectory& trajectory, double t);

}  // namespace uam
