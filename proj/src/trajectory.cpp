#include "uam/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uam {

namespace {

struct Polyline {
  std::vector<Point3> points;
  std::vector<double> cumulative;  // arc length at each point

  Polyline(const CandidateRoute& route, const RoutingNetwork& network) {
    if (route.nodes.empty()) throw std::invalid_argument("route has no nodes");
    points.reserve(route.nodes.size());
    cumulative.reserve(route.nodes.size());
    for (NodeId id : route.nodes) {
      const Point3& p = network.node(id).position;
      cumulative.push_back(points.empty() ? 0.0
                                          : cumulative.back() + euclidean_distance(points.back(), p));
      points.push_back(p);
    }
  }

  double total() const { return cumulative.back(); }

  Point3 at(double s) const {
    if (s <= 0.0) return points.front();
    if (s >= total()) return points.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
    const auto hi = static_cast<std::size_t>(it - cumulative.begin());
    const auto lo = hi - 1;
    const double seg = cumulative[hi] - cumulative[lo];
    const double u = seg > 0.0 ? (s - cumulative[lo]) / seg : 0.0;
    return points[lo] + u * (points[hi] - points[lo]);
  }
};

}  // namespace

Trajectory sample_trajectory(const CandidateRoute& route, const RoutingNetwork& network,
                             double start_time, double speed, double sample_interval) {
  if (!(speed > 0.0)) throw std::invalid_argument("sample_trajectory: speed must be positive");
  if (!(sample_interval > 0.0)) {
    throw std::invalid_argument("sample_trajectory: sample_interval must be positive");
  }
  const Polyline line(route, network);
  const double duration = line.total() / speed;

  Trajectory traj;
  traj.request_id = route.request_id;
  traj.start_time = start_time;
  traj.end_time = start_time + duration;
  traj.sample_interval = sample_interval;

  // Interior steps are those strictly before the end; the end sample is
  // appended separately so the final gap may be shorter.
  const auto steps = static_cast<std::size_t>(std::ceil(duration / sample_interval - 1e-9));
  traj.samples.reserve(steps + 1);
  for (std::size_t i = 0; i < steps; ++i) {
    const double dt = static_cast<double>(i) * sample_interval;
    traj.samples.push_back({start_time + dt, line.at(speed * dt)});
  }
  traj.samples.push_back({traj.end_time, line.points.back()});
  return traj;
}

std::optional<Point3> position_at(const Trajectory& trajectory, double t) {
  const auto& s = trajectory.samples;
  if (s.empty() || t < trajectory.start_time || t > trajectory.end_time) return std::nullopt;
  const auto it = std::lower_bound(s.begin(), s.end(), t,
                                   [](const TrajectorySample& x, double v) { return x.time < v; });
  if (it == s.end()) return s.back().position;
  if (it->time == t || it == s.begin()) return it->position;
  const auto& prev = *(it - 1);
  const double u = (t - prev.time) / (it->time - prev.time);
  return Point3(prev.position + u * (it->position - prev.position));
}

}  // namespace uam
