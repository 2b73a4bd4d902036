#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "uam/trajectory.hpp"

namespace uam {

class LatticeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// shortest_length / route_length. Requires 0 < shortest_length <= route_length.
double route_weight(double route_length, double shortest_length);

/// Minimum distance over the sample times both trajectories share; nullopt if
/// their time ranges do not overlap. Throws LatticeError when the two are not
/// sampled on the same interval-aligned lattice.
std::optional<double> min_separation(const Trajectory& a, const Trajectory& b);

/// True when the pair violates separation: some common sample is closer than d_min.
bool in_conflict(const Trajectory& a, const Trajectory& b, double d_min);

/// Indices of `candidates` that keep at least d_min from every active flight.
std::vector<std::size_t> filter_against_active(const std::vector<Trajectory>& candidates,
                                               const std::vector<Trajectory>& active,
                                               double d_min);

enum class EdgeKind { same_request, cross_conflict };

struct CandidateTrajectory {
  Trajectory trajectory;
  double weight = 1.0;
};

struct RequestCandidates {
  std::int64_t request_id = 0;
  std::vector<CandidateTrajectory> candidates;
};

struct ConflictVertex {
  std::int32_t id = 0;
  std::int64_t request_id = 0;
  std::int32_t candidate_index = 0;  // index within its RequestCandidates
  double weight = 1.0;
};

struct ConflictEdge {
  std::int32_t u = 0;  // u < v
  std::int32_t v = 0;
  EdgeKind kind = EdgeKind::same_request;
};

struct ConflictGraph {
  std::vector<ConflictVertex> vertices;
  std::vector<ConflictEdge> edges;  // sorted by (u, v)
};

/// One vertex per candidate; a clique per request; a cross_conflict edge for
/// every pair from distinct requests that comes closer than d_min.
ConflictGraph build_conflict_graph(const std::vector<RequestCandidates>& requests, double d_min);

}  // namespace uam
