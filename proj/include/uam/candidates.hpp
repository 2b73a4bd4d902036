#pragma once

#include <cstdint>
#include <vector>

#include "uam/network.hpp"

namespace uam {

struct FlightRequest {
  std::int64_t request_id = 0;
  NodeId source = 0;
  NodeId destination = 0;
  double submitted_at = 0.0;
  double earliest_start = 0.0;
  double latest_start = 0.0;
};

/// Throws std::invalid_argument unless source != destination, both are
/// aerodromes of `network`, and earliest_start <= latest_start.
void validate_request(const RoutingNetwork& network, const FlightRequest& request);

struct CandidateRoute {
  std::int64_t request_id = 0;
  std::vector<NodeId> nodes;
  double length = 0.0;  // true geometric length, meters
  double weight = 1.0;  // shortest length / length
};

struct PathResult {
  std::vector<NodeId> nodes;
  double cost = 0.0;
};

class NoPathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dijkstra under `edge_costs` (indexed like network.edges()). Among paths of
/// equal cost the lexicographically smallest node sequence wins.
PathResult shortest_path(const RoutingNetwork& network, NodeId source, NodeId destination,
                         const std::vector<double>& edge_costs);

/// Sum of the network's edge lengths along a node path.
double path_length(const RoutingNetwork& network, const std::vector<NodeId>& nodes);

enum class PenaltyMode {
  cumulative,  // each traversal adds factor x original length
  once,        // an edge is penalized at most once
};

struct CandidateOptions {
  int k = 5;
  double penalty_factor = 5.0;
  PenaltyMode mode = PenaltyMode::cumulative;
};

/// Runs k rounds of Dijkstra on a working copy of the edge lengths, adding
/// penalty_factor x original length to every edge of each extracted path.
/// Repeated node sequences are dropped. Result is sorted by descending weight.
std::vector<CandidateRoute> generate_candidates(const RoutingNetwork& network,
                                                const FlightRequest& request,
                                                const CandidateOptions& options);

}  // namespace uam
