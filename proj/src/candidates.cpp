#include "uam/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "uam/conflict.hpp"

namespace uam {

void validate_request(const RoutingNetwork& network, const FlightRequest& request) {
  const auto id = std::to_string(request.request_id);
  if (!network.contains(request.source) || !network.contains(request.destination)) {
    throw std::invalid_argument("request " + id + " references a node outside the network");
  }
  if (request.source == request.destination) {
    throw std::invalid_argument("request " + id + " has source == destination");
  }
  if (!network.node(request.source).aerodrome || !network.node(request.destination).aerodrome) {
    throw std::invalid_argument("request " + id + " endpoints must be aerodromes");
  }
  if (!(request.earliest_start <= request.latest_start)) {
    throw std::invalid_argument("request " + id + " has earliest_start > latest_start");
  }
}

namespace {

// Costs within this relative band are treated as ties so the lexicographic
// rule is not defeated by summation order.
constexpr double kTieRelTol = 1e-12;

bool cost_less(double a, double b) {
  if (std::isinf(b)) return a < b;
  return a < b - kTieRelTol * std::max(1.0, std::abs(b));
}
bool cost_equal(double a, double b) { return !cost_less(a, b) && !cost_less(b, a); }

}  // namespace

PathResult shortest_path(const RoutingNetwork& network, NodeId source, NodeId destination,
                         const std::vector<double>& edge_costs) {
  if (!network.contains(source) || !network.contains(destination)) {
    throw std::invalid_argument("shortest_path: endpoint outside network");
  }
  if (edge_costs.size() != network.num_edges()) {
    throw std::invalid_argument("shortest_path: edge_costs size mismatch");
  }
  for (double c : edge_costs) {
    if (!(c > 0.0)) throw std::invalid_argument("shortest_path: edge costs must be positive");
  }
  if (source == destination) return {{source}, 0.0};

  const auto n = network.num_nodes();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  std::vector<std::vector<NodeId>> path(n);
  std::vector<bool> settled(n, false);

  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  dist[source] = 0.0;
  path[source] = {source};
  open.emplace(0.0, source);

  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (settled[u] || d > dist[u]) continue;
    settled[u] = true;
    if (u == destination) break;
    for (const Adjacent& adj : network.neighbors(u)) {
      const NodeId v = adj.node;
      if (settled[v]) continue;
      const double cand = dist[u] + edge_costs[adj.edge];
      bool better = cost_less(cand, dist[v]);
      if (!better && cost_equal(cand, dist[v])) {
        // Equal cost: keep the lexicographically smaller sequence.
        auto extended = path[u];
        extended.push_back(v);
        better = extended < path[v];
        if (better) {
          dist[v] = std::min(dist[v], cand);
          path[v] = std::move(extended);
          open.emplace(dist[v], v);
        }
        continue;
      }
      if (better) {
        dist[v] = cand;
        path[v] = path[u];
        path[v].push_back(v);
        open.emplace(cand, v);
      }
    }
  }
  if (!settled[destination]) {
    throw NoPathError("no path from node " + std::to_string(source) + " to node " +
                      std::to_string(destination));
  }
  return {std::move(path[destination]), dist[destination]};
}

double path_length(const RoutingNetwork& network, const std::vector<NodeId>& nodes) {
  double total = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const auto e = network.find_edge(nodes[i - 1], nodes[i]);
    if (e < 0) {
      throw std::invalid_argument("path uses non-adjacent nodes " + std::to_string(nodes[i - 1]) +
                                  " and " + std::to_string(nodes[i]));
    }
    total += network.edge(e).length;
  }
  return total;
}

std::vector<CandidateRoute> generate_candidates(const RoutingNetwork& network,
                                                const FlightRequest& request,
                                                const CandidateOptions& options) {
  if (options.k < 1) throw std::invalid_argument("generate_candidates: k must be >= 1");
  if (!(options.penalty_factor >= 0.0)) {
    throw std::invalid_argument("generate_candidates: penalty_factor must be >= 0");
  }

  std::vector<double> original(network.num_edges());
  for (std::size_t e = 0; e < original.size(); ++e) original[e] = network.edges()[e].length;
  std::vector<double> working = original;
  std::vector<bool> penalized(original.size(), false);

  std::vector<CandidateRoute> routes;
  double shortest = 0.0;
  for (int round = 0; round < options.k; ++round) {
    PathResult found = shortest_path(network, request.source, request.destination, working);
    const double length = path_length(network, found.nodes);
    if (round == 0) shortest = length;

    for (std::size_t i = 1; i < found.nodes.size(); ++i) {
      const auto e = static_cast<std::size_t>(network.find_edge(found.nodes[i - 1], found.nodes[i]));
      if (options.mode == PenaltyMode::cumulative || !penalized[e]) {
        working[e] += options.penalty_factor * original[e];
        penalized[e] = true;
      }
    }

    const bool duplicate = std::any_of(routes.begin(), routes.end(), [&](const CandidateRoute& r) {
      return r.nodes == found.nodes;
    });
    if (duplicate) continue;
    CandidateRoute route;
    route.request_id = request.request_id;
    route.nodes = std::move(found.nodes);
    route.length = length;
    route.weight = route_weight(length, shortest);
    routes.push_back(std::move(route));
  }

  std::stable_sort(routes.begin(), routes.end(), [](const CandidateRoute& a, const CandidateRoute& b) {
    return a.weight > b.weight;
  });
  return routes;
}

}  // namespace uam
