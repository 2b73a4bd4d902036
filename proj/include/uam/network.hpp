#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace uam {

using Point3 = Eigen::Vector3d;
using NodeId = std::int32_t;

class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double euclidean_distance(const Point3& a, const Point3& b);

struct Node {
  NodeId id = 0;
  std::string name;
  Point3 position = Point3::Zero();  // local ENU, meters
  bool aerodrome = false;
};

struct Edge {
  NodeId a = 0;
  NodeId b = 0;
  double length = 0.0;  // meters

  NodeId other(NodeId n) const { return n == a ? b : a; }
};

struct Adjacent {
  NodeId node;
  std::int32_t edge;  // index into RoutingNetwork::edges()
};

// Graph of aerodromes and corridors. Immutable once constructed; the
// constructor validates every structural invariant and throws NetworkError
// naming the offending node or edge.
class RoutingNetwork {
 public:
  RoutingNetwork() = default;
  RoutingNetwork(std::vector<Node> nodes, std::vector<Edge> edges);

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Node& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const Edge& edge(std::int32_t index) const { return edges_.at(static_cast<std::size_t>(index)); }
  const std::vector<NodeId>& aerodromes() const { return aerodromes_; }

  /// Neighbors of n sorted by neighbor id.
  std::span<const Adjacent> neighbors(NodeId n) const;

  /// Index of the edge joining a and b, or -1.
  std::int32_t find_edge(NodeId a, NodeId b) const;

  bool contains(NodeId n) const {
    return n >= 0 && static_cast<std::size_t>(n) < nodes_.size();
  }

  friend bool operator==(const RoutingNetwork& x, const RoutingNetwork& y);

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<NodeId> aerodromes_;
  std::vector<std::vector<Adjacent>> adjacency_;
};

/// Parses the JSON network format: {"nodes": [{id, name, x, y, z, aerodrome}],
/// "edges": [{a, b}]}. Edge lengths are derived from node geometry.
RoutingNetwork network_from_json(const nlohmann::json& doc);
nlohmann::json network_to_json(const RoutingNetwork& network);

RoutingNetwork load_network(const std::filesystem::path& path);
void save_network(const RoutingNetwork& network, const std::filesystem::path& path);

struct GridSpec {
  int rows = 5;
  int cols = 5;
  double spacing = 800.0;
  double altitude = 120.0;
  double jitter = 0.0;
  std::uint64_t seed = 0;
};

/// rows x cols grid with 4-neighbor corridors. Horizontal positions are
/// jittered uniformly in [-jitter, jitter] from a stream derived from `seed`.
/// Boundary nodes are aerodromes.
RoutingNetwork generate_synthetic_network(const GridSpec& spec);

}  // namespace uam
