#include "uam/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "uam/io.hpp"
#include "uam/random.hpp"

namespace uam {

double euclidean_distance(const Point3& a, const Point3& b) { return (a - b).norm(); }

namespace {

constexpr double kLengthRelTol = 1e-6;

std::string edge_label(const Edge& e) {
  std::ostringstream os;
  os << "edge (" << e.a << ", " << e.b << ")";
  return os.str();
}

}  // namespace

RoutingNetwork::RoutingNetwork(std::vector<Node> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  const auto n = nodes_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (nodes_[i].id != static_cast<NodeId>(i)) {
      throw NetworkError("node ids must be dense 0..N-1; found id " +
                         std::to_string(nodes_[i].id) + " at position " + std::to_string(i));
    }
    if (!nodes_[i].position.allFinite()) {
      throw NetworkError("node " + std::to_string(i) + " has a non-finite position");
    }
  }

  adjacency_.assign(n, {});
  std::set<std::pair<NodeId, NodeId>> seen;
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    Edge& e = edges_[k];
    for (NodeId end : {e.a, e.b}) {
      if (!contains(end)) {
        throw NetworkError(edge_label(e) + " references missing node " + std::to_string(end));
      }
    }
    if (e.a == e.b) throw NetworkError(edge_label(e) + " is a self-loop");
    if (!seen.emplace(std::min(e.a, e.b), std::max(e.a, e.b)).second) {
      throw NetworkError(edge_label(e) + " is a duplicate");
    }
    const double geometric = euclidean_distance(node(e.a).position, node(e.b).position);
    if (!(e.length > 0.0)) throw NetworkError(edge_label(e) + " has non-positive length");
    if (std::abs(e.length - geometric) > kLengthRelTol * geometric) {
      throw NetworkError(edge_label(e) + " length " + std::to_string(e.length) +
                         " disagrees with endpoint distance " + std::to_string(geometric));
    }
    adjacency_[e.a].push_back({e.b, static_cast<std::int32_t>(k)});
    adjacency_[e.b].push_back({e.a, static_cast<std::int32_t>(k)});
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end(),
              [](const Adjacent& x, const Adjacent& y) { return x.node < y.node; });
  }

  for (const Node& nd : nodes_) {
    if (nd.aerodrome) aerodromes_.push_back(nd.id);
  }

  // All aerodromes must share one connected component.
  if (!aerodromes_.empty()) {
    std::vector<bool> reached(n, false);
    std::vector<NodeId> stack{aerodromes_.front()};
    reached[aerodromes_.front()] = true;
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (const Adjacent& adj : adjacency_[u]) {
        if (!reached[adj.node]) {
          reached[adj.node] = true;
          stack.push_back(adj.node);
        }
      }
    }
    for (NodeId a : aerodromes_) {
      if (!reached[a]) {
        throw NetworkError("disconnected aerodrome: node " + std::to_string(a) +
                           " is unreachable from aerodrome " +
                           std::to_string(aerodromes_.front()));
      }
    }
  }
}

std::span<const Adjacent> RoutingNetwork::neighbors(NodeId n) const {
  return adjacency_.at(static_cast<std::size_t>(n));
}

std::int32_t RoutingNetwork::find_edge(NodeId a, NodeId b) const {
  if (!contains(a) || !contains(b)) return -1;
  const auto& adj = adjacency_[a];
  auto it = std::lower_bound(adj.begin(), adj.end(), b,
                             [](const Adjacent& x, NodeId v) { return x.node < v; });
  return (it != adj.end() && it->node == b) ? it->edge : -1;
}

bool operator==(const RoutingNetwork& x, const RoutingNetwork& y) {
  if (x.nodes_.size() != y.nodes_.size() || x.edges_.size() != y.edges_.size()) return false;
  for (std::size_t i = 0; i < x.nodes_.size(); ++i) {
    const Node& p = x.nodes_[i];
    const Node& q = y.nodes_[i];
    if (p.id != q.id || p.name != q.name || p.position != q.position ||
        p.aerodrome != q.aerodrome) {
      return false;
    }
  }
  for (std::size_t k = 0; k < x.edges_.size(); ++k) {
    const Edge& e = x.edges_[k];
    const Edge& f = y.edges_[k];
    if (e.a != f.a || e.b != f.b || e.length != f.length) return false;
  }
  return true;
}

RoutingNetwork network_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges")) {
    throw NetworkError("network file must be an object with 'nodes' and 'edges'");
  }
  std::vector<Node> nodes;
  try {
    for (const auto& jn : doc.at("nodes")) {
      Node nd;
      nd.id = jn.at("id").get<NodeId>();
      nd.name = jn.value("name", std::string{});
      nd.position = Point3(jn.at("x").get<double>(), jn.at("y").get<double>(),
                           jn.at("z").get<double>());
      nd.aerodrome = jn.value("aerodrome", false);
      nodes.push_back(std::move(nd));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw NetworkError(std::string("malformed node entry: ") + ex.what());
  }
  std::sort(nodes.begin(), nodes.end(),
            [](const Node& a, const Node& b) { return a.id < b.id; });

  std::vector<Edge> edges;
  try {
    for (const auto& je : doc.at("edges")) {
      Edge e;
      e.a = je.at("a").get<NodeId>();
      e.b = je.at("b").get<NodeId>();
      edges.push_back(e);
    }
  } catch (const nlohmann::json::exception& ex) {
    throw NetworkError(std::string("malformed edge entry: ") + ex.what());
  }

  // Lengths come from geometry; endpoint existence is checked first so the
  // error names the missing node.
  auto has = [&](NodeId id) {
    return id >= 0 && static_cast<std::size_t>(id) < nodes.size() && nodes[id].id == id;
  };
  for (Edge& e : edges) {
    for (NodeId end : {e.a, e.b}) {
      if (!has(end)) {
        throw NetworkError(edge_label(e) + " references missing node " + std::to_string(end));
      }
    }
    e.length = euclidean_distance(nodes[e.a].position, nodes[e.b].position);
  }
  return RoutingNetwork(std::move(nodes), std::move(edges));
}

nlohmann::json network_to_json(const RoutingNetwork& network) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const Node& nd : network.nodes()) {
    nodes.push_back({{"id", nd.id},
                     {"name", nd.name},
                     {"x", nd.position.x()},
                     {"y", nd.position.y()},
                     {"z", nd.position.z()},
                     {"aerodrome", nd.aerodrome}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : network.edges()) edges.push_back({{"a", e.a}, {"b", e.b}});
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

RoutingNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NetworkError("cannot open network file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& ex) {
    throw NetworkError("cannot parse network file " + path.string() + ": " + ex.what());
  }
  return network_from_json(doc);
}

void save_network(const RoutingNetwork& network, const std::filesystem::path& path) {
  write_file_atomic(path, network_to_json(network).dump(2) + "\n");
}

RoutingNetwork generate_synthetic_network(const GridSpec& spec) {
  if (spec.rows < 2 || spec.cols < 2) throw NetworkError("grid needs rows >= 2 and cols >= 2");
  if (!(spec.spacing > 0.0)) throw NetworkError("grid spacing must be positive");
  if (!(spec.jitter >= 0.0) || !(spec.jitter < spec.spacing / 2)) {
    throw NetworkError("grid jitter must lie in [0, spacing/2)");
  }

  std::mt19937_64 rng(derive_seed(spec.seed, "network"));
  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(spec.rows * spec.cols));
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      Node nd;
      nd.id = r * spec.cols + c;
      nd.name = "N" + std::to_string(r) + "_" + std::to_string(c);
      const double dx = (2.0 * uniform01(rng) - 1.0) * spec.jitter;
      const double dy = (2.0 * uniform01(rng) - 1.0) * spec.jitter;
      nd.position = Point3(c * spec.spacing + dx, r * spec.spacing + dy, spec.altitude);
      nd.aerodrome = r == 0 || c == 0 || r == spec.rows - 1 || c == spec.cols - 1;
      nodes.push_back(std::move(nd));
    }
  }

  std::vector<Edge> edges;
  auto link = [&](NodeId a, NodeId b) {
    edges.push_back({a, b, euclidean_distance(nodes[a].position, nodes[b].position)});
  };
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const NodeId id = r * spec.cols + c;
      if (c + 1 < spec.cols) link(id, id + 1);
      if (r + 1 < spec.rows) link(id, id + spec.cols);
    }
  }
  return RoutingNetwork(std::move(nodes), std::move(edges));
}

}  // namespace uam
