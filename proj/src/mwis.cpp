#include "uam/mwis.hpp"

#include <algorithm>
#include <cmath>

#include "uam/io.hpp"

namespace uam {

MwisProblem::MwisProblem(std::vector<double> weights, std::vector<VertexPair> edges)
    : weights_(std::move(weights)) {
  const auto n = static_cast<std::int32_t>(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw MwisError("vertex " + std::to_string(i) + " has non-positive weight");
    }
  }
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw MwisError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                      ") references a missing vertex");
    }
    if (i == j) throw MwisError("self-loop on vertex " + std::to_string(i));
    edges_.emplace_back(std::min(i, j), std::max(i, j));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  adjacency_.assign(weights_.size(), {});
  for (auto [i, j] : edges_) {
    adjacency_[i].push_back(j);
    adjacency_[j].push_back(i);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

double MwisProblem::max_weight() const {
  return weights_.empty() ? 0.0 : *std::max_element(weights_.begin(), weights_.end());
}

MwisProblem to_mwis_problem(const ConflictGraph& graph) {
  std::vector<double> w;
  w.reserve(graph.vertices.size());
  for (const auto& v : graph.vertices) w.push_back(v.weight);
  std::vector<VertexPair> e;
  e.reserve(graph.edges.size());
  for (const auto& edge : graph.edges) e.emplace_back(edge.u, edge.v);
  return MwisProblem(std::move(w), std::move(e));
}

MwisProblem mwis_from_json(const nlohmann::json& doc) {
  try {
    const auto n = doc.at("n").get<std::size_t>();
    auto weights = doc.at("weights").get<std::vector<double>>();
    if (weights.size() != n) {
      throw MwisError("instance declares n = " + std::to_string(n) + " but lists " +
                      std::to_string(weights.size()) + " weights");
    }
    std::vector<VertexPair> edges;
    for (const auto& je : doc.at("edges")) {
      if (!je.is_array() || je.size() != 2) throw MwisError("edge entries must be [i, j] pairs");
      edges.emplace_back(je[0].get<std::int32_t>(), je[1].get<std::int32_t>());
    }
    return MwisProblem(std::move(weights), std::move(edges));
  } catch (const nlohmann::json::exception& ex) {
    throw MwisError(std::string("malformed MWIS instance: ") + ex.what());
  }
}

nlohmann::json mwis_to_json(const MwisProblem& problem) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [i, j] : problem.edges()) edges.push_back({i, j});
  return {{"n", problem.size()}, {"weights", problem.weights()}, {"edges", std::move(edges)}};
}

MwisProblem load_mwis(const std::filesystem::path& path) {
  try {
    return mwis_from_json(read_json_file(path));
  } catch (const IoError& ex) {
    throw MwisError(ex.what());
  }
}

void save_mwis(const MwisProblem& problem, const std::filesystem::path& path) {
  write_file_atomic(path, mwis_to_json(problem).dump() + "\n");
}

namespace {

void check_length(const MwisProblem& problem, const Assignment& a) {
  if (a.size() != problem.size()) {
    throw MwisError("assignment length " + std::to_string(a.size()) + " != problem size " +
                    std::to_string(problem.size()));
  }
}

}  // namespace

bool is_independent(const MwisProblem& problem, const Assignment& a) {
  check_length(problem, a);
  return std::none_of(problem.edges().begin(), problem.edges().end(),
                      [&](const VertexPair& e) { return a[e.first] && a[e.second]; });
}

double objective(const MwisProblem& problem, const Assignment& a) {
  check_length(problem, a);
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i]) total += problem.weight(i);
  }
  return total;
}

double Qubo::energy(const Assignment& x) const {
  if (x.size() != n) throw MwisError("assignment length does not match QUBO size");
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i]) e += linear[i];
  }
  for (const auto& [key, q] : quadratic) {
    if (x[key.first] && x[key.second]) e += q;
  }
  return e;
}

Qubo to_qubo(const MwisProblem& problem, double lambda) {
  if (!(lambda > problem.max_weight())) {
    throw MwisError("penalty lambda = " + std::to_string(lambda) +
                    " must exceed the maximum vertex weight " +
                    std::to_string(problem.max_weight()));
  }
  Qubo q;
  q.n = problem.size();
  q.linear.resize(q.n);
  for (std::size_t i = 0; i < q.n; ++i) q.linear[i] = -problem.weight(i);
  for (const auto& e : problem.edges()) q.quadratic.emplace(e, lambda);
  return q;
}

double IsingModel::energy(const std::vector<std::int8_t>& spins) const {
  if (spins.size() != n) throw MwisError("spin vector length does not match Ising size");
  double h = 0.0;
  for (const auto& [key, j] : couplings) h -= j * spins[key.first] * spins[key.second];
  for (std::size_t i = 0; i < n; ++i) h -= biases[i] * spins[i];
  return h;
}

IsingModel qubo_to_ising(const Qubo& q) {
  IsingModel m;
  m.n = q.n;
  m.biases.assign(q.n, 0.0);
  for (std::size_t i = 0; i < q.n; ++i) {
    m.biases[i] -= q.linear[i] / 2.0;
    m.offset += q.linear[i] / 2.0;
  }
  for (const auto& [key, value] : q.quadratic) {
    m.couplings.emplace(key, -value / 4.0);
    m.biases[key.first] -= value / 4.0;
    m.biases[key.second] -= value / 4.0;
    m.offset += value / 4.0;
  }
  return m;
}

std::vector<std::int8_t> to_spins(const Assignment& x) {
  std::vector<std::int8_t> s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] ? 1 : -1;
  return s;
}

MwisSolution brute_force_mwis(const MwisProblem& problem) {
  const auto n = problem.size();
  if (n > kBruteForceLimit) {
    throw MwisError("brute_force_mwis is limited to n <= " + std::to_string(kBruteForceLimit));
  }
  // Vertex i lives at bit (n - 1 - i), so ascending integers walk bit strings
  // in lexicographic order.
  std::vector<std::uint32_t> adj(n, 0);
  for (auto [i, j] : problem.edges()) {
    adj[i] |= 1u << (n - 1 - j);
    adj[j] |= 1u << (n - 1 - i);
  }
  std::uint32_t best_mask = 0;
  double best = 0.0;
  const std::uint32_t end = n == 0 ? 1u : (std::uint32_t{1} << n);
  for (std::uint32_t mask = 1; mask < end; ++mask) {
    double total = 0.0;
    bool feasible = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << (n - 1 - i))) {
        if (mask & adj[i]) {
          feasible = false;
          break;
        }
        total += problem.weight(i);
      }
    }
    if (feasible && total > best + 1e-12) {
      best = total;
      best_mask = mask;
    }
  }
  MwisSolution sol{Assignment(n), 0.0};
  for (std::size_t i = 0; i < n; ++i) sol.assignment.bits[i] = (best_mask >> (n - 1 - i)) & 1u;
  sol.objective = objective(problem, sol.assignment);
  return sol;
}

}  // namespace uam
