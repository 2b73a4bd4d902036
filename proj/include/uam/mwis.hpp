#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "json.hpp"
#include "uam/conflict.hpp"

namespace uam {

class MwisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using VertexPair = std::pair<std::int32_t, std::int32_t>;

// Weighted graph for maximum weighted independent set. Edges are normalized to
// i < j, sorted and unique.
class MwisProblem {
 public:
  MwisProblem() = default;
  MwisProblem(std::vector<double> weights, std::vector<VertexPair> edges);

  std::size_t size() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<VertexPair>& edges() const { return edges_; }
  const std::vector<std::int32_t>& neighbors(std::size_t i) const { return adjacency_[i]; }
  std::size_t degree(std::size_t i) const { return adjacency_[i].size(); }
  double max_weight() const;

 private:
  std::vector<double> weights_;
  std::vector<VertexPair> edges_;
  std::vector<std::vector<std::int32_t>> adjacency_;
};

MwisProblem to_mwis_problem(const ConflictGraph& graph);

/// Instance format: {"n": N, "weights": [...], "edges": [[i, j], ...]}.
MwisProblem mwis_from_json(const nlohmann::json& doc);
nlohmann::json mwis_to_json(const MwisProblem& problem);
MwisProblem load_mwis(const std::filesystem::path& path);
void save_mwis(const MwisProblem& problem, const std::filesystem::path& path);

struct Assignment {
  std::vector<std::uint8_t> bits;

  Assignment() = default;
  explicit Assignment(std::size_t n) : bits(n, 0) {}
  explicit Assignment(std::vector<std::uint8_t> b) : bits(std::move(b)) {}

  std::size_t size() const { return bits.size(); }
  bool operator[](std::size_t i) const { return bits[i] != 0; }
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

bool is_independent(const MwisProblem& problem, const Assignment& a);
double objective(const MwisProblem& problem, const Assignment& a);

struct Qubo {
  std::size_t n = 0;
  std::vector<double> linear;
  std::map<VertexPair, double> quadratic;  // i < j, no stored zeros

  double energy(const Assignment& x) const;
};

/// minimize -sum w_i x_i + lambda sum_{ij in E} x_i x_j. Requires lambda > max weight.
Qubo to_qubo(const MwisProblem& problem, double lambda = 2.0);

// H(s) = -sum J_ij s_i s_j - sum h_i s_i, with QUBO energy = H + offset under
// x_i = (1 + s_i) / 2.
struct IsingModel {
  std::size_t n = 0;
  std::map<VertexPair, double> couplings;
  std::vector<double> biases;
  double offset = 0.0;

  double energy(const std::vector<std::int8_t>& spins) const;
};

IsingModel qubo_to_ising(const Qubo& q);
std::vector<std::int8_t> to_spins(const Assignment& x);

struct MwisSolution {
  Assignment assignment;
  double objective = 0.0;
};

inline constexpr std::size_t kBruteForceLimit = 25;

/// Exhaustive search over all 2^n assignments; ties go to the
/// lexicographically smallest bit string (x_0 most significant).
MwisSolution brute_force_mwis(const MwisProblem& problem);

}  // namespace uam
