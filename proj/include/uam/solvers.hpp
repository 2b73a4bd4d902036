#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uam/mwis.hpp"

namespace uam {

struct SampleRecord {
  double energy = 0.0;     // QUBO energy after steepest descent
  double objective = 0.0;  // MWIS objective after repair
  bool repaired = false;
};

struct SolverResult {
  Assignment assignment;
  double objective = 0.0;
  double wall_time = 0.0;       // seconds, solve call only
  bool optimality_proven = false;  // exact solver only
  std::vector<SampleRecord> samples;  // sampler only
  double anneal_time = 0.0;     // sampler only: time spent in sweep loops
};

/// Greedy selection that guarantees total weight >= sum_i w_i / (d(i) + 1).
/// Each round takes the first vertex, by descending w_i / (d(i) + 1) over the
/// residual graph, whose neighbours satisfy sum_j w_j / (d(j) + 1) <= w_i.
SolverResult greedy_mwis(const MwisProblem& problem);

/// Branch and bound. On timeout returns the incumbent with
/// optimality_proven = false. A non-positive time_limit means no limit.
SolverResult exact_mwis(const MwisProblem& problem, double time_limit = 0.0);

struct SaSchedule {
  int num_samples = 100;
  int sweeps_per_sample = 64;
  double beta_start = 0.1;
  double beta_end = 10.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SampleSet {
  std::vector<Assignment> assignments;
  double anneal_time = 0.0;  // seconds spent in the sweep loops
};

/// Independent single-flip Metropolis runs, one per sample, each seeded from
/// (seed, sample index) and following a geometric inverse-temperature ladder.
SampleSet sa_sample_qubo(const Qubo& q, const SaSchedule& schedule);

/// Applies the most energy-reducing single flip (lowest index on ties) until
/// no flip reduces the energy.
Assignment steepest_descent(const Qubo& q, Assignment a);

/// to_qubo -> sa_sample_qubo -> steepest_descent -> repair; returns the best
/// feasible sample.
SolverResult solve_mwis_via_sampler(const MwisProblem& problem, double lambda,
                                    const SaSchedule& schedule);

enum class SolverKind { greedy, exact, sa, fifo };

std::optional<SolverKind> parse_solver(std::string_view name);
std::string_view solver_name(SolverKind kind);

struct SolverOptions {
  SolverKind kind = SolverKind::exact;
  double lambda = 2.0;
  double exact_time_limit = 0.0;
  SaSchedule schedule;
};

/// Dispatches to the configured MWIS solver. SolverKind::fifo is not an MWIS
/// solver and is rejected here.
SolverResult solve(const MwisProblem& problem, const SolverOptions& options);

}  // namespace uam
