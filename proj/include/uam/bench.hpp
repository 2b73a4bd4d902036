#pragma once

#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "uam/mwis.hpp"
#include "uam/scheduler.hpp"
#include "uam/solvers.hpp"

namespace uam {

inline constexpr double kInfiniteTts = std::numeric_limits<double>::infinity();

/// t_c * log(1 - p) / log(1 - p_opt); infinite for p_opt = 0 and t_c for p_opt = 1.
double tts(double t_c, double p_opt, double p);

/// Fraction of samples within `tolerance` of `optimal`.
double estimate_p_opt(std::span<const double> samples, double optimal, double tolerance = 1e-9);

struct TtsRecord {
  std::string instance;
  std::size_t n = 0;
  std::string solver;
  double t_c = 0.0;
  double p_opt = 0.0;
  double p = 0.99;
  double tts = 0.0;        // seconds, may be infinite
  double wall_time = 0.0;  // raw solve time for the whole call
  bool optimal_found = false;
};

struct BoxSummary {
  std::string solver;
  std::size_t count = 0;
  std::size_t infinite = 0;
  double q1 = 0.0, median = 0.0, q3 = 0.0;
  double whisker_low = 0.0, whisker_high = 0.0;
  std::vector<double> outliers;
};

/// Quartiles by linear interpolation; whiskers reach the furthest finite
/// value within 1.5 IQR of the box. Infinite values are counted separately.
BoxSummary summarize(std::string solver, std::vector<double> values);

struct BenchInstance {
  std::string id;
  MwisProblem problem;
};

/// All *.json files of a directory in filename order.
std::vector<BenchInstance> load_corpus(const std::filesystem::path& dir);

struct BenchOptions {
  SaSchedule schedule{10000, 64, 0.1, 10.0, 0};
  double lambda = 2.0;
  double p = 0.99;
  double exact_time_limit = 60.0;
  double greedy_penalty_time = 10.0;  // substituted when greedy misses the optimum
  double tolerance = 1e-9;
  bool run_sa = true;
};

struct BenchReport {
  std::vector<TtsRecord> records;
  std::vector<BoxSummary> summaries;
  std::vector<std::string> unproven;  // instances where the exact solver timed out
};

/// Per instance: exact optimum and time, greedy time (or the penalty time when
/// suboptimal), and sampler p_opt with TTS under two per-trial times: mean
/// sweep time ("sa-anneal") and mean call time per sample ("sa-access").
BenchReport run_tts_benchmark(const std::vector<BenchInstance>& corpus, const BenchOptions& options);

std::string tts_records_csv(const std::vector<TtsRecord>& records);
std::string tts_summary_csv(const std::vector<BoxSummary>& summaries);

struct MetricsRow {
  std::size_t step = 0;
  double time = 0.0;
  std::size_t cum_approved = 0;
  std::size_t active = 0;
  std::size_t mwis_vertices = 0;
  std::size_t mwis_edges = 0;
  double solver_time = 0.0;
};

struct MetricsTable {
  std::vector<MetricsRow> rows;
  double average_active = 0.0;
};

MetricsTable collect_metrics(const SimResult& result, const SimConfig& config);

/// step,time,cum_approved,active,mwis_vertices,mwis_edges[,solver_time]
std::string sim_metrics_csv(const MetricsTable& table, bool include_solver_time);

}  // namespace uam
