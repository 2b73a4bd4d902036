#include "uam/bench.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "uam/io.hpp"
#include "uam/random.hpp"

namespace uam {

double tts(double t_c, double p_opt, double p) {
  if (!(t_c > 0.0)) throw std::invalid_argument("tts: t_c must be positive");
  if (!(p_opt >= 0.0 && p_opt <= 1.0)) throw std::invalid_argument("tts: p_opt must lie in [0, 1]");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("tts: p must lie in (0, 1)");
  if (p_opt == 0.0) return kInfiniteTts;
  if (p_opt == 1.0 || p == p_opt) return t_c;
  return t_c * std::log1p(-p) / std::log1p(-p_opt);
}

double estimate_p_opt(std::span<const double> samples, double optimal, double tolerance) {
  if (samples.empty()) throw std::invalid_argument("estimate_p_opt: no samples");
  const auto hits = std::count_if(samples.begin(), samples.end(),
                                  [&](double v) { return std::abs(v - optimal) <= tolerance; });
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

BoxSummary summarize(std::string solver, std::vector<double> values) {
  BoxSummary s;
  s.solver = std::move(solver);
  s.count = values.size();
  std::vector<double> finite;
  for (double v : values) {
    if (std::isfinite(v)) {
      finite.push_back(v);
    } else {
      ++s.infinite;
    }
  }
  if (finite.empty()) return s;
  std::sort(finite.begin(), finite.end());
  s.q1 = quantile(finite, 0.25);
  s.median = quantile(finite, 0.5);
  s.q3 = quantile(finite, 0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * iqr;
  const double hi_fence = s.q3 + 1.5 * iqr;
  s.whisker_low = s.q1;
  s.whisker_high = s.q3;
  for (double v : finite) {
    if (v < lo_fence || v > hi_fence) {
      s.outliers.push_back(v);
    } else {
      s.whisker_low = std::min(s.whisker_low, v);
      s.whisker_high = std::max(s.whisker_high, v);
    }
  }
  return s;
}

std::vector<BenchInstance> load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::invalid_argument("corpus directory " + dir.string() + " does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<BenchInstance> out;
  for (const auto& f : files) out.push_back({f.stem().string(), load_mwis(f)});
  if (out.empty()) throw std::invalid_argument("corpus directory " + dir.string() + " is empty");
  return out;
}

BenchReport run_tts_benchmark(const std::vector<BenchInstance>& corpus, const BenchOptions& options) {
  if (corpus.empty()) throw std::invalid_argument("run_tts_benchmark: empty corpus");
  BenchReport report;
  for (std::size_t idx = 0; idx < corpus.size(); ++idx) {
    const auto& inst = corpus[idx];
    const auto n = inst.problem.size();

    const SolverResult exact = exact_mwis(inst.problem, options.exact_time_limit);
    if (!exact.optimality_proven) report.unproven.push_back(inst.id);
    const double optimum = exact.objective;
    auto is_opt = [&](double v) { return std::abs(v - optimum) <= options.tolerance; };
    const double exact_time = std::max(exact.wall_time, 1e-12);
    report.records.push_back({inst.id, n, "exact", exact_time, 1.0, options.p, exact_time,
                              exact.wall_time, true});

    const SolverResult greedy = greedy_mwis(inst.problem);
    const bool greedy_opt = is_opt(greedy.objective);
    const double greedy_time = std::max(greedy.wall_time, 1e-12);
    report.records.push_back({inst.id, n, "greedy", greedy_time, greedy_opt ? 1.0 : 0.0, options.p,
                              greedy_opt ? greedy_time : options.greedy_penalty_time,
                              greedy.wall_time, greedy_opt});

    if (!options.run_sa || n == 0) continue;
    SaSchedule schedule = options.schedule;
    schedule.seed = derive_seed(options.schedule.seed, static_cast<std::uint64_t>(idx));
    const SolverResult sa = solve_mwis_via_sampler(inst.problem, options.lambda, schedule);
    std::vector<double> objectives;
    objectives.reserve(sa.samples.size());
    for (const auto& s : sa.samples) objectives.push_back(s.objective);
    const double p_opt = estimate_p_opt(objectives, optimum, options.tolerance);
    const auto samples = static_cast<double>(sa.samples.size());
    const double t_anneal = std::max(sa.anneal_time / samples, 1e-12);
    const double t_access = std::max(sa.wall_time / samples, 1e-12);
    const bool found = is_opt(sa.objective);
    report.records.push_back({inst.id, n, "sa-anneal", t_anneal, p_opt, options.p,
                              tts(t_anneal, p_opt, options.p), sa.wall_time, found});
    report.records.push_back({inst.id, n, "sa-access", t_access, p_opt, options.p,
                              tts(t_access, p_opt, options.p), sa.wall_time, found});
  }

  for (const char* solver : {"exact", "greedy", "sa-anneal", "sa-access"}) {
    std::vector<double> values;
    for (const auto& r : report.records) {
      if (r.solver == solver) values.push_back(r.tts);
    }
    if (!values.empty()) report.summaries.push_back(summarize(solver, std::move(values)));
  }
  return report;
}

namespace {

std::string format_time(double v) { return std::isfinite(v) ? format_exact(v) : "inf"; }

}  // namespace

std::string tts_records_csv(const std::vector<TtsRecord>& records) {
  std::ostringstream os;
  os << "instance,n,solver,t_c,p_opt,tts,wall_time,optimal_found\n";
  for (const auto& r : records) {
    os << r.instance << ',' << r.n << ',' << r.solver << ',' << format_time(r.t_c) << ','
       << format_fixed(r.p_opt, 6) << ',' << format_time(r.tts) << ',' << format_time(r.wall_time)
       << ',' << (r.optimal_found ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string tts_summary_csv(const std::vector<BoxSummary>& summaries) {
  std::ostringstream os;
  os << "solver,count,infinite,q1,median,q3,whisker_low,whisker_high,outliers\n";
  for (const auto& s : summaries) {
    os << s.solver << ',' << s.count << ',' << s.infinite << ',' << format_time(s.q1) << ','
       << format_time(s.median) << ',' << format_time(s.q3) << ',' << format_time(s.whisker_low)
       << ',' << format_time(s.whisker_high) << ',' << s.outliers.size() << '\n';
  }
  return os.str();
}

MetricsTable collect_metrics(const SimResult& result, const SimConfig& config) {
  MetricsTable table;
  const auto times = step_times(config);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    MetricsRow row;
    row.step = k;
    row.time = t;
    for (const auto& f : result.approved) {
      if (f.approved_at <= t) ++row.cum_approved;
      if (f.trajectory.start_time <= t && t < f.trajectory.end_time) ++row.active;
    }
    if (k < result.steps.size()) {
      row.mwis_vertices = result.steps[k].mwis_vertices;
      row.mwis_edges = result.steps[k].mwis_edges;
      row.solver_time = result.steps[k].solver_time;
    }
    table.average_active += static_cast<double>(row.active);
    table.rows.push_back(row);
  }
  if (!table.rows.empty()) table.average_active /= static_cast<double>(table.rows.size());
  return table;
}

std::string sim_metrics_csv(const MetricsTable& table, bool include_solver_time) {
  std::ostringstream os;
  os << "step,time,cum_approved,active,mwis_vertices,mwis_edges";
  if (include_solver_time) os << ",solver_time";
  os << '\n';
  for (const auto& r : table.rows) {
    os << r.step << ',' << format_fixed(r.time, 3) << ',' << r.cum_approved << ',' << r.active << ','
       << r.mwis_vertices << ',' << r.mwis_edges;
    if (include_solver_time) os << ',' << format_exact(r.solver_time);
    os << '\n';
  }
  return os.str();
}

}  // namespace uam
