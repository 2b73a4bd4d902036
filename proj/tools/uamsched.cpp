// uamsched: command-line front end for network generation, fleet
// simulation, single-instance MWIS solves and TTS benchmarking.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "uam/bench.hpp"
#include "uam/io.hpp"
#include "uam/network.hpp"
#include "uam/scheduler.hpp"
#include "uam/solvers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_manifest(const fs::path& dir, json manifest) {
  uam::write_file_atomic(dir / "run_manifest.json", manifest.dump(2) + "\n");
}

struct GenNetworkArgs {
  uam::GridSpec grid;
  std::string out;
};

int cmd_gen_network(const GenNetworkArgs& args) {
  const auto network = uam::generate_synthetic_network(args.grid);
  uam::save_network(network, args.out);
  std::cout << "wrote " << network.num_nodes() << " nodes, " << network.num_edges() << " edges to "
            << args.out << "\n";
  return 0;
}

struct SimulateArgs {
  std::string network;
  std::string config;
  std::string requests;
  std::string solver;
  std::optional<std::uint64_t> seed;
  bool export_instances = false;
  bool record_timing = false;
  std::string out;
};

int cmd_simulate(const SimulateArgs& args) {
  const auto network = uam::load_network(args.network);
  uam::SimConfig config;
  if (!args.config.empty()) config = uam::config_from_json(uam::read_json_file(args.config));
  if (args.seed) config.seed = *args.seed;
  if (!args.solver.empty()) {
    const auto kind = uam::parse_solver(args.solver);
    if (!kind) throw std::invalid_argument("unknown solver '" + args.solver + "'");
    config.solver = *kind;
  }
  if (args.export_instances) config.export_instances = true;
  config.validate();

  const auto requests = args.requests.empty()
                            ? uam::generate_requests(network, config)
                            : uam::requests_from_json(uam::read_json_file(args.requests));
  const auto result = uam::run(network, requests, config);

  const fs::path out = args.out;
  fs::create_directories(out);
  uam::write_file_atomic(out / "flights.csv", uam::flights_csv(result.approved));
  uam::write_file_atomic(out / "rejected.csv", uam::rejected_csv(result.rejected));
  uam::write_file_atomic(out / "steps.csv", uam::steps_csv(result.steps));
  const auto metrics = uam::collect_metrics(result, config);
  uam::write_file_atomic(out / "sim_metrics.csv", uam::sim_metrics_csv(metrics, args.record_timing));
  uam::write_file_atomic(out / "requests.json", uam::requests_to_json(requests).dump(1) + "\n");
  if (config.export_instances) {
    fs::create_directories(out / "instances");
    for (const auto& inst : result.instances) {
      char name[32];
      std::snprintf(name, sizeof name, "step_%05zu.json", inst.step);
      uam::save_mwis(inst.problem, out / "instances" / name);
    }
  }
  write_manifest(out, {{"subcommand", "simulate"},
                       {"network", args.network},
                       {"requests", args.requests.empty() ? json(nullptr) : json(args.requests)},
                       {"seed", config.seed},
                       {"record_timing", args.record_timing},
                       {"config", uam::config_to_json(config)}});

  const auto violations = uam::check_separation(network, result.approved, config);
  std::cout << "approved " << result.approved.size() << ", rejected " << result.rejected.size()
            << ", pending " << result.pending.size() << ", average active "
            << uam::format_fixed(metrics.average_active, 3) << "\n";
  if (!violations.empty()) {
    std::cerr << "error: " << violations.size() << " separation violations among approved flights\n";
    return 1;
  }
  return 0;
}

struct SolveArgs {
  std::string instance;
  std::string solver = "exact";
  std::uint64_t seed = 0;
  int samples = 100;
  int sweeps = 64;
  double lambda = 2.0;
  double time_limit = 0.0;
};

int cmd_solve(const SolveArgs& args) {
  const auto problem = uam::load_mwis(args.instance);
  const auto kind = uam::parse_solver(args.solver);
  if (!kind || *kind == uam::SolverKind::fifo) {
    throw std::invalid_argument("solve needs --solver greedy|exact|sa");
  }
  uam::SolverOptions options;
  options.kind = *kind;
  options.lambda = args.lambda;
  options.exact_time_limit = args.time_limit;
  options.schedule.num_samples = args.samples;
  options.schedule.sweeps_per_sample = args.sweeps;
  options.schedule.seed = args.seed;
  const auto result = uam::solve(problem, options);

  std::string bits;
  for (std::size_t i = 0; i < result.assignment.size(); ++i) bits += result.assignment[i] ? '1' : '0';
  std::cout << "solver: " << uam::solver_name(*kind) << "\n"
            << "objective: " << uam::format_fixed(result.objective, 9) << "\n"
            << "bits: " << bits << "\n";
  if (*kind == uam::SolverKind::exact) {
    std::cout << "optimal: " << (result.optimality_proven ? "proven" : "not proven") << "\n";
  }
  // Timing goes to stderr so stdout stays reproducible.
  std::cerr << "wall_time: " << uam::format_exact(result.wall_time) << "\n";
  return 0;
}

struct BenchArgs {
  std::string corpus;
  std::string out;
  int samples = 10000;
  int sweeps = 64;
  double p = 0.99;
  double lambda = 2.0;
  double time_limit = 60.0;
  std::uint64_t seed = 0;
};

int cmd_bench_tts(const BenchArgs& args) {
  const auto corpus = uam::load_corpus(args.corpus);
  uam::BenchOptions options;
  options.schedule.num_samples = args.samples;
  options.schedule.sweeps_per_sample = args.sweeps;
  options.schedule.seed = args.seed;
  options.lambda = args.lambda;
  options.p = args.p;
  options.exact_time_limit = args.time_limit;
  options.schedule.validate();
  if (!(args.p > 0.0 && args.p < 1.0)) throw std::invalid_argument("--p must lie in (0, 1)");

  const auto report = uam::run_tts_benchmark(corpus, options);
  const fs::path out = args.out;
  fs::create_directories(out);
  uam::write_file_atomic(out / "tts_records.csv", uam::tts_records_csv(report.records));
  uam::write_file_atomic(out / "tts_summary.csv", uam::tts_summary_csv(report.summaries));
  write_manifest(out, {{"subcommand", "bench-tts"},
                       {"corpus", args.corpus},
                       {"seed", args.seed},
                       {"samples", args.samples},
                       {"sweeps", args.sweeps},
                       {"p", args.p},
                       {"lambda", args.lambda},
                       {"time_limit", args.time_limit}});
  std::cout << corpus.size() << " instances, " << report.records.size() << " records\n";
  for (const auto& id : report.unproven) {
    std::cerr << "warning: exact solver hit the time limit on " << id << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strategic deconfliction scheduler and MWIS benchmark"};
  app.require_subcommand(1);

  GenNetworkArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-network", "Write a synthetic grid routing network");
  gen_cmd->add_option("--rows", gen.grid.rows, "Grid rows")->capture_default_str();
  gen_cmd->add_option("--cols", gen.grid.cols, "Grid columns")->capture_default_str();
  gen_cmd->add_option("--spacing", gen.grid.spacing, "Node spacing, meters")->capture_default_str();
  gen_cmd->add_option("--altitude", gen.grid.altitude, "Corridor altitude, meters")->capture_default_str();
  gen_cmd->add_option("--jitter", gen.grid.jitter, "Horizontal jitter, meters")->capture_default_str();
  gen_cmd->add_option("--seed", gen.grid.seed, "Jitter seed")->capture_default_str();
  gen_cmd->add_option("-o,--out", gen.out, "Output network JSON")->required();

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the scheduling simulation");
  sim_cmd->add_option("--network", sim.network, "Network JSON")->required();
  sim_cmd->add_option("--config", sim.config, "Simulation config JSON");
  sim_cmd->add_option("--requests", sim.requests, "Request list JSON (default: generate)");
  sim_cmd->add_option("--solver", sim.solver, "greedy | exact | sa | fifo");
  sim_cmd->add_option("--seed", sim.seed, "Root seed (overrides config)");
  sim_cmd->add_flag("--export-instances", sim.export_instances, "Write per-step MWIS instances");
  sim_cmd->add_flag("--record-timing", sim.record_timing,
                    "Add the solver_time column to sim_metrics.csv");
  sim_cmd->add_option("-o,--out", sim.out, "Output directory")->required();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one MWIS instance file");
  solve_cmd->add_option("instance", solve.instance, "MWIS instance JSON")->required();
  solve_cmd->add_option("--solver", solve.solver, "greedy | exact | sa")->capture_default_str();
  solve_cmd->add_option("--seed", solve.seed, "Sampler seed")->capture_default_str();
  solve_cmd->add_option("--samples", solve.samples, "Sampler runs")->capture_default_str();
  solve_cmd->add_option("--sweeps", solve.sweeps, "Sweeps per sample")->capture_default_str();
  solve_cmd->add_option("--lambda", solve.lambda, "QUBO penalty")->capture_default_str();
  solve_cmd->add_option("--time-limit", solve.time_limit, "Exact solver limit, seconds (0 = none)");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench-tts", "Time-to-solution benchmark over a corpus");
  bench_cmd->add_option("--corpus", bench.corpus, "Directory of MWIS instance JSON files")->required();
  bench_cmd->add_option("-o,--out", bench.out, "Output directory")->required();
  bench_cmd->add_option("--samples", bench.samples, "Sampler runs per instance")->capture_default_str();
  bench_cmd->add_option("--sweeps", bench.sweeps, "Sweeps per sample")->capture_default_str();
  bench_cmd->add_option("--p", bench.p, "Target confidence for TTS(p)")->capture_default_str();
  bench_cmd->add_option("--lambda", bench.lambda, "QUBO penalty")->capture_default_str();
  bench_cmd->add_option("--time-limit", bench.time_limit, "Exact solver limit, seconds")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Sampler seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) return cmd_gen_network(gen);
    if (*sim_cmd) return cmd_simulate(sim);
    if (*solve_cmd) return cmd_solve(solve);
    if (*bench_cmd) return cmd_bench_tts(bench);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 1;
}
