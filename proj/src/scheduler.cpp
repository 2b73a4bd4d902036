#include "uam/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "uam/io.hpp"
#include "uam/random.hpp"

namespace uam {

// ---------------------------------------------------------------------------
// Configuration

void SimConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("config: ") + name + " must be positive");
    }
  };
  positive(scheduling_interval, "scheduling_interval");
  positive(horizon, "horizon");
  positive(d_min, "d_min");
  positive(request_period, "request_period");
  positive(speed, "speed");
  positive(sample_interval, "sample_interval");
  if (candidates_per_request < 1) {
    throw std::invalid_argument("config: candidates_per_request must be >= 1");
  }
  if (requests_per_period < 1) throw std::invalid_argument("config: requests_per_period must be >= 1");
  if (!(start_delay_window >= 0.0)) {
    throw std::invalid_argument("config: start_delay_window must be >= 0");
  }
  if (!(penalty_factor >= 0.0)) throw std::invalid_argument("config: penalty_factor must be >= 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("config: lambda must be positive");
  sa.validate();
}

CandidateOptions SimConfig::candidate_options() const {
  return {candidates_per_request, penalty_factor, penalty_mode};
}

namespace {

const std::set<std::string> kConfigKeys = {
    "scheduling_interval", "horizon",          "candidates_per_request", "d_min",
    "request_period",      "requests_per_period", "start_delay_window",  "speed",
    "sample_interval",     "penalty_factor",   "penalty_mode",           "solver",
    "lambda",              "exact_time_limit", "sa",                     "seed",
    "export_instances"};

const std::set<std::string> kSaKeys = {"num_samples", "sweeps_per_sample", "beta_start",
                                       "beta_end"};

template <typename T>
void read_if(const nlohmann::json& doc, const char* key, T& out) {
  if (doc.contains(key)) out = doc.at(key).get<T>();
}

}  // namespace

SimConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config: expected a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!kConfigKeys.count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  SimConfig c;
  try {
    read_if(doc, "scheduling_interval", c.scheduling_interval);
    read_if(doc, "horizon", c.horizon);
    read_if(doc, "candidates_per_request", c.candidates_per_request);
    read_if(doc, "d_min", c.d_min);
    read_if(doc, "request_period", c.request_period);
    read_if(doc, "requests_per_period", c.requests_per_period);
    read_if(doc, "start_delay_window", c.start_delay_window);
    read_if(doc, "speed", c.speed);
    read_if(doc, "sample_interval", c.sample_interval);
    read_if(doc, "penalty_factor", c.penalty_factor);
    read_if(doc, "lambda", c.lambda);
    read_if(doc, "exact_time_limit", c.exact_time_limit);
    read_if(doc, "seed", c.seed);
    read_if(doc, "export_instances", c.export_instances);
    if (doc.contains("penalty_mode")) {
      const auto mode = doc.at("penalty_mode").get<std::string>();
      if (mode == "cumulative") {
        c.penalty_mode = PenaltyMode::cumulative;
      } else if (mode == "once") {
        c.penalty_mode = PenaltyMode::once;
      } else {
        throw std::invalid_argument("config: penalty_mode must be 'cumulative' or 'once'");
      }
    }
    if (doc.contains("solver")) {
      const auto name = doc.at("solver").get<std::string>();
      const auto kind = parse_solver(name);
      if (!kind) throw std::invalid_argument("config: unknown solver '" + name + "'");
      c.solver = *kind;
    }
    if (doc.contains("sa")) {
      const auto& sa = doc.at("sa");
      if (!sa.is_object()) throw std::invalid_argument("config: 'sa' must be an object");
      for (const auto& [key, _] : sa.items()) {
        if (!kSaKeys.count(key)) throw std::invalid_argument("config: unknown key 'sa." + key + "'");
      }
      read_if(sa, "num_samples", c.sa.num_samples);
      read_if(sa, "sweeps_per_sample", c.sa.sweeps_per_sample);
      read_if(sa, "beta_start", c.sa.beta_start);
      read_if(sa, "beta_end", c.sa.beta_end);
    }
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("config: ") + ex.what());
  }
  c.validate();
  return c;
}

nlohmann::json config_to_json(const SimConfig& c) {
  return {{"scheduling_interval", c.scheduling_interval},
          {"horizon", c.horizon},
          {"candidates_per_request", c.candidates_per_request},
          {"d_min", c.d_min},
          {"request_period", c.request_period},
          {"requests_per_period", c.requests_per_period},
          {"start_delay_window", c.start_delay_window},
          {"speed", c.speed},
          {"sample_interval", c.sample_interval},
          {"penalty_factor", c.penalty_factor},
          {"penalty_mode", c.penalty_mode == PenaltyMode::cumulative ? "cumulative" : "once"},
          {"solver", std::string(solver_name(c.solver))},
          {"lambda", c.lambda},
          {"exact_time_limit", c.exact_time_limit},
          {"sa",
           {{"num_samples", c.sa.num_samples},
            {"sweeps_per_sample", c.sa.sweeps_per_sample},
            {"beta_start", c.sa.beta_start},
            {"beta_end", c.sa.beta_end}}},
          {"seed", c.seed},
          {"export_instances", c.export_instances}};
}

std::string_view reject_reason_name(RejectReason reason) {
  return reason == RejectReason::expired ? "expired" : "no_safe_route";
}

// ---------------------------------------------------------------------------
// Requests

std::vector<FlightRequest> generate_requests(const RoutingNetwork& network,
                                             const SimConfig& config) {
  config.validate();
  const auto& aero = network.aerodromes();
  if (aero.size() < 2) throw std::invalid_argument("generate_requests: need at least 2 aerodromes");
  const auto pairs = aero.size() * (aero.size() - 1);
  if (static_cast<std::size_t>(config.requests_per_period) > pairs) {
    throw std::invalid_argument("generate_requests: more requests per period than aerodrome pairs");
  }

  std::mt19937_64 rng(derive_seed(config.seed, "requests"));
  std::vector<FlightRequest> out;
  std::int64_t next_id = 0;
  for (std::int64_t period = 0;; ++period) {
    const double t = static_cast<double>(period) * config.request_period;
    if (t >= config.horizon) break;
    std::set<std::pair<NodeId, NodeId>> used;
    while (used.size() < static_cast<std::size_t>(config.requests_per_period)) {
      const auto s = aero[uniform_index(rng, aero.size())];
      const auto d = aero[uniform_index(rng, aero.size())];
      if (s == d || !used.emplace(s, d).second) continue;
      FlightRequest r;
      r.request_id = next_id++;
      r.source = s;
      r.destination = d;
      r.submitted_at = t;
      r.earliest_start = t;
      r.latest_start = t + config.start_delay_window;
      out.push_back(r);
    }
  }
  return out;
}

std::vector<FlightRequest> requests_from_json(const nlohmann::json& doc) {
  const auto& list = doc.is_object() && doc.contains("requests") ? doc.at("requests") : doc;
  if (!list.is_array()) throw std::invalid_argument("requests: expected an array");
  std::vector<FlightRequest> out;
  try {
    for (const auto& j : list) {
      FlightRequest r;
      r.request_id = j.at("request_id").get<std::int64_t>();
      r.source = j.at("source").get<NodeId>();
      r.destination = j.at("destination").get<NodeId>();
      r.submitted_at = j.at("submitted_at").get<double>();
      r.earliest_start = j.value("earliest_start", r.submitted_at);
      r.latest_start = j.at("latest_start").get<double>();
      out.push_back(r);
    }
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("requests: ") + ex.what());
  }
  return out;
}

nlohmann::json requests_to_json(const std::vector<FlightRequest>& requests) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : requests) {
    list.push_back({{"request_id", r.request_id},
                    {"source", r.source},
                    {"destination", r.destination},
                    {"submitted_at", r.submitted_at},
                    {"earliest_start", r.earliest_start},
                    {"latest_start", r.latest_start}});
  }
  return list;
}

std::vector<double> step_times(const SimConfig& config) {
  std::vector<double> times;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * config.scheduling_interval;
    if (t >= config.horizon) break;
    times.push_back(t);
  }
  return times;
}

// ---------------------------------------------------------------------------
// Scheduling loop

namespace {

constexpr double kTimeTol = 1e-9;

struct Proposal {
  const FlightRequest* request;
  std::vector<CandidateRoute> routes;
  std::vector<Trajectory> trajectories;
};

class Scheduler {
 public:
  Scheduler(const RoutingNetwork& network, const std::vector<FlightRequest>& requests,
            const SimConfig& config, bool fifo)
      : network_(network), config_(config), fifo_(fifo) {
    config.validate();
    std::set<std::int64_t> ids;
    for (const auto& r : requests) {
      validate_request(network, r);
      if (!ids.insert(r.request_id).second) {
        throw std::invalid_argument("duplicate request id " + std::to_string(r.request_id));
      }
      pending_.push_back(r);
    }
    std::stable_sort(pending_.begin(), pending_.end(), [](const FlightRequest& a, const FlightRequest& b) {
      return std::tie(a.submitted_at, a.request_id) < std::tie(b.submitted_at, b.request_id);
    });
  }

  SimResult run() {
    const auto times = step_times(config_);
    for (std::size_t s = 0; s < times.size(); ++s) step(s, times[s]);
    for (const auto& r : pending_) result_.pending.push_back(r.request_id);
    return std::move(result_);
  }

 private:
  void step(std::size_t index, double t) {
    StepRecord rec;
    rec.step = index;
    rec.time = t;

    // Expire requests whose window closed before this step.
    std::erase_if(pending_, [&](const FlightRequest& r) {
      if (r.latest_start < t - kTimeTol) {
        result_.rejected.push_back({r.request_id, RejectReason::expired, t});
        return true;
      }
      return false;
    });

    std::vector<Trajectory> active;
    for (const auto& f : result_.approved) {
      if (f.trajectory.end_time >= t) active.push_back(f.trajectory);
    }

    std::vector<Proposal> proposals;
    std::set<std::int64_t> unroutable;
    for (const auto& r : pending_) {
      if (r.earliest_start > t + kTimeTol) continue;
      ++rec.eligible;
      Proposal p{&r, {}, {}};
      try {
        p.routes = generate_candidates(network_, r, config_.candidate_options());
      } catch (const NoPathError&) {
        unroutable.insert(r.request_id);
        result_.rejected.push_back({r.request_id, RejectReason::no_safe_route, t});
        continue;
      }
      rec.candidates_generated += p.routes.size();
      for (const auto& route : p.routes) {
        p.trajectories.push_back(
            sample_trajectory(route, network_, t, config_.speed, config_.sample_interval));
      }
      proposals.push_back(std::move(p));
    }

    std::set<std::int64_t> approved_now;
    if (fifo_) {
      run_fifo_step(proposals, active, t, rec, approved_now);
    } else {
      run_mwis_step(proposals, active, t, rec, approved_now);
    }

    std::erase_if(pending_, [&](const FlightRequest& r) {
      return approved_now.count(r.request_id) || unroutable.count(r.request_id);
    });
    result_.steps.push_back(rec);
  }

  void approve(const Proposal& p, std::size_t candidate, double t,
               std::set<std::int64_t>& approved_now) {
    result_.approved.push_back(
        {p.request->request_id, p.routes[candidate], p.trajectories[candidate], t});
    approved_now.insert(p.request->request_id);
  }

  void run_mwis_step(const std::vector<Proposal>& proposals, const std::vector<Trajectory>& active,
                     double t, StepRecord& rec, std::set<std::int64_t>& approved_now) {
    std::vector<RequestCandidates> groups;
    std::vector<std::pair<const Proposal*, std::vector<std::size_t>>> kept;
    for (const auto& p : proposals) {
      auto survivors = filter_against_active(p.trajectories, active, config_.d_min);
      rec.candidates_surviving += survivors.size();
      if (survivors.empty()) continue;
      RequestCandidates group;
      group.request_id = p.request->request_id;
      for (std::size_t idx : survivors) {
        group.candidates.push_back({p.trajectories[idx], p.routes[idx].weight});
      }
      groups.push_back(std::move(group));
      kept.emplace_back(&p, std::move(survivors));
    }

    const ConflictGraph graph = build_conflict_graph(groups, config_.d_min);
    rec.mwis_vertices = graph.vertices.size();
    rec.mwis_edges = graph.edges.size();
    if (graph.vertices.empty()) return;

    const MwisProblem problem = to_mwis_problem(graph);
    if (config_.export_instances) result_.instances.push_back({rec.step, problem});

    SolverOptions options;
    options.kind = config_.solver;
    options.lambda = config_.lambda;
    options.exact_time_limit = config_.exact_time_limit;
    options.schedule = config_.sa;
    options.schedule.seed = derive_seed(derive_seed(config_.seed, "sa"), rec.step);
    const SolverResult solved = solve(problem, options);
    rec.objective = solved.objective;
    rec.solver_time = solved.wall_time;

    // Map vertices back to (request slot, candidate) through the graph.
    std::size_t slot = 0;
    for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
      while (groups[slot].request_id != graph.vertices[v].request_id) ++slot;
      if (!solved.assignment[v]) continue;
      const auto& [proposal, survivors] = kept[slot];
      approve(*proposal, survivors[static_cast<std::size_t>(graph.vertices[v].candidate_index)], t,
              approved_now);
    }
  }

  void run_fifo_step(const std::vector<Proposal>& proposals, std::vector<Trajectory> active,
                     double t, StepRecord& rec, std::set<std::int64_t>& approved_now) {
    for (const auto& p : proposals) {
      rec.candidates_surviving += filter_against_active(p.trajectories, active, config_.d_min).size();
    }
    // Survivor counts above are against flights from earlier steps only; the
    // selection below also sees flights approved earlier in this step.
    for (const auto& p : proposals) {
      for (std::size_t c = 0; c < p.routes.size(); ++c) {
        const bool clear = std::none_of(active.begin(), active.end(), [&](const Trajectory& f) {
          return in_conflict(p.trajectories[c], f, config_.d_min);
        });
        if (!clear) continue;
        approve(p, c, t, approved_now);
        rec.objective += p.routes[c].weight;
        active.push_back(p.trajectories[c]);
        break;
      }
    }
  }

  const RoutingNetwork& network_;
  const SimConfig& config_;
  bool fifo_;
  std::vector<FlightRequest> pending_;
  SimResult result_;
};

}  // namespace

SimResult run_simulation(const RoutingNetwork& network, const std::vector<FlightRequest>& requests,
                         const SimConfig& config) {
  if (config.solver == SolverKind::fifo) {
    throw std::invalid_argument("run_simulation needs an MWIS solver; use run_fifo_baseline");
  }
  return Scheduler(network, requests, config, false).run();
}

SimResult run_fifo_baseline(const RoutingNetwork& network,
                            const std::vector<FlightRequest>& requests, const SimConfig& config) {
  return Scheduler(network, requests, config, true).run();
}

SimResult run(const RoutingNetwork& network, const std::vector<FlightRequest>& requests,
              const SimConfig& config) {
  return config.solver == SolverKind::fifo ? run_fifo_baseline(network, requests, config)
                                           : run_simulation(network, requests, config);
}

// ---------------------------------------------------------------------------
// Exports

std::string flights_csv(const std::vector<ScheduledFlight>& flights) {
  std::ostringstream os;
  os << "request_id,approved_at,route,length,weight\n";
  for (const auto& f : flights) {
    os << f.request_id << ',' << format_fixed(f.approved_at, 3) << ',';
    for (std::size_t i = 0; i < f.route.nodes.size(); ++i) {
      os << (i ? ";" : "") << f.route.nodes[i];
    }
    os << ',' << format_fixed(f.route.length, 6) << ',' << format_fixed(f.route.weight, 9) << '\n';
  }
  return os.str();
}

std::string rejected_csv(const std::vector<Rejection>& rejected) {
  std::ostringstream os;
  os << "request_id,reason,at\n";
  for (const auto& r : rejected) {
    os << r.request_id << ',' << reject_reason_name(r.reason) << ',' << format_fixed(r.at, 3) << '\n';
  }
  return os.str();
}

std::string steps_csv(const std::vector<StepRecord>& steps) {
  std::ostringstream os;
  os << "step,time,eligible,candidates,surviving,mwis_vertices,mwis_edges,objective,solver_time\n";
  for (const auto& s : steps) {
    os << s.step << ',' << format_fixed(s.time, 3) << ',' << s.eligible << ','
       << s.candidates_generated << ',' << s.candidates_surviving << ',' << s.mwis_vertices << ','
       << s.mwis_edges << ',' << format_fixed(s.objective, 9) << ',' << format_exact(s.solver_time)
       << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Post-hoc separation replay

namespace {

struct Replay {
  std::int64_t id;
  double start;
  double end;
  std::vector<Point3> points;
  std::vector<double> arc;

  Point3 at(double t, double speed) const {
    const double s = std::clamp(speed * (t - start), 0.0, arc.back());
    std::size_t k = 1;
    while (k + 1 < arc.size() && arc[k] < s) ++k;
    if (arc.size() == 1) return points[0];
    const double seg = arc[k] - arc[k - 1];
    const double u = seg > 0.0 ? (s - arc[k - 1]) / seg : 0.0;
    return points[k - 1] + u * (points[k] - points[k - 1]);
  }
};

}  // namespace

std::vector<SeparationViolation> check_separation(const RoutingNetwork& network,
                                                  const std::vector<ScheduledFlight>& flights,
                                                  const SimConfig& config) {
  std::vector<Replay> replays;
  for (const auto& f : flights) {
    Replay r{f.request_id, f.approved_at, 0.0, {}, {}};
    for (NodeId id : f.route.nodes) {
      const Point3& p = network.node(id).position;
      r.arc.push_back(r.points.empty() ? 0.0 : r.arc.back() + (p - r.points.back()).norm());
      r.points.push_back(p);
    }
    r.end = r.start + r.arc.back() / config.speed;
    replays.push_back(std::move(r));
  }

  const double dt = config.sample_interval;
  std::vector<SeparationViolation> out;
  for (std::size_t i = 0; i < replays.size(); ++i) {
    for (std::size_t j = i + 1; j < replays.size(); ++j) {
      const Replay& a = replays[i];
      const Replay& b = replays[j];
      const double lo = std::max(a.start, b.start);
      const double hi = std::min(a.end, b.end);
      if (lo > hi) continue;
      std::vector<double> times;
      for (auto k = static_cast<std::int64_t>(std::ceil(lo / dt - kTimeTol));
           static_cast<double>(k) * dt <= hi + kTimeTol; ++k) {
        times.push_back(static_cast<double>(k) * dt);
      }
      if (std::abs(a.end - b.end) <= kTimeTol * dt) times.push_back(a.end);
      for (double t : times) {
        const double d = (a.at(t, config.speed) - b.at(t, config.speed)).norm();
        if (d < config.d_min) {
          out.push_back({a.id, b.id, t, d});
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace uam
