#include "uam/conflict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uam {

double route_weight(double route_length, double shortest_length) {
  if (!(shortest_length > 0.0)) {
    throw std::invalid_argument("route_weight: shortest_length must be positive");
  }
  // Equal lengths summed in different orders may differ in the last bits.
  if (route_length < shortest_length * (1.0 - 1e-12)) {
    throw std::invalid_argument("route_weight: route shorter than the shortest path");
  }
  return std::min(1.0, shortest_length / route_length);
}

namespace {

constexpr double kLatticeTol = 1e-9;

struct LatticeView {
  std::int64_t first = 0;      // lattice index of samples[0]
  std::size_t on_lattice = 0;  // number of leading samples on the lattice
  bool tail_off_lattice = false;
};

std::int64_t lattice_index(double time, double interval, const char* what) {
  const double q = time / interval;
  const double r = std::round(q);
  if (std::abs(q - r) > kLatticeTol * std::max(1.0, std::abs(q))) {
    throw LatticeError(std::string(what) + " is not aligned to the sampling lattice");
  }
  return static_cast<std::int64_t>(r);
}

LatticeView view_of(const Trajectory& t) {
  LatticeView v;
  v.first = lattice_index(t.start_time, t.sample_interval, "trajectory start");
  v.on_lattice = t.samples.size();
  if (t.samples.size() > 1) {
    const double q = t.end_time / t.sample_interval;
    if (std::abs(q - std::round(q)) > kLatticeTol * std::max(1.0, std::abs(q))) {
      v.tail_off_lattice = true;
      v.on_lattice -= 1;
    }
  }
  return v;
}

}  // namespace

std::optional<double> min_separation(const Trajectory& a, const Trajectory& b) {
  if (a.samples.empty() || b.samples.empty()) return std::nullopt;
  if (std::abs(a.sample_interval - b.sample_interval) >
      kLatticeTol * std::max(a.sample_interval, b.sample_interval)) {
    throw LatticeError("trajectories use different sample intervals");
  }
  if (a.end_time < b.start_time || b.end_time < a.start_time) return std::nullopt;

  const LatticeView va = view_of(a);
  const LatticeView vb = view_of(b);
  double best = std::numeric_limits<double>::infinity();
  bool any = false;

  const std::int64_t lo = std::max(va.first, vb.first);
  const std::int64_t hi = std::min(va.first + static_cast<std::int64_t>(va.on_lattice),
                                   vb.first + static_cast<std::int64_t>(vb.on_lattice));
  for (std::int64_t k = lo; k < hi; ++k) {
    const auto& pa = a.samples[static_cast<std::size_t>(k - va.first)].position;
    const auto& pb = b.samples[static_cast<std::size_t>(k - vb.first)].position;
    best = std::min(best, (pa - pb).norm());
    any = true;
  }
  if (va.tail_off_lattice && vb.tail_off_lattice &&
      std::abs(a.end_time - b.end_time) <= kLatticeTol * a.sample_interval) {
    best = std::min(best, (a.samples.back().position - b.samples.back().position).norm());
    any = true;
  }
  if (!any) return std::nullopt;
  return best;
}

bool in_conflict(const Trajectory& a, const Trajectory& b, double d_min) {
  const auto sep = min_separation(a, b);
  return sep && *sep < d_min;
}

std::vector<std::size_t> filter_against_active(const std::vector<Trajectory>& candidates,
                                               const std::vector<Trajectory>& active,
                                               double d_min) {
  if (!(d_min > 0.0)) throw std::invalid_argument("filter_against_active: d_min must be positive");
  std::vector<std::size_t> kept;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const bool clear = std::none_of(active.begin(), active.end(), [&](const Trajectory& f) {
      return in_conflict(candidates[c], f, d_min);
    });
    if (clear) kept.push_back(c);
  }
  return kept;
}

ConflictGraph build_conflict_graph(const std::vector<RequestCandidates>& requests, double d_min) {
  if (!(d_min > 0.0)) throw std::invalid_argument("build_conflict_graph: d_min must be positive");
  ConflictGraph g;
  std::vector<std::pair<std::size_t, std::size_t>> origin;  // (request slot, candidate)
  for (std::size_t r = 0; r < requests.size(); ++r) {
    for (std::size_t c = 0; c < requests[r].candidates.size(); ++c) {
      const double w = requests[r].candidates[c].weight;
      if (!(w > 0.0 && w <= 1.0)) {
        throw std::invalid_argument("build_conflict_graph: candidate weight outside (0, 1]");
      }
      g.vertices.push_back({static_cast<std::int32_t>(g.vertices.size()), requests[r].request_id,
                            static_cast<std::int32_t>(c), w});
      origin.emplace_back(r, c);
    }
  }
  const auto n = g.vertices.size();
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const auto [ru, cu] = origin[u];
      const auto [rv, cv] = origin[v];
      const auto uid = static_cast<std::int32_t>(u);
      const auto vid = static_cast<std::int32_t>(v);
      if (ru == rv) {
        g.edges.push_back({uid, vid, EdgeKind::same_request});
      } else if (in_conflict(requests[ru].candidates[cu].trajectory,
                             requests[rv].candidates[cv].trajectory, d_min)) {
        g.edges.push_back({uid, vid, EdgeKind::cross_conflict});
      }
    }
  }
  return g;
}

}  // namespace uam
