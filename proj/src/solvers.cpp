#include "uam/solvers.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "uam/random.hpp"

namespace uam {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double kWeightTol = 1e-12;

}  // namespace

// ---------------------------------------------------------------------------
// Greedy

SolverResult greedy_mwis(const MwisProblem& problem) {
  const auto start = Clock::now();
  const auto n = problem.size();
  std::vector<bool> alive(n, true);
  std::vector<std::size_t> degree(n);
  for (std::size_t i = 0; i < n; ++i) degree[i] = problem.degree(i);

  Assignment chosen(n);
  std::size_t remaining = n;
  std::vector<std::size_t> order;
  order.reserve(n);

  while (remaining > 0) {
    order.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (alive[i]) order.push_back(i);
    }
    auto ratio = [&](std::size_t i) { return problem.weight(i) / (degree[i] + 1.0); };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ratio(a) > ratio(b); });

    std::size_t pick = order.front();
    for (std::size_t i : order) {
      double load = 0.0;
      for (auto j : problem.neighbors(i)) {
        if (alive[j]) load += ratio(static_cast<std::size_t>(j));
      }
      if (load <= problem.weight(i) + kWeightTol) {
        pick = i;
        break;
      }
    }

    chosen.bits[pick] = 1;
    std::vector<std::size_t> removed{pick};
    for (auto j : problem.neighbors(pick)) {
      if (alive[j]) removed.push_back(static_cast<std::size_t>(j));
    }
    for (std::size_t r : removed) alive[r] = false;
    remaining -= removed.size();
    for (std::size_t r : removed) {
      for (auto j : problem.neighbors(r)) {
        if (alive[j]) --degree[j];
      }
    }
  }

  SolverResult result;
  result.assignment = std::move(chosen);
  result.objective = objective(problem, result.assignment);
  result.wall_time = seconds_since(start);
  return result;
}

// ---------------------------------------------------------------------------
// Exact branch and bound

namespace {

class Bitset {
 public:
  explicit Bitset(std::size_t n = 0) : words_((n + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }

  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  /// Lowest set index; must not be called on an empty set.
  std::size_t first() const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    }
    return words_.size() * 64;
  }

  Bitset minus(const Bitset& other) const {
    Bitset r = *this;
    for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] &= ~other.words_[w];
    return r;
  }

  Bitset& operator&=(const Bitset& other) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
    return *this;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        f(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

class BranchAndBound {
 public:
  BranchAndBound(const MwisProblem& problem, double time_limit)
      : problem_(problem), time_limit_(time_limit), start_(Clock::now()) {
    const auto n = problem.size();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    auto ratio = [&](std::size_t i) { return problem.weight(i) / (problem.degree(i) + 1.0); };
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return ratio(a) > ratio(b); });
    std::vector<std::size_t> position(n);
    for (std::size_t p = 0; p < n; ++p) position[order_[p]] = p;

    weight_.resize(n);
    closed_.assign(n, Bitset(n));
    adjacent_.assign(n, Bitset(n));
    for (std::size_t p = 0; p < n; ++p) {
      weight_[p] = problem.weight(order_[p]);
      closed_[p].set(p);
      for (auto j : problem.neighbors(order_[p])) {
        closed_[p].set(position[static_cast<std::size_t>(j)]);
        adjacent_[p].set(position[static_cast<std::size_t>(j)]);
      }
    }
    current_.assign(n, 0);
    best_set_.assign(n, 0);
  }

  void seed_incumbent(const Assignment& a, double value) {
    for (std::size_t p = 0; p < order_.size(); ++p) best_set_[p] = a.bits[order_[p]];
    best_ = value;
  }

  bool run() {
    Bitset all(order_.size());
    for (std::size_t p = 0; p < order_.size(); ++p) all.set(p);
    search(all, 0.0);
    return !timed_out_;
  }

  Assignment best_assignment() const {
    Assignment a(order_.size());
    for (std::size_t p = 0; p < order_.size(); ++p) a.bits[order_[p]] = best_set_[p];
    return a;
  }

 private:
  // Greedy clique partition of `pool`; every independent set takes at most one
  // vertex per clique, so the per-clique maxima bound the remaining gain.
  double clique_bound(const Bitset& pool) const {
    std::vector<Bitset> common;
    std::vector<double> top;
    pool.for_each([&](std::size_t p) {
      for (std::size_t c = 0; c < common.size(); ++c) {
        if (common[c].test(p)) {
          common[c] &= adjacent_[p];
          top[c] = std::max(top[c], weight_[p]);
          return;
        }
      }
      common.push_back(adjacent_[p]);
      top.push_back(weight_[p]);
    });
    return std::accumulate(top.begin(), top.end(), 0.0);
  }

  void search(const Bitset& pool, double value) {
    if (timed_out_) return;
    if ((++nodes_ & 0x3ff) == 0 && time_limit_ > 0.0 && seconds_since(start_) > time_limit_) {
      timed_out_ = true;
      return;
    }
    if (pool.none()) {
      if (value > best_ + kWeightTol) {
        best_ = value;
        best_set_ = current_;
      }
      return;
    }
    double rest = 0.0;
    pool.for_each([&](std::size_t p) { rest += weight_[p]; });
    if (value + rest <= best_ + kWeightTol) return;
    if (value + clique_bound(pool) <= best_ + kWeightTol) return;

    const std::size_t v = pool.first();
    current_[v] = 1;
    search(pool.minus(closed_[v]), value + weight_[v]);
    current_[v] = 0;
    Bitset without = pool;
    without.reset(v);
    search(without, value);
  }

  const MwisProblem& problem_;
  double time_limit_;
  Clock::time_point start_;
  std::vector<std::size_t> order_;  // position -> original vertex
  std::vector<double> weight_;
  std::vector<Bitset> closed_;    // closed neighbourhoods, by position
  std::vector<Bitset> adjacent_;  // open neighbourhoods, by position
  std::vector<std::uint8_t> current_;
  std::vector<std::uint8_t> best_set_;
  double best_ = 0.0;
  std::uint64_t nodes_ = 0;
  bool timed_out_ = false;
};

}  // namespace

SolverResult exact_mwis(const MwisProblem& problem, double time_limit) {
  const auto start = Clock::now();
  BranchAndBound bb(problem, time_limit);
  const SolverResult warm = greedy_mwis(problem);
  bb.seed_incumbent(warm.assignment, warm.objective);
  const bool proven = bb.run();

  SolverResult result;
  result.assignment = bb.best_assignment();
  result.objective = objective(problem, result.assignment);
  result.optimality_proven = proven;
  result.wall_time = seconds_since(start);
  return result;
}

// ---------------------------------------------------------------------------
// Sampling

void SaSchedule::validate() const {
  if (num_samples < 1 || sweeps_per_sample < 1) {
    throw std::invalid_argument("SA schedule needs num_samples >= 1 and sweeps_per_sample >= 1");
  }
  if (!(beta_start > 0.0) || !(beta_start < beta_end)) {
    throw std::invalid_argument("SA schedule needs 0 < beta_start < beta_end");
  }
}

namespace {

struct SparseQubo {
  std::vector<double> linear;
  std::vector<std::vector<std::pair<std::size_t, double>>> coupled;

  explicit SparseQubo(const Qubo& q) : linear(q.linear), coupled(q.n) {
    for (const auto& [key, value] : q.quadratic) {
      const auto i = static_cast<std::size_t>(key.first);
      const auto j = static_cast<std::size_t>(key.second);
      coupled[i].emplace_back(j, value);
      coupled[j].emplace_back(i, value);
    }
  }

  std::size_t size() const { return linear.size(); }

  /// field_i = linear_i + sum_j Q_ij x_j; flipping i changes energy by
  /// (1 - 2 x_i) * field_i.
  std::vector<double> fields(const std::vector<std::uint8_t>& x) const {
    std::vector<double> f = linear;
    for (std::size_t i = 0; i < size(); ++i) {
      for (const auto& [j, value] : coupled[i]) {
        if (x[j]) f[i] += value;
      }
    }
    return f;
  }

  void flip(std::vector<std::uint8_t>& x, std::vector<double>& f, std::size_t i) const {
    const double sign = x[i] ? -1.0 : 1.0;
    x[i] ^= 1u;
    for (const auto& [j, value] : coupled[i]) f[j] += sign * value;
  }
};

}  // namespace

SampleSet sa_sample_qubo(const Qubo& q, const SaSchedule& schedule) {
  schedule.validate();
  const SparseQubo model(q);
  const auto n = model.size();
  const auto sweeps = static_cast<std::size_t>(schedule.sweeps_per_sample);

  std::vector<double> betas(sweeps);
  for (std::size_t s = 0; s < sweeps; ++s) {
    const double u = sweeps == 1 ? 1.0 : static_cast<double>(s) / static_cast<double>(sweeps - 1);
    betas[s] = schedule.beta_start * std::pow(schedule.beta_end / schedule.beta_start, u);
  }

  SampleSet out;
  out.assignments.reserve(static_cast<std::size_t>(schedule.num_samples));
  for (int k = 0; k < schedule.num_samples; ++k) {
    std::mt19937_64 rng(derive_seed(schedule.seed, static_cast<std::uint64_t>(k)));
    std::vector<std::uint8_t> x(n);
    for (auto& bit : x) bit = static_cast<std::uint8_t>(rng() >> 63);

    const auto t0 = Clock::now();
    auto f = model.fields(x);
    for (double beta : betas) {
      for (std::size_t i = 0; i < n; ++i) {
        const double delta = x[i] ? -f[i] : f[i];
        if (delta <= 0.0 || uniform01(rng) < std::exp(-beta * delta)) model.flip(x, f, i);
      }
    }
    out.anneal_time += seconds_since(t0);
    out.assignments.emplace_back(std::move(x));
  }
  return out;
}

Assignment steepest_descent(const Qubo& q, Assignment a) {
  if (a.size() != q.n) throw MwisError("steepest_descent: assignment length mismatch");
  const SparseQubo model(q);
  auto f = model.fields(a.bits);
  for (;;) {
    std::size_t best = a.size();
    double best_delta = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double delta = a.bits[i] ? -f[i] : f[i];
      if (delta < best_delta) {
        best_delta = delta;
        best = i;
      }
    }
    if (best == a.size()) break;
    model.flip(a.bits, f, best);
  }
  return a;
}

namespace {

bool repair(const MwisProblem& problem, Assignment& a) {
  bool changed = false;
  for (auto [i, j] : problem.edges()) {
    if (a[i] && a[j]) {
      // Clear the lower-weight endpoint; on equal weights keep the lower index.
      const auto drop = problem.weight(j) <= problem.weight(i) ? j : i;
      a.bits[drop] = 0;
      changed = true;
    }
  }
  return changed;
}

}  // namespace

SolverResult solve_mwis_via_sampler(const MwisProblem& problem, double lambda,
                                    const SaSchedule& schedule) {
  const auto start = Clock::now();
  const Qubo q = to_qubo(problem, lambda);
  SolverResult result;
  result.assignment = Assignment(problem.size());
  if (problem.size() == 0) {
    result.wall_time = seconds_since(start);
    return result;
  }

  SampleSet set = sa_sample_qubo(q, schedule);
  result.anneal_time = set.anneal_time;
  result.samples.reserve(set.assignments.size());
  bool have_best = false;
  for (auto& raw : set.assignments) {
    Assignment refined = steepest_descent(q, std::move(raw));
    SampleRecord rec;
    rec.energy = q.energy(refined);
    rec.repaired = repair(problem, refined);
    rec.objective = objective(problem, refined);
    if (!have_best || rec.objective > result.objective + kWeightTol) {
      result.assignment = refined;
      result.objective = rec.objective;
      have_best = true;
    }
    result.samples.push_back(rec);
  }
  result.wall_time = seconds_since(start);
  return result;
}

// ---------------------------------------------------------------------------

std::optional<SolverKind> parse_solver(std::string_view name) {
  if (name == "greedy") return SolverKind::greedy;
  if (name == "exact") return SolverKind::exact;
  if (name == "sa") return SolverKind::sa;
  if (name == "fifo" || name == "fifo-none") return SolverKind::fifo;
  return std::nullopt;
}

std::string_view solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::greedy: return "greedy";
    case SolverKind::exact: return "exact";
    case SolverKind::sa: return "sa";
    case SolverKind::fifo: return "fifo";
  }
  return "unknown";
}

SolverResult solve(const MwisProblem& problem, const SolverOptions& options) {
  switch (options.kind) {
    case SolverKind::greedy: return greedy_mwis(problem);
    case SolverKind::exact: return exact_mwis(problem, options.exact_time_limit);
    case SolverKind::sa: return solve_mwis_via_sampler(problem, options.lambda, options.schedule);
    case SolverKind::fifo: break;
  }
  throw std::invalid_argument("fifo is a scheduling baseline, not an MWIS solver");
}

}  // namespace uam
