#include "looptree/walk.hpp"

#include <cmath>
#include <stdexcept>

#include "solve.hpp"

namespace looptree {

KernelEvolution::KernelEvolution(const Looptree& graph)
    : graph_(graph), state_(graph.size(), 0.0), next_(graph.size(), 0.0), inv_degree_(graph.size(), 0.0) {
  for (VertexId v = 0; v < graph.size(); ++v)
    if (graph.degree(v) > 0) inv_degree_[v] = 1.0 / graph.degree(v);
  state_[0] = 1.0;
  active_ = graph.size();
}

KernelEvolution::KernelEvolution(const LoopspineBall& ball, std::uint64_t horizon)
    : KernelEvolution(ball.graph) {
  levels_ = &ball.level_offsets;
  horizon_ = horizon;
  active_ = prefix(0);
}

std::size_t KernelEvolution::prefix(std::int64_t max_distance) const {
  if (!levels_) return graph_.size();
  if (max_distance < 0) return 0;
  const std::size_t top = levels_->size() - 1;
  return (*levels_)[std::min<std::size_t>(static_cast<std::size_t>(max_distance) + 1, top)];
}

void KernelEvolution::step() {
  std::size_t end = graph_.size();
  std::size_t keep = end;
  if (levels_) {
    const auto t = static_cast<std::int64_t>(time_);
    std::int64_t reach = t;
    std::int64_t next_reach = t + 1;
    if (horizon_ > 0) {
      const auto h = static_cast<std::int64_t>(horizon_);
      if (t + 1 > h) throw std::logic_error("KernelEvolution: stepped past the horizon");
      reach = std::min(t, h - t);
      next_reach = std::min(t + 1, h - t - 1);
    }
    if (reach + 1 >= static_cast<std::int64_t>(levels_->size() - 1))
      throw std::logic_error("KernelEvolution: walk left the materialized ball");
    end = prefix(reach + 1);
    keep = prefix(next_reach);
  }
  for (std::size_t v = 0; v < end; ++v) {
    double s = 0.0;
    for (VertexId u : graph_.neighbors(static_cast<VertexId>(v))) s += state_[u] * inv_degree_[u];
    next_[v] = s;
  }
  // Zero-degree root: the walk stays put.
  if (graph_.degree(0) == 0) next_[0] = state_[0];
  for (std::size_t v = keep; v < end; ++v) {
    dropped_ += next_[v];
    next_[v] = 0.0;
  }
  state_.swap(next_);
  active_ = keep;
  ++time_;
}

double KernelEvolution::mass() const {
  double s = 0.0;
  for (std::size_t v = 0; v < active_; ++v) s += state_[v];
  return s;
}

namespace {

ReturnProbabilities run_kernel(KernelEvolution& k, std::uint32_t n_max) {
  ReturnProbabilities out;
  out.p.push_back(k.root_probability());
  for (std::uint32_t i = 0; i < n_max; ++i) {
    k.step();
    out.max_mass_error = std::max(out.max_mass_error, std::abs(k.mass() + k.dropped() - 1.0));
    k.step();
    out.max_mass_error = std::max(out.max_mass_error, std::abs(k.mass() + k.dropped() - 1.0));
    out.p.push_back(k.root_probability());
  }
  out.dropped = k.dropped();
  return out;
}

}  // namespace

ReturnProbabilities return_probabilities(const Looptree& graph, std::uint32_t n_max) {
  KernelEvolution k(graph);
  return run_kernel(k, n_max);
}

ReturnProbabilities return_probabilities(const LoopspineBall& ball, std::uint32_t n_max, bool prune) {
  const std::uint64_t need = prune ? std::uint64_t{n_max} + 2 : 2 * std::uint64_t{n_max} + 1;
  if (ball.radius < need)
    throw std::invalid_argument("return_probabilities: ball radius " + std::to_string(ball.radius) +
                                " is below the required " + std::to_string(need));
  KernelEvolution k(ball, prune ? 2 * std::uint64_t{n_max} : 0);
  return run_kernel(k, n_max);
}

WalkSummary walk_sample(const LoopspineBall& ball, std::uint64_t steps, Rng& rng) {
  WalkSummary w;
  w.first_exit.assign(ball.radius, 0);
  VertexId v = 0;
  while (w.steps < steps) {
    if (ball.frontier(v) || ball.graph.degree(v) == 0) {
      w.truncated = true;
      break;
    }
    const auto nb = ball.graph.neighbors(v);
    v = nb[rng.uniform_int(0, nb.size() - 1)];
    ++w.steps;
    const std::uint32_t d = ball.vertices[v].distance;
    if (v == 0) ++w.returns;
    if (d > w.max_distance) {
      w.max_distance = d;
      w.first_exit[d] = w.steps;
    }
  }
  w.endpoint = v;
  return w;
}

EscapeTimeSolution expected_escape_time(const Looptree& graph, const std::vector<std::uint32_t>& distance,
                                        std::uint32_t radius) {
  if (radius < 1) throw std::invalid_argument("expected_escape_time: radius must be >= 1");
  const std::size_t n = graph.size();
  std::vector<std::int64_t> index(n, -1);
  std::vector<VertexId> inside;
  for (VertexId v = 0; v < n; ++v)
    if (distance[v] < radius) {
      index[v] = static_cast<std::int64_t>(inside.size());
      inside.push_back(v);
    }
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(inside.size() * 5);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(inside.size()));
  for (std::size_t i = 0; i < inside.size(); ++i) {
    const VertexId x = inside[i];
    const double deg = graph.degree(x);
    if (deg == 0) throw std::invalid_argument("expected_escape_time: isolated vertex inside the ball");
    entries.emplace_back(i, i, deg);
    for (VertexId y : graph.neighbors(x))
      if (index[y] >= 0) entries.emplace_back(i, index[y], -1.0);
    rhs[static_cast<Eigen::Index>(i)] = deg;
  }
  EscapeTimeSolution sol;
  sol.radius = radius;
  const Eigen::VectorXd t =
      detail::solve_spd(static_cast<Eigen::Index>(inside.size()), entries, rhs, &sol.residual);
  sol.t.assign(n, 0.0);
  for (std::size_t i = 0; i < inside.size(); ++i) sol.t[inside[i]] = t[static_cast<Eigen::Index>(i)];
  sol.root = sol.t[0];
  return sol;
}

EscapeTimeSolution expected_escape_time(const LoopspineBall& ball, std::uint32_t radius) {
  if (ball.radius < std::uint64_t{radius} + 1)
    throw std::invalid_argument("expected_escape_time: ball radius must be at least R + 1");
  std::vector<std::uint32_t> distance(ball.size());
  for (std::size_t v = 0; v < ball.size(); ++v) distance[v] = ball.vertices[v].distance;
  return expected_escape_time(ball.graph, distance, radius);
}

EscapeSample sample_escape_time(const LoopspineBall& ball, std::uint32_t radius, std::size_t walks, Rng& rng) {
  if (ball.radius < std::uint64_t{radius} + 1)
    throw std::invalid_argument("sample_escape_time: ball radius must be at least R + 1");
  EscapeSample out;
  out.walks = walks;
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t w = 0; w < walks; ++w) {
    VertexId v = 0;
    std::uint64_t t = 0;
    while (ball.vertices[v].distance < radius) {
      const auto nb = ball.graph.neighbors(v);
      v = nb[rng.uniform_int(0, nb.size() - 1)];
      ++t;
    }
    sum += static_cast<double>(t);
    sum2 += static_cast<double>(t) * static_cast<double>(t);
  }
  if (walks > 0) {
    out.mean = sum / walks;
    if (walks > 1) {
      const double var = (sum2 - walks * out.mean * out.mean) / (walks - 1);
      out.std_error = std::sqrt(std::max(var, 0.0) / walks);
    }
  }
  return out;
}

}  // namespace looptree
