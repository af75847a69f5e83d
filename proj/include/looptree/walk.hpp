#pragma once

#include <cstdint>
#include <vector>

#include "looptree/loopspine.hpp"
#include "looptree/looptree.hpp"
#include "looptree/rng.hpp"

namespace looptree {

/// Distribution of simple random walk started at the root, evolved exactly.
/// P(u -> v) = (number of u-v edges) / deg(u).
///
/// On a ball the vertex ids are sorted by distance, so at step t only the
/// prefix of vertices at distance <= t is touched. With a horizon H set, mass
/// at distance > H - t can no longer return to the root by time H and is
/// moved to dropped(); mass() + dropped() stays 1.
class KernelEvolution {
 public:
  /// Finite graph, all vertices active from the start.
  explicit KernelEvolution(const Looptree& graph);
  /// Ball, exact for every time < radius. horizon = 0 disables pruning.
  KernelEvolution(const LoopspineBall& ball, std::uint64_t horizon);

  void step();
  std::uint64_t time() const { return time_; }
  double at(VertexId v) const { return state_[v]; }
  double root_probability() const { return state_[0]; }
  double mass() const;
  double dropped() const { return dropped_; }
  const std::vector<double>& state() const { return state_; }

 private:
  std::size_t prefix(std::int64_t max_distance) const;

  const Looptree& graph_;
  const std::vector<std::size_t>* levels_ = nullptr;
  std::uint64_t horizon_ = 0;
  std::uint64_t time_ = 0;
  std::size_t active_ = 0;
  double dropped_ = 0.0;
  std::vector<double> state_;
  std::vector<double> next_;
  std::vector<double> inv_degree_;
};

struct ReturnProbabilities {
  /// p[k] = p_{2k}(root, root), k = 0..n_max.
  std::vector<double> p;
  /// Largest |mass + dropped - 1| over all steps.
  double max_mass_error = 0.0;
  /// Mass pruned by the horizon at the end (0 without pruning).
  double dropped = 0.0;
};

/// Exact p_0, p_2, ..., p_{2 n_max} at the root of a finite graph.
ReturnProbabilities return_probabilities(const Looptree& graph, std::uint32_t n_max);

/// Exact p_{2k} at the root of the infinite looptree. Requires radius >=
/// 2 n_max + 1; with `prune` (light-cone cutoff at horizon 2 n_max) the
/// answer is the same and radius >= n_max + 2 suffices.
ReturnProbabilities return_probabilities(const LoopspineBall& ball, std::uint32_t n_max, bool prune = false);

struct WalkSummary {
  VertexId endpoint = 0;
  std::uint64_t steps = 0;
  std::uint64_t returns = 0;
  std::uint32_t max_distance = 0;
  /// first_exit[r] = first time the walk is at distance >= r (tau_r), for
  /// r = 1..radius-1; 0 when not reached. Entry 0 is unused.
  std::vector<std::uint64_t> first_exit;
  /// The walk stopped on a frontier vertex before using all steps.
  bool truncated = false;
};

/// One walk of at most `steps` steps from the root; stops at the frontier.
WalkSummary walk_sample(const LoopspineBall& ball, std::uint64_t steps, Rng& rng);

struct EscapeTimeSolution {
  std::uint32_t radius = 0;
  /// Expected exit time from B(radius) for every vertex inside it (by id).
  std::vector<double> t;
  double root = 0.0;
  double residual = 0.0;
};

/// T(x) = 1 + sum_{x-y} T(y) / deg(x) on B(R), T = 0 outside. `distance`
/// gives d(root, v) for every vertex; every vertex at distance < R must have
/// its full neighborhood in `graph`.
EscapeTimeSolution expected_escape_time(const Looptree& graph, const std::vector<std::uint32_t>& distance,
                                        std::uint32_t radius);

/// Requires ball radius >= R + 1.
EscapeTimeSolution expected_escape_time(const LoopspineBall& ball, std::uint32_t radius);

struct EscapeSample {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t walks = 0;
};

/// Monte Carlo mean of tau_R over independent walks. Requires ball radius >= R + 1.
EscapeSample sample_escape_time(const LoopspineBall& ball, std::uint32_t radius, std::size_t walks, Rng& rng);

}  // namespace looptree
