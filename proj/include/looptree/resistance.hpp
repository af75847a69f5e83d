#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "looptree/loopspine.hpp"
#include "looptree/looptree.hpp"

namespace looptree {

/// R_eff between the root and {v : d(root, v) >= n}, unit conductance per edge.
struct ResistanceResult {
  double value = 0.0;
  std::uint32_t n = 0;
  double residual = 0.0;
  /// Potential with h(root) = 1 and h = 0 on the sink, for every vertex at
  /// distance <= n (other entries 0).
  std::vector<double> potential;
};

/// Every vertex at distance < n must have its full neighborhood in `graph`.
/// Throws std::invalid_argument if no vertex lies at distance >= n.
ResistanceResult effective_resistance(const Looptree& graph, const std::vector<std::uint32_t>& distance,
                                      std::uint32_t n);

/// Requires 1 <= n <= radius - 1.
ResistanceResult effective_resistance(const LoopspineBall& ball, std::uint32_t n);

enum class SeparatorCase { NoMarkNear, NoMarkFar, MarkAtK, MarkAtRootCycle };

std::string to_string(SeparatorCase c);

/// A set S separating the root from B(n)^c, all of it at distance `distance`.
struct Separator {
  std::vector<VertexId> vertices;
  std::uint32_t distance = 0;
  SeparatorCase kind = SeparatorCase::NoMarkFar;
  /// Index (0-based) of the first cycle reaching level n/2, and of the first
  /// cycle carrying a mark (cycles.size() when none up to first_high).
  std::size_t first_high = 0;
  std::size_t first_mark = 0;
  /// Result of the breadth-first check that S blocks every path to B(n)^c.
  bool separates = false;
};

/// Open loopspine vertices at distance < n/2 are marked when their outgrowth
/// reaches height >= n/2 (decided exactly from the ball). Requires n >= 2
/// and radius >= n + 1.
Separator find_separator(const LoopspineBall& ball, std::uint32_t n);

/// D_n / 2, a lower bound on R_eff(root, B(n)^c).
double separator_lower_bound(const LoopspineBall& ball, std::uint32_t n);

}  // namespace looptree
