#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "looptree/looptree.hpp"
#include "looptree/offspring.hpp"
#include "looptree/rng.hpp"

namespace looptree {

enum class VertexKind : std::uint8_t { Closed, Open, Outgrowth };

inline constexpr std::uint32_t kNoCycle = std::numeric_limits<std::uint32_t>::max();
inline constexpr std::uint64_t kDefaultVertexCap = std::uint64_t{1} << 31;

/// One cycle C_i of the loopspine. The cycle has length X + 1; position 0 is
/// its root x_i and position U (uniform on 1..X) is the root of the next cycle.
struct CycleRecord {
  std::uint64_t x = 0;              // X_i
  std::uint64_t u = 0;              // U_i
  std::uint64_t y = 0;              // Y_i = min(U_i, X_i - U_i + 1)
  std::uint64_t root_distance = 0;  // chain distance of x_i
  VertexId root = kNoVertex;
  VertexId next_root = kNoVertex;   // x_{i+1}, if materialized
  /// Materialized positions 1..X with their vertex ids, increasing position.
  std::vector<std::pair<std::uint64_t, VertexId>> members;

  /// Largest chain distance reached on the cycle.
  std::uint64_t max_distance() const { return root_distance + (x + 1) / 2; }
};

struct VertexRecord {
  std::uint32_t distance = 0;
  VertexKind kind = VertexKind::Outgrowth;
  /// For outgrowth vertices the open spine vertex they hang from; open
  /// vertices point to themselves; closed vertices have none.
  VertexId outgrowth_root = kNoVertex;
  /// Spine vertices: the cycle they are a non-root member of (x_1 has none).
  std::uint32_t cycle = kNoCycle;
  std::uint64_t position = 0;
  /// Open vertices: largest distance reached inside their outgrowth.
  std::uint32_t outgrowth_reach = 0;
};

/// The ball B(R; L) of the infinite looptree, materialized. Vertex ids are
/// sorted by distance from the root (root = 0).
struct LoopspineBall {
  std::uint32_t radius = 0;
  std::vector<CycleRecord> cycles;
  /// Chain distance of the first cycle root outside the ball (>= radius).
  std::uint64_t terminal_distance = 0;
  std::vector<VertexRecord> vertices;
  Looptree graph;
  /// Vertices at distance d occupy ids [level_offsets[d], level_offsets[d+1]).
  std::vector<std::size_t> level_offsets;

  std::size_t size() const { return vertices.size(); }
  /// All potential unexplored neighbors of a frontier vertex lie outside B(R).
  bool frontier(VertexId v) const { return vertices[v].distance + 1 >= radius; }
  /// Number of vertices at distance < n.
  std::size_t volume(std::uint32_t n) const;
  /// Height of the (possibly pruned) outgrowth hanging from an open vertex.
  std::uint32_t outgrowth_height(VertexId open_vertex) const;
};

/// Generate B(R; L) lazily. Cycle lengths are size-biased draws plus one,
/// attachment points are uniform, and open vertices at distance < R - 1 carry
/// independent Loop(GW) outgrowths expanded only while distances stay below R.
/// Throws ResourceError if more than `vertex_cap` vertices would be created.
LoopspineBall generate_loopspine_ball(const OffspringDistribution& dist, std::uint32_t radius, Rng& rng,
                                      std::uint64_t vertex_cap = kDefaultVertexCap);

/// Same random realization as generate_loopspine_ball with the same stream,
/// but only the number of vertices at each distance 0..R-1 is recorded.
std::vector<std::uint64_t> loopspine_level_counts(const OffspringDistribution& dist, std::uint32_t radius,
                                                  Rng& rng, std::uint64_t vertex_cap = kDefaultVertexCap);

/// Level counts of a single outgrowth Loop(tau), tau ~ GW, within distance
/// < radius of its root (index d = number of vertices at distance d).
std::vector<std::uint64_t> outgrowth_level_counts(const OffspringDistribution& dist, std::uint32_t radius,
                                                  Rng& rng, std::uint64_t vertex_cap = kDefaultVertexCap);

/// Only the spine cycles, generated until the first cycle root at distance
/// >= radius (no outgrowths, no vertices).
std::vector<CycleRecord> generate_loopspine_cycles(const OffspringDistribution& dist, std::uint64_t radius,
                                                   Rng& rng);

/// |A_n|: spine vertices at chain distance <= n. Requires n <= radius.
std::uint64_t loopspine_volume(const LoopspineBall& ball, std::uint64_t n);
std::uint64_t loopspine_volume(const std::vector<CycleRecord>& cycles, std::uint64_t n);

/// R_n: open spine vertices at chain distance <= n. Requires n <= radius.
std::uint64_t open_count(const LoopspineBall& ball, std::uint64_t n);
std::uint64_t open_count(const std::vector<CycleRecord>& cycles, std::uint64_t terminal_distance,
                         std::uint64_t n);

/// P(Y > 1) for Y = min(U, X - U + 1), X ~ hat xi, U uniform on 1..X.
double open_probability(const OffspringDistribution& dist);

/// Kesten's tree truncated at tree depth `depth`: a spine of special vertices
/// with size-biased offspring, one uniformly chosen special child each, and
/// GW subtrees on the normal children. Vertices at depth `depth` are leaves.
PlaneTree sample_kesten_tree(const OffspringDistribution& dist, std::uint32_t depth, Rng& rng,
                             std::size_t max_vertices = std::size_t{1} << 26);

}  // namespace looptree
