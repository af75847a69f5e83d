#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "looptree/trees.hpp"

namespace looptree {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

/// Resource limits exceeded (vertex caps, memory guards).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A linear solve missed its residual target.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(double residual, const std::string& what) : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Rooted multigraph with at most four incident edge slots per vertex.
/// Parallel edges are stored as repeated neighbor entries; vertex 0 is the root.
class Looptree {
 public:
  static constexpr unsigned kMaxDegree = 4;

  Looptree() = default;
  explicit Looptree(std::size_t vertices) : adj_(vertices), deg_(vertices, 0) {}

  VertexId add_vertex() {
    adj_.push_back({kNoVertex, kNoVertex, kNoVertex, kNoVertex});
    deg_.push_back(0);
    return static_cast<VertexId>(adj_.size() - 1);
  }
  /// Adds one edge u-v; calling twice creates a parallel pair.
  void add_edge(VertexId u, VertexId v);
  void reserve(std::size_t vertices) {
    adj_.reserve(vertices);
    deg_.reserve(vertices);
  }

  std::size_t size() const { return adj_.size(); }
  VertexId root() const { return 0; }
  unsigned degree(VertexId v) const { return deg_[v]; }
  std::span<const VertexId> neighbors(VertexId v) const { return {adj_[v].data(), deg_[v]}; }
  std::size_t edge_count() const;

  /// Breadth-first distances from the root (kUnreached when disconnected).
  std::vector<std::uint32_t> bfs_distances() const;

  /// Renumber vertices: new id of v is perm[v]. perm must be a permutation.
  Looptree permuted(std::span<const VertexId> perm) const;

  struct Edge {
    VertexId u;
    VertexId v;
    unsigned multiplicity;
  };
  /// Distinct vertex pairs (u < v) with their multiplicities, sorted.
  std::vector<Edge> edge_list() const;

 private:
  std::vector<std::array<VertexId, kMaxDegree>> adj_;
  std::vector<std::uint8_t> deg_;
};

/// Loop transform: every vertex with children c_1..c_k (left to right) gets
/// edges v-c_1, c_1-c_2, ..., c_{k-1}-c_k, c_k-v, closing a (k+1)-cycle. A
/// single child produces a parallel pair. Vertex ids equal tree ids.
Looptree loop_transform(const PlaneTree& tree);

/// Graph distance from the root.
std::uint32_t loop_distance(const Looptree& loop, VertexId v);

/// Maximum distance from the root.
std::uint32_t loop_height(const Looptree& loop);

/// Induced sub-multigraph on {v : d(root, v) < radius}; the root stays 0 and
/// the remaining vertices keep their relative order.
Looptree ball(const Looptree& loop, std::uint32_t radius);

}  // namespace looptree
