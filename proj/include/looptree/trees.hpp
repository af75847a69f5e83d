#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "looptree/offspring.hpp"
#include "looptree/rng.hpp"

namespace looptree {

/// Finite rooted plane tree stored as outdegrees in depth-first order.
/// Vertex 0 is the root; children of every vertex are kept left to right.
class PlaneTree {
 public:
  /// Throws std::invalid_argument if `out` is not a valid Lukasiewicz excursion.
  explicit PlaneTree(std::vector<std::uint32_t> out);

  std::size_t size() const { return out_.size(); }
  std::span<const std::uint32_t> outdegrees() const { return out_; }
  std::uint32_t out(std::size_t v) const { return out_[v]; }
  /// Parent in depth-first numbering; -1 for the root.
  std::int64_t parent(std::size_t v) const { return parent_[v]; }
  std::span<const std::uint32_t> children(std::size_t v) const {
    return std::span<const std::uint32_t>(children_).subspan(child_offset_[v], out_[v]);
  }
  std::uint32_t depth(std::size_t v) const { return depth_[v]; }

  bool operator==(const PlaneTree& other) const { return out_ == other.out_; }

 private:
  std::vector<std::uint32_t> out_;
  std::vector<std::int64_t> parent_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::size_t> child_offset_;
  std::vector<std::uint32_t> children_;
};

/// Steps out(u_j) - 1 of the depth-first traversal.
struct LukasiewiczPath {
  std::vector<std::int64_t> steps;
  /// W_0 .. W_N with W_0 = 0.
  std::vector<std::int64_t> partial_sums() const;
};

/// Raised by decode_lukasiewicz; `index` is the first j at which W_j breaks
/// the excursion property.
class InvalidExcursion : public std::invalid_argument {
 public:
  InvalidExcursion(std::size_t index, const std::string& what)
      : std::invalid_argument(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// A Galton-Watson sample exceeded the vertex cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::size_t partial_size, const std::string& what)
      : std::runtime_error(what), partial_size_(partial_size) {}
  std::size_t partial_size() const { return partial_size_; }

 private:
  std::size_t partial_size_;
};

/// Conditioned sampling gave up.
class AttemptsExhausted : public std::runtime_error {
 public:
  AttemptsExhausted(double acceptance_rate, const std::string& what)
      : std::runtime_error(what), acceptance_rate_(acceptance_rate) {}
  double acceptance_rate() const { return acceptance_rate_; }

 private:
  double acceptance_rate_;
};

LukasiewiczPath encode_lukasiewicz(const PlaneTree& tree);
PlaneTree decode_lukasiewicz(const LukasiewiczPath& path);

/// Unconditioned Galton-Watson tree, generated breadth first. Throws
/// CapExceeded once more than `max_vertices` vertices would be created.
PlaneTree sample_gw(const OffspringDistribution& dist, Rng& rng, std::size_t max_vertices);

/// As sample_gw but reports a cap overflow as an empty optional.
/// `generated` receives the number of vertices created either way.
std::optional<PlaneTree> try_sample_gw(const OffspringDistribution& dist, Rng& rng,
                                       std::size_t max_vertices, std::size_t* generated = nullptr);

/// Galton-Watson tree conditioned to have exactly `n` vertices: draw n
/// offspring values, accept when they sum to n - 1, then rotate to the unique
/// cyclic shift that is a valid excursion.
PlaneTree sample_gw_conditioned(const OffspringDistribution& dist, std::size_t n, Rng& rng,
                                std::size_t max_attempts);

std::size_t height(const PlaneTree& tree);
std::int64_t max_lukasiewicz(const PlaneTree& tree);

/// Number of strict record minima of (W_j : 1 <= j < N).
std::size_t record_minima_count(const LukasiewiczPath& path);

/// All plane trees on n vertices (Catalan(n-1) of them), in lexicographic
/// order of their outdegree sequences.
std::vector<PlaneTree> all_plane_trees(std::size_t n);

/// Product of pi_{out(v)} over vertices.
double gw_probability(const PlaneTree& tree, const OffspringDistribution& dist);

/// Comma-separated depth-first outdegrees, e.g. "2,0,0".
std::string to_string(const PlaneTree& tree);
PlaneTree parse_tree(const std::string& text);

}  // namespace looptree
