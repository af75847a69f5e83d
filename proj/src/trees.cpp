#include "looptree/trees.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace looptree {

namespace {

// Index of the first j in 1..N at which the walk W leaves the excursion
// shape, or N + 1 if the steps form a valid excursion.
std::size_t first_violation(std::span<const std::int64_t> steps) {
  const std::size_t n = steps.size();
  std::int64_t w = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (steps[j] < -1) return j + 1;
    w += steps[j];
    const bool last = (j + 1 == n);
    if (!last && w < 0) return j + 1;
    if (last && w != -1) return j + 1;
  }
  return n + 1;
}

}  // namespace

PlaneTree::PlaneTree(std::vector<std::uint32_t> out) : out_(std::move(out)) {
  const std::size_t n = out_.size();
  if (n == 0) throw std::invalid_argument("plane tree needs at least one vertex");
  std::vector<std::int64_t> steps(n);
  for (std::size_t j = 0; j < n; ++j) steps[j] = static_cast<std::int64_t>(out_[j]) - 1;
  if (const std::size_t bad = first_violation(steps); bad <= n) {
    std::ostringstream os;
    os << "outdegree sequence is not a valid Lukasiewicz excursion (index " << bad << ")";
    throw std::invalid_argument(os.str());
  }

  parent_.assign(n, -1);
  depth_.assign(n, 0);
  child_offset_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) child_offset_[v + 1] = child_offset_[v] + out_[v];
  children_.assign(child_offset_[n], 0);
  std::vector<std::size_t> filled(n, 0);

  // Stack of vertices still waiting for children.
  std::vector<std::uint32_t> open;
  if (out_[0] > 0) open.push_back(0);
  for (std::size_t j = 1; j < n; ++j) {
    const std::uint32_t p = open.back();
    parent_[j] = p;
    depth_[j] = depth_[p] + 1;
    children_[child_offset_[p] + filled[p]++] = static_cast<std::uint32_t>(j);
    if (filled[p] == out_[p]) open.pop_back();
    if (out_[j] > 0) open.push_back(static_cast<std::uint32_t>(j));
  }
}

std::vector<std::int64_t> LukasiewiczPath::partial_sums() const {
  std::vector<std::int64_t> w(steps.size() + 1, 0);
  for (std::size_t j = 0; j < steps.size(); ++j) w[j + 1] = w[j] + steps[j];
  return w;
}

LukasiewiczPath encode_lukasiewicz(const PlaneTree& tree) {
  LukasiewiczPath path;
  path.steps.reserve(tree.size());
  for (std::uint32_t k : tree.outdegrees()) path.steps.push_back(static_cast<std::int64_t>(k) - 1);
  return path;
}

PlaneTree decode_lukasiewicz(const LukasiewiczPath& path) {
  const std::size_t n = path.steps.size();
  if (n == 0) throw InvalidExcursion(0, "empty Lukasiewicz path");
  if (const std::size_t bad = first_violation(path.steps); bad <= n) {
    std::ostringstream os;
    os << "invalid Lukasiewicz excursion at index " << bad;
    throw InvalidExcursion(bad, os.str());
  }
  std::vector<std::uint32_t> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = static_cast<std::uint32_t>(path.steps[j] + 1);
  return PlaneTree(std::move(out));
}

std::optional<PlaneTree> try_sample_gw(const OffspringDistribution& dist, Rng& rng,
                                       std::size_t max_vertices, std::size_t* generated) {
  // Breadth-first: bfs_out[i] is the outdegree of the i-th vertex in BFS order.
  std::vector<std::uint32_t> bfs_out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < total; ++i) {
    const std::uint64_t k = dist.sample(rng);
    if (k > max_vertices || total + k > max_vertices) {
      if (generated) *generated = std::min<std::uint64_t>(total + k, max_vertices + 1);
      return std::nullopt;
    }
    total += k;
    bfs_out.push_back(static_cast<std::uint32_t>(k));
  }
  if (generated) *generated = total;

  // Children of BFS vertex i occupy a consecutive BFS range.
  std::vector<std::size_t> first_child(total);
  std::size_t next = 1;
  for (std::size_t i = 0; i < total; ++i) {
    first_child[i] = next;
    next += bfs_out[i];
  }
  std::vector<std::uint32_t> out;
  out.reserve(total);
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    out.push_back(bfs_out[v]);
    for (std::size_t c = bfs_out[v]; c-- > 0;) stack.push_back(first_child[v] + c);
  }
  return PlaneTree(std::move(out));
}

PlaneTree sample_gw(const OffspringDistribution& dist, Rng& rng, std::size_t max_vertices) {
  std::size_t generated = 0;
  auto tree = try_sample_gw(dist, rng, max_vertices, &generated);
  if (!tree) {
    std::ostringstream os;
    os << "Galton-Watson sample exceeded the cap of " << max_vertices << " vertices";
    throw CapExceeded(generated, os.str());
  }
  return std::move(*tree);
}

PlaneTree sample_gw_conditioned(const OffspringDistribution& dist, std::size_t n, Rng& rng,
                                std::size_t max_attempts) {
  if (n == 0) throw std::invalid_argument("conditioned tree size must be >= 1");
  if (!(dist.prob(0) > 0.0)) throw std::invalid_argument("size impossible: pi_0 = 0");
  if (n > 1) {
    // Sizes must respect the lattice spanned by the positive support.
    std::uint64_t g = 0;
    for (std::size_t k = 1; k < dist.head_size(); ++k)
      if (dist.head()[k] > 0.0) g = std::gcd(g, static_cast<std::uint64_t>(k));
    if (dist.family() != Family::Tabulated) g = std::gcd(g, std::uint64_t{1});
    if (g == 0 || (n - 1) % g != 0) {
      std::ostringstream os;
      os << "size " << n << " has zero probability under " << dist.describe();
      throw std::invalid_argument(os.str());
    }
  }

  const std::uint64_t target = n - 1;
  std::vector<std::uint32_t> values(n);
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    std::uint64_t sum = 0;
    bool rejected = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t k = dist.sample(rng);
      sum += std::min<std::uint64_t>(k, target + 1);
      if (sum > target) {
        rejected = true;
        break;
      }
      values[i] = static_cast<std::uint32_t>(k);
    }
    if (rejected || sum != target) continue;

    // Cycle lemma: start right after the first time the walk attains its
    // overall minimum (a record minimum of the cyclic walk).
    std::int64_t w = 0, best = 0;
    std::size_t start = 0;
    for (std::size_t j = 1; j <= n; ++j) {
      w += static_cast<std::int64_t>(values[j - 1]) - 1;
      if (j == 1 || w < best) {
        best = w;
        start = j % n;
      }
    }
    std::rotate(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(start), values.end());
    return PlaneTree(values);
  }
  std::ostringstream os;
  os << "conditioned sampler exhausted " << max_attempts << " attempts for size " << n
     << " (acceptance rate estimate < " << 1.0 / static_cast<double>(max_attempts) << ")";
  throw AttemptsExhausted(0.0, os.str());
}

std::size_t height(const PlaneTree& tree) {
  std::uint32_t h = 0;
  for (std::size_t v = 0; v < tree.size(); ++v) h = std::max(h, tree.depth(v));
  return h;
}

std::int64_t max_lukasiewicz(const PlaneTree& tree) {
  std::int64_t w = 0, best = 0;
  for (std::uint32_t k : tree.outdegrees()) {
    w += static_cast<std::int64_t>(k) - 1;
    best = std::max(best, w);
  }
  return best;
}

std::size_t record_minima_count(const LukasiewiczPath& path) {
  const auto w = path.partial_sums();
  const std::size_t n = path.steps.size();
  std::size_t records = 0;
  std::int64_t running = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (j == 1 || w[j] < running) {
      ++records;
      running = w[j];
    }
  }
  return records;
}

std::vector<PlaneTree> all_plane_trees(std::size_t n) {
  std::vector<PlaneTree> result;
  if (n == 0) return result;
  std::vector<std::uint32_t> out(n, 0);
  std::function<void(std::size_t, std::int64_t)> extend = [&](std::size_t j, std::int64_t w) {
    if (j == n - 1) {
      if (w == 0) {
        out[j] = 0;
        result.emplace_back(out);
      }
      return;
    }
    const auto remaining = static_cast<std::int64_t>(n - j - 1);
    // Need W_{j+1} >= 0 and W_{j+1} <= remaining - 1 to come back down to -1.
    for (std::int64_t k = std::max<std::int64_t>(0, 1 - w); w + k - 1 <= remaining - 1; ++k) {
      out[j] = static_cast<std::uint32_t>(k);
      extend(j + 1, w + k - 1);
    }
  };
  extend(0, 0);
  return result;
}

double gw_probability(const PlaneTree& tree, const OffspringDistribution& dist) {
  double p = 1.0;
  for (std::uint32_t k : tree.outdegrees()) p *= dist.prob(k);
  return p;
}

std::string to_string(const PlaneTree& tree) {
  std::ostringstream os;
  for (std::size_t v = 0; v < tree.size(); ++v) os << (v ? "," : "") << tree.out(v);
  return os.str();
}

PlaneTree parse_tree(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    const unsigned long value = std::stoul(item, &pos);
    out.push_back(static_cast<std::uint32_t>(value));
  }
  return PlaneTree(std::move(out));
}

}  // namespace looptree
