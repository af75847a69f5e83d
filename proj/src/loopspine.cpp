#include "looptree/loopspine.hpp"

#include <algorithm>
#include <sstream>

namespace looptree {

namespace {

// Receives every vertex and edge of a lazily generated ball and stores it.
class MaterializingSink {
 public:
  explicit MaterializingSink(LoopspineBall& ball) : ball_(ball) {}

  VertexId add_vertex(std::uint32_t distance, VertexKind kind, VertexId outgrowth_root, std::uint32_t cycle,
                      std::uint64_t position) {
    const VertexId id = ball_.graph.add_vertex();
    VertexRecord rec;
    rec.distance = distance;
    rec.kind = kind;
    rec.outgrowth_root = kind == VertexKind::Open ? id : outgrowth_root;
    rec.cycle = cycle;
    rec.position = position;
    rec.outgrowth_reach = distance;
    ball_.vertices.push_back(rec);
    if (kind == VertexKind::Outgrowth) {
      auto& reach = ball_.vertices[outgrowth_root].outgrowth_reach;
      reach = std::max(reach, distance);
    }
    if (kind != VertexKind::Outgrowth && cycle != kNoCycle) ball_.cycles[cycle].members.emplace_back(position, id);
    return id;
  }
  void add_edge(VertexId u, VertexId v) { ball_.graph.add_edge(u, v); }
  void add_cycle(const CycleRecord& rec) { ball_.cycles.push_back(rec); }
  void set_next_root(VertexId id) { ball_.cycles.back().next_root = id; }

 private:
  LoopspineBall& ball_;
};

// Only records how many vertices sit at each distance.
class CountingSink {
 public:
  explicit CountingSink(std::uint32_t radius) : counts_(radius, 0) {}
  VertexId add_vertex(std::uint32_t distance, VertexKind, VertexId, std::uint32_t, std::uint64_t) {
    ++counts_[distance];
    return static_cast<VertexId>(next_++);
  }
  void add_edge(VertexId, VertexId) {}
  void add_cycle(const CycleRecord&) {}
  void set_next_root(VertexId) {}
  std::vector<std::uint64_t> take() { return std::move(counts_); }

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t next_ = 0;
};

template <class Sink>
class LazyGenerator {
 public:
  LazyGenerator(const OffspringDistribution& dist, std::uint32_t radius, Rng& rng, Sink& sink,
                std::uint64_t cap)
      : dist_(dist), radius_(radius), rng_(rng), sink_(sink), cap_(cap) {}

  std::uint64_t run_loopspine() {
    const VertexId root = make(0, VertexKind::Closed, kNoVertex, kNoCycle, 0);
    std::uint64_t d = 0;
    VertexId cycle_root = root;
    std::uint32_t index = 0;
    while (d < radius_) {
      CycleRecord rec;
      rec.x = dist_.sample_size_biased(rng_);
      rec.u = rng_.uniform_int(1, rec.x);
      rec.y = std::min(rec.u, rec.x - rec.u + 1);
      rec.root_distance = d;
      rec.root = cycle_root;
      sink_.add_cycle(rec);

      VertexId next = kNoVertex;
      open_.clear();
      build_cycle(cycle_root, static_cast<std::uint32_t>(d), rec.x, [&](std::uint64_t pos, std::uint32_t dist) {
        const bool closed = (pos == rec.u);
        const VertexId id = make(dist, closed ? VertexKind::Closed : VertexKind::Open, kNoVertex, index, pos);
        if (closed) next = id;
        else if (dist + 1 < radius_) open_.push_back({id, dist});
        return id;
      });
      sink_.set_next_root(next);
      // Copy: expand() reuses the member buffers.
      const std::vector<Pending> opens = open_;
      for (const auto& p : opens) expand(p.id, p.distance);

      d += rec.y;
      cycle_root = next;
      ++index;
    }
    return d;
  }

  void run_outgrowth() {
    const VertexId root = make(0, VertexKind::Open, kNoVertex, kNoCycle, 0);
    if (radius_ > 1) expand(root, 0);
  }

 private:
  struct Pending {
    VertexId id;
    std::uint32_t distance;
  };

  VertexId make(std::uint32_t distance, VertexKind kind, VertexId root, std::uint32_t cycle, std::uint64_t pos) {
    if (++created_ > cap_) {
      std::ostringstream os;
      os << "ball generation exceeded the vertex cap of " << cap_;
      throw ResourceError(os.str());
    }
    return sink_.add_vertex(distance, kind, root, cycle, pos);
  }

  // Materialize the positions 1..x of a cycle of length x + 1 rooted at
  // `root` (distance d) that fall inside the ball, and wire their edges.
  // `create(pos, distance)` returns the new vertex id.
  template <class Create>
  void build_cycle(VertexId root, std::uint32_t d, std::uint64_t x, Create&& create) {
    if (x == 0 || d + 1 >= radius_) return;
    const std::uint64_t m = radius_ - 1 - d;
    const std::uint64_t a = std::min(x, m);
    const std::uint64_t b = (x + 1 > m) ? std::max(a + 1, x + 1 - m) : a + 1;
    lower_.clear();
    upper_.clear();
    for (std::uint64_t j = 1; j <= a; ++j) {
      const auto dist = static_cast<std::uint32_t>(d + std::min(j, x + 1 - j));
      lower_.push_back(create(j, dist));
    }
    for (std::uint64_t j = b; j <= x; ++j) {
      const auto dist = static_cast<std::uint32_t>(d + (x + 1 - j));
      upper_.push_back(create(j, dist));
    }
    sink_.add_edge(root, lower_.front());
    for (std::size_t i = 1; i < lower_.size(); ++i) sink_.add_edge(lower_[i - 1], lower_[i]);
    if (upper_.empty()) {
      if (a == x) sink_.add_edge(lower_.back(), root);
      return;
    }
    if (b == a + 1) sink_.add_edge(lower_.back(), upper_.front());
    for (std::size_t i = 1; i < upper_.size(); ++i) sink_.add_edge(upper_[i - 1], upper_[i]);
    sink_.add_edge(upper_.back(), root);
  }

  void expand(VertexId outgrowth_root, std::uint32_t d0) {
    stack_.clear();
    stack_.push_back({outgrowth_root, d0});
    while (!stack_.empty()) {
      const Pending p = stack_.back();
      stack_.pop_back();
      const std::uint64_t k = dist_.sample(rng_);
      build_cycle(p.id, p.distance, k, [&](std::uint64_t pos, std::uint32_t dist) {
        const VertexId id = make(dist, VertexKind::Outgrowth, outgrowth_root, kNoCycle, pos);
        if (dist + 1 < radius_) stack_.push_back({id, dist});
        return id;
      });
    }
  }

  const OffspringDistribution& dist_;
  std::uint32_t radius_;
  Rng& rng_;
  Sink& sink_;
  std::uint64_t cap_;
  std::uint64_t created_ = 0;
  std::vector<Pending> stack_;
  std::vector<Pending> open_;
  std::vector<VertexId> lower_;
  std::vector<VertexId> upper_;
};

void sort_by_distance(LoopspineBall& ball) {
  const std::size_t n = ball.vertices.size();
  std::vector<std::size_t> offsets(ball.radius + 1, 0);
  for (const auto& v : ball.vertices) ++offsets[v.distance + 1];
  for (std::size_t d = 1; d < offsets.size(); ++d) offsets[d] += offsets[d - 1];
  ball.level_offsets = offsets;

  std::vector<VertexId> perm(n);
  for (std::size_t v = 0; v < n; ++v) perm[v] = static_cast<VertexId>(offsets[ball.vertices[v].distance]++);

  std::vector<VertexRecord> sorted(n);
  for (std::size_t v = 0; v < n; ++v) {
    VertexRecord rec = ball.vertices[v];
    if (rec.outgrowth_root != kNoVertex) rec.outgrowth_root = perm[rec.outgrowth_root];
    sorted[perm[v]] = rec;
  }
  ball.vertices = std::move(sorted);
  ball.graph = ball.graph.permuted(perm);
  for (auto& c : ball.cycles) {
    if (c.root != kNoVertex) c.root = perm[c.root];
    if (c.next_root != kNoVertex) c.next_root = perm[c.next_root];
    for (auto& m : c.members) m.second = perm[m.second];
  }
}

}  // namespace

std::size_t LoopspineBall::volume(std::uint32_t n) const {
  return level_offsets[std::min<std::size_t>(n, radius)];
}

std::uint32_t LoopspineBall::outgrowth_height(VertexId open_vertex) const {
  const auto& rec = vertices[open_vertex];
  if (rec.kind != VertexKind::Open) throw std::invalid_argument("outgrowth_height: vertex is not open");
  return rec.outgrowth_reach - rec.distance;
}

LoopspineBall generate_loopspine_ball(const OffspringDistribution& dist, std::uint32_t radius, Rng& rng,
                                      std::uint64_t vertex_cap) {
  if (radius < 1) throw std::invalid_argument("generate_loopspine_ball: radius must be >= 1");
  LoopspineBall ball;
  ball.radius = radius;
  MaterializingSink sink(ball);
  LazyGenerator<MaterializingSink> gen(dist, radius, rng, sink, vertex_cap);
  ball.terminal_distance = gen.run_loopspine();
  sort_by_distance(ball);
  return ball;
}

std::vector<std::uint64_t> loopspine_level_counts(const OffspringDistribution& dist, std::uint32_t radius,
                                                  Rng& rng, std::uint64_t vertex_cap) {
  if (radius < 1) throw std::invalid_argument("loopspine_level_counts: radius must be >= 1");
  CountingSink sink(radius);
  LazyGenerator<CountingSink> gen(dist, radius, rng, sink, vertex_cap);
  gen.run_loopspine();
  return sink.take();
}

std::vector<std::uint64_t> outgrowth_level_counts(const OffspringDistribution& dist, std::uint32_t radius,
                                                  Rng& rng, std::uint64_t vertex_cap) {
  if (radius < 1) throw std::invalid_argument("outgrowth_level_counts: radius must be >= 1");
  CountingSink sink(radius);
  LazyGenerator<CountingSink> gen(dist, radius, rng, sink, vertex_cap);
  gen.run_outgrowth();
  return sink.take();
}

std::vector<CycleRecord> generate_loopspine_cycles(const OffspringDistribution& dist, std::uint64_t radius,
                                                   Rng& rng) {
  std::vector<CycleRecord> cycles;
  std::uint64_t d = 0;
  while (d < radius) {
    CycleRecord rec;
    rec.x = dist.sample_size_biased(rng);
    rec.u = rng.uniform_int(1, rec.x);
    rec.y = std::min(rec.u, rec.x - rec.u + 1);
    rec.root_distance = d;
    cycles.push_back(rec);
    d += rec.y;
  }
  return cycles;
}

std::uint64_t loopspine_volume(const std::vector<CycleRecord>& cycles, std::uint64_t n) {
  std::uint64_t count = 1;
  for (const auto& c : cycles) {
    if (c.root_distance > n) break;
    const std::uint64_t m = n - c.root_distance;
    count += (c.x <= 2 * m) ? c.x : 2 * m;
  }
  return count;
}

std::uint64_t loopspine_volume(const LoopspineBall& ball, std::uint64_t n) {
  if (n > ball.radius) throw std::invalid_argument("loopspine_volume: n exceeds the ball radius");
  return loopspine_volume(ball.cycles, n);
}

std::uint64_t open_count(const std::vector<CycleRecord>& cycles, std::uint64_t terminal_distance,
                         std::uint64_t n) {
  std::uint64_t closed = terminal_distance <= n ? 1 : 0;
  for (const auto& c : cycles)
    if (c.root_distance <= n) ++closed;
  return loopspine_volume(cycles, n) - closed;
}

std::uint64_t open_count(const LoopspineBall& ball, std::uint64_t n) {
  if (n > ball.radius) throw std::invalid_argument("open_count: n exceeds the ball radius");
  return open_count(ball.cycles, ball.terminal_distance, n);
}

double open_probability(const OffspringDistribution& dist) {
  // sum_{k>=3} k pi_k (k-2)/k = E(xi) - 2 + 2 pi_0 + pi_1.
  return 2.0 * dist.prob(0) + dist.prob(1) - 1.0;
}

PlaneTree sample_kesten_tree(const OffspringDistribution& dist, std::uint32_t depth, Rng& rng,
                             std::size_t max_vertices) {
  struct Item {
    std::uint32_t depth;
    bool special;
  };
  std::vector<std::uint32_t> out;
  std::vector<Item> stack{{0, true}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    std::uint64_t k = 0;
    std::uint64_t special_child = 0;
    if (it.depth < depth) {
      if (it.special) {
        k = dist.sample_size_biased(rng);
        if (k <= max_vertices) special_child = rng.uniform_int(1, k);
      } else {
        k = dist.sample(rng);
      }
    }
    if (k > max_vertices || out.size() + stack.size() + k >= max_vertices)
      throw CapExceeded(out.size() + stack.size() + std::min<std::uint64_t>(k, max_vertices),
                        "Kesten tree exceeded the vertex cap");
    out.push_back(static_cast<std::uint32_t>(k));
    for (std::uint64_t c = k; c >= 1; --c) stack.push_back({it.depth + 1, it.special && c == special_child});
  }
  return PlaneTree(std::move(out));
}

}  // namespace looptree
