#include "looptree/resistance.hpp"

#include <stdexcept>

#include "solve.hpp"

namespace looptree {

ResistanceResult effective_resistance(const Looptree& graph, const std::vector<std::uint32_t>& distance,
                                      std::uint32_t n) {
  if (n < 1) throw std::invalid_argument("effective_resistance: n must be >= 1");
  const std::size_t size = graph.size();
  bool sink = false;
  std::vector<std::int64_t> index(size, -1);
  std::vector<VertexId> interior;
  for (VertexId v = 0; v < size; ++v) {
    if (distance[v] >= n) sink = true;
    else if (v != 0) {
      index[v] = static_cast<std::int64_t>(interior.size());
      interior.push_back(v);
    }
  }
  if (!sink) throw std::invalid_argument("effective_resistance: no vertex at distance >= n (sink is empty)");

  ResistanceResult res;
  res.n = n;
  res.potential.assign(size, 0.0);
  res.potential[0] = 1.0;
  if (!interior.empty()) {
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(interior.size() * 5);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(interior.size()));
    for (std::size_t i = 0; i < interior.size(); ++i) {
      const VertexId x = interior[i];
      entries.emplace_back(i, i, static_cast<double>(graph.degree(x)));
      for (VertexId y : graph.neighbors(x)) {
        if (y == 0) rhs[static_cast<Eigen::Index>(i)] += 1.0;
        else if (index[y] >= 0) entries.emplace_back(i, index[y], -1.0);
      }
    }
    const Eigen::VectorXd h =
        detail::solve_spd(static_cast<Eigen::Index>(interior.size()), entries, rhs, &res.residual);
    for (std::size_t i = 0; i < interior.size(); ++i) res.potential[interior[i]] = h[static_cast<Eigen::Index>(i)];
  }
  double current = 0.0;
  for (VertexId y : graph.neighbors(0)) current += 1.0 - res.potential[y];
  res.value = 1.0 / current;
  return res;
}

ResistanceResult effective_resistance(const LoopspineBall& ball, std::uint32_t n) {
  if (n < 1 || std::uint64_t{n} + 1 > ball.radius)
    throw std::invalid_argument("effective_resistance: need 1 <= n <= radius - 1 (sink not materialized)");
  std::vector<std::uint32_t> distance(ball.size());
  for (std::size_t v = 0; v < ball.size(); ++v) distance[v] = ball.vertices[v].distance;
  return effective_resistance(ball.graph, distance, n);
}

std::string to_string(SeparatorCase c) {
  switch (c) {
    case SeparatorCase::NoMarkNear: return "no-mark-near";
    case SeparatorCase::NoMarkFar: return "no-mark-far";
    case SeparatorCase::MarkAtK: return "mark-at-k";
    case SeparatorCase::MarkAtRootCycle: return "mark-at-root-cycle";
  }
  return "?";
}

namespace {

bool blocks_all_paths(const LoopspineBall& ball, const std::vector<VertexId>& s, std::uint32_t n) {
  std::vector<char> seen(ball.size(), 0);
  for (VertexId v : s) seen[v] = 1;
  if (seen[0]) return true;
  std::vector<VertexId> queue{0};
  seen[0] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId u = queue[head];
    if (ball.vertices[u].distance >= n) return false;
    for (VertexId w : ball.graph.neighbors(u)) {
      if (seen[w]) continue;
      seen[w] = 1;
      queue.push_back(w);
    }
  }
  return true;
}

VertexId member_at(const CycleRecord& c, std::uint64_t position) {
  for (const auto& [pos, id] : c.members)
    if (pos == position) return id;
  throw std::logic_error("find_separator: cycle position not materialized");
}

}  // namespace

Separator find_separator(const LoopspineBall& ball, std::uint32_t n) {
  if (n < 2) throw std::invalid_argument("find_separator: n must be >= 2");
  if (ball.radius < std::uint64_t{n} + 1) throw std::invalid_argument("find_separator: ball radius must be >= n + 1");
  const auto& cycles = ball.cycles;

  Separator sep;
  sep.first_high = cycles.size();
  for (std::size_t i = 0; i < cycles.size(); ++i)
    if (2 * cycles[i].max_distance() >= n) {
      sep.first_high = i;
      break;
    }
  if (sep.first_high == cycles.size()) throw std::logic_error("find_separator: no cycle reaches level n/2");

  // A vertex at distance d < n/2 has its outgrowth materialized to distance
  // radius - 1 >= n, so reach - d >= n/2 is decided exactly.
  sep.first_mark = cycles.size();
  for (std::size_t i = 0; i <= sep.first_high && sep.first_mark == cycles.size(); ++i) {
    for (const auto& [pos, id] : cycles[i].members) {
      const auto& rec = ball.vertices[id];
      if (rec.kind != VertexKind::Open || 2 * rec.distance >= n) continue;
      if (2 * (rec.outgrowth_reach - rec.distance) >= n) {
        sep.first_mark = i;
        break;
      }
    }
  }

  if (sep.first_mark <= sep.first_high) {
    if (sep.first_mark == 0) {
      sep.kind = SeparatorCase::MarkAtRootCycle;
      for (VertexId v : ball.graph.neighbors(0))
        if (std::find(sep.vertices.begin(), sep.vertices.end(), v) == sep.vertices.end()) sep.vertices.push_back(v);
      sep.distance = 1;
    } else {
      sep.kind = SeparatorCase::MarkAtK;
      sep.vertices = {cycles[sep.first_mark].root};
      sep.distance = static_cast<std::uint32_t>(cycles[sep.first_mark].root_distance);
    }
  } else {
    const CycleRecord& c = cycles[sep.first_high];
    const std::uint64_t next_distance = c.root_distance + c.y;
    if (2 * next_distance < n) {
      sep.kind = SeparatorCase::NoMarkNear;
      sep.vertices = {c.next_root};
      const std::uint64_t mirror = c.x + 1 - c.u;
      if (mirror != c.u) sep.vertices.push_back(member_at(c, mirror));
      sep.distance = static_cast<std::uint32_t>(next_distance);
    } else {
      sep.kind = SeparatorCase::NoMarkFar;
      const std::uint64_t level = n / 2;
      const std::uint64_t offset = level - c.root_distance;
      if (offset == 0) {
        sep.vertices = {c.root};
      } else {
        sep.vertices = {member_at(c, offset)};
        if (c.x + 1 - offset != offset) sep.vertices.push_back(member_at(c, c.x + 1 - offset));
      }
      sep.distance = static_cast<std::uint32_t>(level);
    }
  }
  sep.separates = blocks_all_paths(ball, sep.vertices, n);
  return sep;
}

double separator_lower_bound(const LoopspineBall& ball, std::uint32_t n) {
  return find_separator(ball, n).distance / 2.0;
}

}  // namespace looptree
