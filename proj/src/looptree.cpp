#include "looptree/looptree.hpp"

#include <algorithm>
#include <sstream>

namespace looptree {

void Looptree::add_edge(VertexId u, VertexId v) {
  if (u == v) throw std::invalid_argument("looptree: self loops are not allowed");
  if (deg_[u] >= kMaxDegree || deg_[v] >= kMaxDegree) {
    std::ostringstream os;
    os << "looptree: degree bound " << kMaxDegree << " exceeded at edge " << u << "-" << v;
    throw std::logic_error(os.str());
  }
  adj_[u][deg_[u]++] = v;
  adj_[v][deg_[v]++] = u;
}

std::size_t Looptree::edge_count() const {
  std::size_t twice = 0;
  for (auto d : deg_) twice += d;
  return twice / 2;
}

std::vector<std::uint32_t> Looptree::bfs_distances() const {
  std::vector<std::uint32_t> dist(size(), kUnreached);
  if (size() == 0) return dist;
  std::vector<VertexId> queue;
  queue.reserve(size());
  dist[0] = 0;
  queue.push_back(0);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId u = queue[head];
    for (VertexId w : neighbors(u)) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

Looptree Looptree::permuted(std::span<const VertexId> perm) const {
  Looptree out(size());
  for (VertexId v = 0; v < size(); ++v) {
    const VertexId nv = perm[v];
    out.deg_[nv] = deg_[v];
    for (unsigned s = 0; s < deg_[v]; ++s) out.adj_[nv][s] = perm[adj_[v][s]];
  }
  return out;
}

std::vector<Looptree::Edge> Looptree::edge_list() const {
  std::vector<Edge> edges;
  for (VertexId u = 0; u < size(); ++u) {
    std::array<VertexId, kMaxDegree> nb{};
    const unsigned d = deg_[u];
    std::copy_n(adj_[u].begin(), d, nb.begin());
    std::sort(nb.begin(), nb.begin() + d);
    for (unsigned s = 0; s < d;) {
      unsigned t = s;
      while (t < d && nb[t] == nb[s]) ++t;
      if (u < nb[s]) edges.push_back({u, nb[s], t - s});
      s = t;
    }
  }
  return edges;
}

Looptree loop_transform(const PlaneTree& tree) {
  Looptree loop(tree.size());
  for (std::size_t v = 0; v < tree.size(); ++v) {
    const auto kids = tree.children(v);
    if (kids.empty()) continue;
    const auto vid = static_cast<VertexId>(v);
    loop.add_edge(vid, kids.front());
    for (std::size_t i = 1; i < kids.size(); ++i) loop.add_edge(kids[i - 1], kids[i]);
    loop.add_edge(kids.back(), vid);
  }
  return loop;
}

std::uint32_t loop_distance(const Looptree& loop, VertexId v) {
  if (v >= loop.size()) throw std::out_of_range("loop_distance: vertex not in graph");
  return loop.bfs_distances()[v];
}

std::uint32_t loop_height(const Looptree& loop) {
  std::uint32_t h = 0;
  for (auto d : loop.bfs_distances())
    if (d != kUnreached) h = std::max(h, d);
  return h;
}

Looptree ball(const Looptree& loop, std::uint32_t radius) {
  if (radius < 1) throw std::invalid_argument("ball: radius must be >= 1");
  const auto dist = loop.bfs_distances();
  std::vector<VertexId> new_id(loop.size(), kNoVertex);
  Looptree out;
  for (VertexId v = 0; v < loop.size(); ++v)
    if (dist[v] < radius) new_id[v] = out.add_vertex();
  for (VertexId u = 0; u < loop.size(); ++u) {
    if (new_id[u] == kNoVertex) continue;
    for (VertexId w : loop.neighbors(u))
      if (u < w && new_id[w] != kNoVertex) out.add_edge(new_id[u], new_id[w]);
  }
  return out;
}

}  // namespace looptree
