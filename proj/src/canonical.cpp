#include "looptree/canonical.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace looptree {

namespace {

struct Block {
  VertexId top;
  std::vector<VertexId> members;  // cyclic order, top excluded
  bool cycle;
};

}  // namespace

std::string canonical_form(const Looptree& graph) {
  const std::size_t n = graph.size();
  if (n == 0) return "";

  // Breadth-first spanning tree; the first slot used to reach a vertex is its tree edge.
  std::vector<std::uint32_t> depth(n, kUnreached);
  std::vector<VertexId> parent(n, kNoVertex);
  std::vector<VertexId> order{0};
  depth[0] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const VertexId u = order[head];
    for (VertexId v : graph.neighbors(u)) {
      if (depth[v] != kUnreached) continue;
      depth[v] = depth[u] + 1;
      parent[v] = u;
      order.push_back(v);
    }
  }
  if (order.size() != n) throw std::invalid_argument("canonical_form: graph is disconnected");

  // Edge multiset minus tree edges = one closing edge per cycle.
  std::vector<bool> covered(n, false);  // tree edge parent[v]-v lies on a cycle
  std::vector<Block> blocks;
  for (const auto& e : graph.edge_list()) {
    unsigned extra = e.multiplicity;
    if (parent[e.v] == e.u || parent[e.u] == e.v) --extra;
    for (unsigned k = 0; k < extra; ++k) {
      std::vector<VertexId> left{e.u}, right{e.v};
      VertexId a = e.u, b = e.v;
      auto climb = [&](VertexId& x, std::vector<VertexId>& path) {
        if (covered[x]) throw std::invalid_argument("canonical_form: graph is not a cactus");
        covered[x] = true;
        x = parent[x];
        path.push_back(x);
      };
      while (a != b) {
        if (depth[a] >= depth[b]) climb(a, left);
        else climb(b, right);
      }
      Block blk{a, {}, true};
      left.pop_back();
      right.pop_back();
      blk.members.assign(left.rbegin(), left.rend());
      blk.members.insert(blk.members.end(), right.begin(), right.end());
      if (blk.members.empty()) throw std::invalid_argument("canonical_form: self loop");
      blocks.push_back(std::move(blk));
    }
  }
  for (VertexId v = 1; v < n; ++v)
    if (!covered[v]) blocks.push_back({parent[v], {v}, false});

  std::vector<std::vector<std::size_t>> at(n);
  for (std::size_t i = 0; i < blocks.size(); ++i) at[blocks[i].top].push_back(i);

  std::vector<std::string> code(n);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const VertexId v = *it;
    std::vector<std::string> parts;
    for (std::size_t i : at[v]) {
      const Block& b = blocks[i];
      if (!b.cycle) {
        parts.push_back("B" + code[b.members[0]]);
        continue;
      }
      std::string fwd = "C", bwd = "C";
      for (VertexId m : b.members) fwd += code[m];
      for (auto r = b.members.rbegin(); r != b.members.rend(); ++r) bwd += code[*r];
      parts.push_back(std::min(fwd, bwd));
    }
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (auto& p : parts) s += p;
    s += ")";
    code[v] = std::move(s);
  }
  return code[0];
}

}  // namespace looptree
