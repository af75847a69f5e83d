#include "looptree/verify.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "looptree/gf.hpp"
#include "looptree/loopspine.hpp"
#include "looptree/looptree.hpp"
#include "looptree/resistance.hpp"
#include "looptree/trees.hpp"
#include "looptree/walk.hpp"

namespace looptree {

namespace {

class Report {
 public:
  explicit Report(std::ostream& out) : out_(out) {}
  void check(const std::string& name, bool ok, const std::string& detail = "") {
    out_ << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) out_ << "  (" << detail << ")";
    out_ << "\n";
    if (!ok) ++failures_;
  }
  int failures() const { return failures_; }

 private:
  std::ostream& out_;
  int failures_ = 0;
};

// Probability of being back at the root after `steps` steps, by enumerating
// every trajectory.
double brute_force_return(const Looptree& g, VertexId v, int steps) {
  if (steps == 0) return v == 0 ? 1.0 : 0.0;
  double p = 0.0;
  for (VertexId w : g.neighbors(v)) p += brute_force_return(g, w, steps - 1) / g.degree(v);
  return p;
}

Looptree cycle_graph(std::size_t k) {
  Looptree g(k);
  for (VertexId v = 0; v < k; ++v) g.add_edge(v, static_cast<VertexId>((v + 1) % k));
  return g;
}

Looptree chain_graph(std::size_t n) {
  Looptree g(n);
  for (VertexId v = 0; v + 1 < n; ++v) {
    g.add_edge(v, v + 1);
    g.add_edge(v, v + 1);
  }
  return g;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

int run_verify(bool quick, std::ostream& out) {
  Report r(out);
  const std::size_t max_exhaustive = quick ? 6 : 8;
  const std::size_t random_trees = quick ? 1000 : 10000;
  const std::size_t random_balls = quick ? 20 : 200;

  {
    bool ok = true;
    std::size_t catalan = 1;
    for (std::size_t n = 1; n <= max_exhaustive; ++n) {
      const auto trees = all_plane_trees(n);
      ok = ok && trees.size() == catalan;
      for (const auto& t : trees) ok = ok && decode_lukasiewicz(encode_lukasiewicz(t)) == t;
      catalan = catalan * 2 * (2 * n - 1) / (n + 1);
    }
    r.check("lukasiewicz round trip, all plane trees up to " + std::to_string(max_exhaustive) + " vertices", ok);
  }

  {
    const auto d = make_slack(1.5, 0.5);
    const bool ok = std::abs(d.prob(0) - 0.5) < 1e-15 && std::abs(d.prob(1) - 0.25) < 1e-15 &&
                    std::abs(d.prob(2) - 0.1875) < 1e-15 && std::abs(d.prob(3) - 0.03125) < 1e-15;
    r.check("slack(1.5, 0.5) coefficients", ok);
  }

  {
    const auto geo = make_geometric_half();
    Rng rng = Rng::substream(11, 0);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < random_trees; ++i) {
      const auto t = try_sample_gw(geo, rng, 4000);
      if (!t) continue;
      const Looptree g = loop_transform(*t);
      std::size_t edges = 0;
      for (std::size_t v = 0; v < t->size(); ++v) {
        if (t->out(v) > 0) edges += t->out(v) + 1;
        if (g.degree(static_cast<VertexId>(v)) > 4) ++bad;
      }
      if (edges != g.edge_count()) ++bad;
      const auto w = encode_lukasiewicz(*t).partial_sums();
      const auto dist = g.bfs_distances();
      for (std::size_t j = 0; j < t->size(); ++j)
        if (dist[j] > t->depth(j) + w[j]) ++bad;
      if (loop_height(g) > height(*t) + static_cast<std::size_t>(max_lukasiewicz(*t))) ++bad;
    }
    r.check("loop transform: degree, edge count, distance and height bounds on " + std::to_string(random_trees) +
                " trees",
            bad == 0, std::to_string(bad) + " violations");
  }

  {
    const Looptree pair = chain_graph(2);
    const auto p = return_probabilities(pair, 5);
    bool ok = true;
    for (double v : p.p) ok = ok && std::abs(v - 1.0) < 1e-15;
    r.check("double edge: p_2k = 1", ok);

    const Looptree c4 = cycle_graph(4);
    const auto q = return_probabilities(c4, 3);
    bool ok4 = true;
    for (int k = 1; k <= 3; ++k) ok4 = ok4 && std::abs(q.p[k] - brute_force_return(c4, 0, 2 * k)) < 1e-14;
    r.check("4-cycle return probabilities match trajectory enumeration", ok4,
            "p2=" + num(q.p[1]) + " p4=" + num(q.p[2]));
  }

  {
    const Looptree chain = chain_graph(6);
    const auto d = chain.bfs_distances();
    const double t3 = expected_escape_time(chain, d, 3).root;
    const double t1 = expected_escape_time(cycle_graph(4), cycle_graph(4).bfs_distances(), 1).root;
    r.check("escape time: chain T_3 = 9, T_1 = 1", std::abs(t3 - 9.0) < 1e-9 && std::abs(t1 - 1.0) < 1e-12,
            "T_3=" + num(t3));
  }

  {
    const Looptree c4 = cycle_graph(4);
    const double r4 = effective_resistance(c4, c4.bfs_distances(), 2).value;
    const Looptree pair = chain_graph(2);
    const double r2 = effective_resistance(pair, pair.bfs_distances(), 1).value;
    const Looptree chain = chain_graph(12);
    bool chain_ok = true;
    for (std::uint32_t n = 1; n <= 10; ++n)
      chain_ok = chain_ok && std::abs(effective_resistance(chain, chain.bfs_distances(), n).value - n / 2.0) < 1e-9;
    r.check("resistance: 4-cycle 1, double edge 1/2, chain n/2",
            std::abs(r4 - 1.0) < 1e-12 && std::abs(r2 - 0.5) < 1e-12 && chain_ok);
  }

  {
    const auto geo = make_geometric_half();
    const double g = progeny_pgf(geo, 0.75).value;
    r.check("progeny pgf: geometric g(3/4) = 1/2", std::abs(g - 0.5) < 1e-10, num(g));
    const auto ex = expected_outgrowth_volume(geo, 1);
    r.check("outgrowth recursion: E(X^(1)) = 7/4, M = 3/4",
            std::abs(ex[1] - 1.75) < 1e-14 && std::abs(m_constant(geo) - 0.75) < 1e-14);
  }

  {
    const auto geo = make_geometric_half();
    Rng rng = Rng::substream(12, 0);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < random_balls; ++i) {
      const LoopspineBall b = generate_loopspine_ball(geo, 12, rng);
      const auto d = b.graph.bfs_distances();
      for (std::size_t v = 0; v < b.size(); ++v)
        if (d[v] != b.vertices[v].distance) ++bad;
      for (const auto& c : b.cycles)
        for (const auto& [pos, id] : c.members)
          if (b.vertices[id].distance != c.root_distance + std::min(pos, c.x + 1 - pos)) ++bad;
    }
    r.check("lazy ball: recorded distances equal breadth-first distances", bad == 0,
            std::to_string(bad) + " mismatches");
  }

  {
    const auto slack = make_slack(1.5, 0.5);
    Rng rng = Rng::substream(13, 0);
    std::size_t bad = 0;
    double worst_mass = 0.0;
    bool monotone = true;
    for (std::size_t i = 0; i < random_balls; ++i) {
      const LoopspineBall b = generate_loopspine_ball(slack, 33, rng);
      for (std::uint32_t n : {8u, 16u, 32u}) {
        const double reff = effective_resistance(b, n).value;
        const Separator s = find_separator(b, n);
        if (!s.separates || s.distance / 2.0 > reff + 1e-9 || reff > n + 1e-9) ++bad;
      }
      const auto p = return_probabilities(b, 16);
      worst_mass = std::max(worst_mass, p.max_mass_error);
      for (std::size_t k = 1; k < p.p.size(); ++k) monotone = monotone && p.p[k] <= p.p[k - 1] + 1e-15;
    }
    r.check("separator sandwich D_n/2 <= R_eff <= n", bad == 0, std::to_string(bad) + " violations");
    r.check("kernel: mass conserved to 1e-12 and p_2k non-increasing", worst_mass <= 1e-12 && monotone,
            "max mass error " + num(worst_mass));
  }

  out << (r.failures() == 0 ? "all checks passed" : std::to_string(r.failures()) + " checks failed") << "\n";
  return r.failures();
}

}  // namespace looptree
