#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "looptree/resistance.hpp"

using namespace looptree;

namespace {

Looptree cycle(std::size_t n) {
  Looptree g(n);
  for (VertexId v = 0; v < n; ++v) g.add_edge(v, static_cast<VertexId>((v + 1) % n));
  return g;
}

// Merge the sink into one node, ground it, inject a unit current at the root.
double dense_resistance(const Looptree& g, const std::vector<std::uint32_t>& d, std::uint32_t n) {
  std::vector<int> id(g.size());
  int m = 0;
  for (VertexId v = 0; v < g.size(); ++v) id[v] = d[v] >= n ? -1 : m++;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(m, m);
  for (VertexId u = 0; u < g.size(); ++u) {
    if (id[u] < 0) continue;
    for (VertexId w : g.neighbors(u)) {
      lap(id[u], id[u]) += 1;
      if (id[w] >= 0) lap(id[u], id[w]) -= 1;
    }
  }
  Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
  e(id[0]) = 1;
  return lap.fullPivLu().solve(e)(id[0]);
}

std::vector<std::uint32_t> distances(const LoopspineBall& b) {
  std::vector<std::uint32_t> d;
  for (const auto& v : b.vertices) d.push_back(v.distance);
  return d;
}

}  // namespace

TEST_CASE("series and parallel examples") {
  const auto c4 = cycle(4);
  CHECK(effective_resistance(c4, c4.bfs_distances(), 2).value == doctest::Approx(1.0));
  Looptree pair(2);
  pair.add_edge(0, 1);
  pair.add_edge(0, 1);
  CHECK(effective_resistance(pair, pair.bfs_distances(), 1).value == doctest::Approx(0.5));
  CHECK_THROWS_AS(effective_resistance(pair, pair.bfs_distances(), 2), std::invalid_argument);
  CHECK_THROWS_AS(effective_resistance(pair, pair.bfs_distances(), 0), std::invalid_argument);

  Rng rng(61);
  const auto chain = generate_loopspine_ball(make_tabulated({0.0, 1.0}), 70, rng);
  for (std::uint32_t n : {1u, 2u, 7u, 16u, 69u}) {
    const auto r = effective_resistance(chain, n);
    CHECK(r.value == doctest::Approx(n / 2.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(effective_resistance(chain, 70), std::invalid_argument);
}

TEST_CASE("agrees with a dense Laplacian solve") {
  const auto slack = make_slack(1.5, 0.5);
  Rng rng = Rng::substream(62, 0);
  for (int i = 0; i < 40; ++i) {
    const auto b = generate_loopspine_ball(i % 2 ? slack : make_geometric_half(), 10, rng);
    for (std::uint32_t n : {1u, 3u, 9u}) {
      const auto r = effective_resistance(b, n);
      CHECK(r.value == doctest::Approx(dense_resistance(b.graph, distances(b), n)).epsilon(1e-9));
      CHECK(r.residual <= 1e-10);
    }
  }
}

TEST_CASE("potential is harmonic and bounded") {
  const auto slack = make_slack(1.5, 0.5);
  Rng rng = Rng::substream(63, 0);
  for (int i = 0; i < 30; ++i) {
    const auto b = generate_loopspine_ball(slack, 33, rng);
    double previous = 0;
    for (std::uint32_t n : {4u, 8u, 16u, 32u}) {
      const auto r = effective_resistance(b, n);
      CHECK(r.value > 0.0);
      CHECK(r.value <= n);
      CHECK(r.value >= previous * (1 - 1e-12));
      previous = r.value;
      for (VertexId v = 0; v < b.size(); ++v) {
        const double h = r.potential[v];
        CHECK(h >= -1e-12);
        CHECK(h <= 1 + 1e-12);
        if (v == 0 || b.vertices[v].distance >= n) continue;
        double flow = 0;
        for (VertexId w : b.graph.neighbors(v)) flow += h - r.potential[w];
        CHECK(std::abs(flow) <= 1e-9);
      }
    }
  }
}

TEST_CASE("separator sandwich and cases") {
  const auto slack = make_slack(1.5, 0.5);
  std::set<SeparatorCase> seen;
  int violations = 0;
  Rng rng = Rng::substream(64, 0);
  for (int i = 0; i < 300; ++i) {
    const auto b = generate_loopspine_ball(slack, 33, rng);
    for (std::uint32_t n : {2u, 8u, 16u, 32u}) {
      const auto s = find_separator(b, n);
      seen.insert(s.kind);
      CHECK(s.separates);
      CHECK(!s.vertices.empty());
      CHECK(s.vertices.size() <= 2);
      for (VertexId v : s.vertices) CHECK(b.vertices[v].distance == s.distance);
      CHECK(s.distance >= 1);
      switch (s.kind) {
        case SeparatorCase::MarkAtRootCycle:
          CHECK(s.distance == 1);
          CHECK(s.first_mark == 0);
          break;
        case SeparatorCase::MarkAtK:
          CHECK(s.first_mark > 0);
          CHECK(s.first_mark <= s.first_high);
          CHECK(s.vertices.front() == b.cycles[s.first_mark].root);
          break;
        case SeparatorCase::NoMarkNear:
          CHECK(s.first_mark > s.first_high);
          CHECK(2 * s.distance < n);
          break;
        case SeparatorCase::NoMarkFar:
          CHECK(s.first_mark > s.first_high);
          CHECK(s.distance == n / 2);
          break;
      }
      const double r = effective_resistance(b, n).value;
      if (!(separator_lower_bound(b, n) <= r + 1e-12 && r <= n)) ++violations;
    }
  }
  CHECK(violations == 0);
  CHECK(seen.size() == 4);
  Rng small(65);
  const auto b = generate_loopspine_ball(slack, 8, small);
  CHECK_THROWS_AS(find_separator(b, 8), std::invalid_argument);
  CHECK_THROWS_AS(find_separator(b, 1), std::invalid_argument);
}

TEST_CASE("chain separator sits at level n/2") {
  Rng rng(66);
  const auto chain = generate_loopspine_ball(make_tabulated({0.0, 1.0}), 40, rng);
  for (std::uint32_t n = 2; n < 40; ++n) {
    const auto s = find_separator(chain, n);
    CHECK(s.kind == SeparatorCase::NoMarkFar);
    CHECK(s.distance == n / 2);
    CHECK(s.vertices.size() == 1);
    CHECK(separator_lower_bound(chain, n) <= effective_resistance(chain, n).value);
  }
  CHECK(to_string(SeparatorCase::NoMarkNear) == "no-mark-near");
  CHECK(to_string(SeparatorCase::MarkAtRootCycle) == "mark-at-root-cycle");
}

TEST_CASE("small resistance becomes rarer at larger lambda") {
  const auto slack = make_slack(1.5, 0.5);
  constexpr std::uint32_t n = 32;
  std::vector<double> r;
  Rng rng = Rng::substream(67, 0);
  for (int i = 0; i < 500; ++i) r.push_back(effective_resistance(generate_loopspine_ball(slack, n + 1, rng), n).value);
  std::vector<double> frac;
  for (double lambda : {2.0, 4.0, 8.0, 16.0})
    frac.push_back(std::count_if(r.begin(), r.end(), [&](double x) { return x < n / lambda; }) / double(r.size()));
  for (std::size_t j = 1; j < frac.size(); ++j) CHECK(frac[j] <= frac[j - 1]);
  CHECK(frac.back() < frac.front());
}
