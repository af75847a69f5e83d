#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "looptree/walk.hpp"

using namespace looptree;

namespace {

Looptree cycle(std::size_t n) {
  Looptree g(n);
  for (VertexId v = 0; v < n; ++v) g.add_edge(v, static_cast<VertexId>((v + 1) % n));
  return g;
}

Looptree doubled_path(std::size_t n) {
  Looptree g(n);
  for (VertexId v = 0; v + 1 < n; ++v) {
    g.add_edge(v, v + 1);
    g.add_edge(v, v + 1);
  }
  return g;
}

// Dense transition matrix powers.
std::vector<double> dense_returns(const Looptree& g, int n_max) {
  const std::size_t n = g.size();
  std::vector<double> p(n * n, 0.0);
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v : g.neighbors(u)) p[u * n + v] += 1.0 / g.degree(u);
  std::vector<double> row(n, 0.0), next(n);
  row[0] = 1.0;
  std::vector<double> out{1.0};
  for (int t = 1; t <= 2 * n_max; ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v) next[v] += row[u] * p[u * n + v];
    row.swap(next);
    if (t % 2 == 0) out.push_back(row[0]);
  }
  return out;
}

// Brute force over all trajectories of length `steps` from the root.
double enumerate_return(const Looptree& g, VertexId v, int steps) {
  if (steps == 0) return v == 0 ? 1.0 : 0.0;
  double s = 0;
  for (VertexId w : g.neighbors(v)) s += enumerate_return(g, w, steps - 1) / g.degree(v);
  return s;
}

std::vector<std::uint32_t> distances(const LoopspineBall& b) {
  std::vector<std::uint32_t> d;
  for (const auto& v : b.vertices) d.push_back(v.distance);
  return d;
}

}  // namespace

TEST_CASE("small graphs") {
  const auto pair = doubled_path(2);
  for (double p : return_probabilities(pair, 10).p) CHECK(p == 1.0);

  const auto c4 = return_probabilities(cycle(4), 3);
  CHECK(c4.p[1] == doctest::Approx(0.5));
  CHECK(c4.p[2] == doctest::Approx(enumerate_return(cycle(4), 0, 4)));
  CHECK(c4.p[2] == doctest::Approx(0.5));

  const auto single = return_probabilities(Looptree(1), 3);
  for (double p : single.p) CHECK(p == 1.0);
}

TEST_CASE("kernel matches dense powers on balls") {
  const auto slack = make_slack(1.5, 0.5);
  Rng rng = Rng::substream(51, 0);
  for (int i = 0; i < 20; ++i) {
    const auto b = generate_loopspine_ball(i % 2 ? slack : make_geometric_half(), 13, rng);
    const auto exact = dense_returns(b.graph, 6);
    const auto fast = return_probabilities(b, 6);
    const auto pruned = return_probabilities(b, 6, true);
    for (std::size_t k = 0; k < exact.size(); ++k) {
      CHECK(fast.p[k] == doctest::Approx(exact[k]).epsilon(1e-12));
      CHECK(pruned.p[k] == doctest::Approx(fast.p[k]).epsilon(1e-14));
    }
    CHECK(fast.max_mass_error <= 1e-12);
    CHECK(fast.dropped == 0.0);
  }
}

TEST_CASE("mass, monotonicity and positivity") {
  const auto slack = make_slack(1.5, 0.5);
  Rng rng = Rng::substream(52, 0);
  for (int i = 0; i < 10; ++i) {
    const auto b = generate_loopspine_ball(slack, 2 * 64 + 1, rng);
    KernelEvolution k(b, 0);
    for (int t = 0; t < 128; ++t) {
      k.step();
      CHECK(std::abs(k.mass() - 1.0) <= 1e-12);
      for (double x : k.state()) CHECK(x >= 0.0);
    }
    const auto r = return_probabilities(b, 64);
    for (std::size_t j = 1; j < r.p.size(); ++j) {
      CHECK(r.p[j] > 0.0);
      CHECK(r.p[j] <= r.p[j - 1] * (1 + 1e-12));
    }
    const auto pruned = return_probabilities(b, 64, true);
    CHECK(pruned.max_mass_error <= 1e-12);
    CHECK(pruned.dropped >= 0.0);
  }
}

TEST_CASE("pruned evolution needs only radius n + 2") {
  const auto slack = make_slack(1.5, 0.5);
  Rng rng = Rng::substream(53, 0);
  constexpr std::uint32_t n = 32;
  const auto small = generate_loopspine_ball(slack, n + 2, rng);
  const auto ps = return_probabilities(small, n, true);
  // A walk that returns by time 2n never goes beyond distance n, so the
  // evolution killed outside B(n + 1) gives the exact values.
  const std::size_t m = small.size();
  std::vector<double> state(m, 0.0), next(m);
  state[0] = 1.0;
  for (std::uint32_t t = 1; t <= 2 * n; ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    for (VertexId u = 0; u < m; ++u)
      for (VertexId v : small.graph.neighbors(u))
        if (small.vertices[v].distance <= n) next[v] += state[u] / small.graph.degree(u);
    state.swap(next);
    if (t % 2 == 0) CHECK(ps.p[t / 2] == doctest::Approx(state[0]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(return_probabilities(small, n), std::invalid_argument);
  CHECK_THROWS_AS(return_probabilities(small, n + 1, true), std::invalid_argument);
  KernelEvolution k(small, 4);
  for (int t = 0; t < 4; ++t) k.step();
  CHECK_THROWS_AS(k.step(), std::logic_error);
}

TEST_CASE("escape times: small exact values") {
  const auto pair = doubled_path(2);
  CHECK(expected_escape_time(pair, pair.bfs_distances(), 1).root == doctest::Approx(1.0));
  const auto c4 = cycle(4);
  const auto t = expected_escape_time(c4, c4.bfs_distances(), 2);
  CHECK(t.root == doctest::Approx(4.0));
  CHECK(t.t[2] == 0.0);
  for (std::uint32_t r : {1u, 3u, 7u, 20u}) {
    const auto path = doubled_path(r + 1);
    const auto s = expected_escape_time(path, path.bfs_distances(), r);
    CHECK(s.root == doctest::Approx(double(r) * r).epsilon(1e-10));
    CHECK(s.residual <= 1e-10);
  }
}

TEST_CASE("escape times against value iteration") {
  Rng rng = Rng::substream(54, 0);
  for (int i = 0; i < 20; ++i) {
    const auto b = generate_loopspine_ball(make_tabulated({0.4, 0.3, 0.2, 0.1}), 5, rng);
    const auto d = distances(b);
    const auto sol = expected_escape_time(b, 4);
    std::vector<double> t(b.size(), 0.0), next(b.size());
    for (int it = 0; it < 200000; ++it) {
      for (VertexId v = 0; v < b.size(); ++v) {
        next[v] = 0;
        if (d[v] >= 4) continue;
        double s = 0;
        for (VertexId w : b.graph.neighbors(v)) s += t[w];
        next[v] = 1 + s / b.graph.degree(v);
      }
      t.swap(next);
    }
    CHECK(sol.root == doctest::Approx(t[0]).epsilon(1e-8));
    CHECK(sol.root >= 4.0);
  }
}

TEST_CASE("escape time Monte Carlo agrees with the exact solve") {
  const auto slack = make_slack(1.5, 0.5);
  Rng rng = Rng::substream(55, 0);
  const auto b = generate_loopspine_ball(slack, 17, rng);
  for (std::uint32_t r : {4u, 8u, 16u}) {
    const auto exact = expected_escape_time(b, r);
    const auto mc = sample_escape_time(b, r, 4000, rng);
    CAPTURE(r);
    CHECK(std::abs(mc.mean - exact.root) <= 4 * mc.std_error);
    CHECK(exact.root >= r);
  }
  CHECK_THROWS_AS(expected_escape_time(b, 17), std::invalid_argument);
}

TEST_CASE("walk samples") {
  Rng rng(56);
  const auto chain = make_tabulated({0.0, 1.0});
  const auto b = generate_loopspine_ball(chain, 40, rng);
  double sum = 0;
  constexpr int kWalks = 4000;
  for (int i = 0; i < kWalks; ++i) {
    const auto w = walk_sample(b, 100000, rng);
    CHECK(w.first_exit[1] == 1);
    CHECK(w.truncated);
    CHECK(w.max_distance == 39);
    sum += static_cast<double>(w.first_exit[8]);
  }
  // Chain: E tau_8 = 64, Var tau_R = (2R^4 - 2R^2)/3 for the reflected walk.
  CHECK(std::abs(sum / kWalks - 64.0) <= 4 * std::sqrt((2.0 * 4096 - 128) / 3 / kWalks));
  const auto short_walk = walk_sample(b, 3, rng);
  CHECK(short_walk.steps == 3);
  CHECK_FALSE(short_walk.truncated);
}
