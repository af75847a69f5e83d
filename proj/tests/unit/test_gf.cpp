#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "looptree/gf.hpp"
#include "looptree/loopspine.hpp"
#include "looptree/trees.hpp"

using namespace looptree;

namespace {

// E X^(n) by conditioning on the root's outdegree: the i-th of k children
// sits at distance min(i, k + 1 - i) and carries an independent copy.
std::vector<double> first_generation(const OffspringDistribution& d, std::size_t n_max, std::uint64_t k_max) {
  std::vector<double> ex(n_max + 1, 0.0);
  for (std::size_t n = 0; n <= n_max; ++n) {
    double s = 1.0;
    for (std::uint64_t k = 1; k <= k_max; ++k) {
      double inner = 0;
      for (std::uint64_t i = 1; i <= k; ++i) {
        const std::uint64_t step = std::min(i, k + 1 - i);
        if (step <= n) inner += ex[n - step];
      }
      s += d.prob(k) * inner;
    }
    ex[n] = s;
  }
  return ex;
}

}  // namespace

TEST_CASE("progeny generating function") {
  const auto g = make_geometric_half();
  CHECK(progeny_pgf(g, 0.0).value == 0.0);
  for (double s : {0.1, 0.5, 0.75, 0.9, 0.99}) {
    const auto r = progeny_pgf(g, s);
    CHECK(std::abs(r.value - (1 - std::sqrt(1 - s))) <= 1e-10);
    CHECK(r.residual <= 1e-13);
  }
  CHECK(progeny_pgf(g, 0.75).value == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(progeny_pgf(g, 1.0), std::domain_error);
  CHECK_THROWS_AS(progeny_pgf(g, -0.1), std::domain_error);
}

TEST_CASE("progeny generating function is monotone, convex and below s") {
  for (const auto& d : {make_geometric_half(), make_slack(1.5, 0.5), make_tabulated({0.4, 0.3, 0.2, 0.1})}) {
    std::vector<double> v;
    for (int i = 0; i <= 98; ++i) {
      const double s = i / 100.0;
      v.push_back(progeny_pgf(d, s).value);
      CHECK(v.back() >= 0.0);
      CHECK(v.back() <= s + 1e-15);
    }
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] >= v[i - 1]);
    for (std::size_t i = 1; i + 1 < v.size(); ++i) CHECK(v[i + 1] - 2 * v[i] + v[i - 1] >= -1e-12);
  }
}

TEST_CASE("progeny generating function against sampled trees") {
  const auto slack = make_slack(1.5, 0.5);
  for (const auto* d : {&slack}) {
    Rng rng = Rng::substream(71, 0);
    constexpr int kSamples = 100000;
    double sum = 0, sq = 0;
    for (int i = 0; i < kSamples; ++i) {
      std::size_t size = 0;
      // Trees above the cap contribute at most 0.9^2000.
      const double x = try_sample_gw(*d, rng, 2000, &size) ? std::pow(0.9, double(size)) : 0.0;
      sum += x;
      sq += x * x;
    }
    const double mean = sum / kSamples;
    const double se = std::sqrt((sq / kSamples - mean * mean) / kSamples);
    CHECK(std::abs(mean - progeny_pgf(*d, 0.9).value) <= 4 * se);
  }
}

TEST_CASE("outgrowth volume recursion") {
  const auto g = make_geometric_half();
  const auto ex = expected_outgrowth_volume(g, 60);
  CHECK(ex[0] == 1.0);
  CHECK(ex[1] == doctest::Approx(1.75));
  for (std::size_t n = 1; n < ex.size(); ++n) CHECK(ex[n] >= ex[n - 1]);

  const auto oracle = first_generation(g, 60, 400);
  for (std::size_t n = 0; n <= 60; ++n) CHECK(ex[n] == doctest::Approx(oracle[n]).epsilon(1e-10));

  const auto t = make_tabulated({0.4, 0.3, 0.2, 0.1});
  const auto et = expected_outgrowth_volume(t, 80);
  const auto ot = first_generation(t, 80, 3);
  for (std::size_t n = 0; n <= 80; ++n) CHECK(et[n] == doctest::Approx(ot[n]).epsilon(1e-12));
}

TEST_CASE("outgrowth volume against sampled outgrowths") {
  constexpr std::uint32_t n = 16;
  for (const auto& d : {make_geometric_half(), make_slack(1.5, 0.5)}) {
    Rng rng = Rng::substream(72, 0);
    constexpr int kSamples = 100000;
    double sum = 0, sq = 0;
    for (int i = 0; i < kSamples; ++i) {
      double x = 0;
      for (auto c : outgrowth_level_counts(d, n + 1, rng)) x += static_cast<double>(c);
      sum += x;
      sq += x * x;
    }
    const double mean = sum / kSamples;
    const double se = std::sqrt((sq / kSamples - mean * mean) / kSamples);
    CHECK(std::abs(mean - expected_outgrowth_volume(d, n)[n]) <= 4 * se);
  }
}

TEST_CASE("asymptotic constant") {
  const auto g = make_geometric_half();
  const auto slack = make_slack(1.5, 0.5);
  CHECK(m_constant(g) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(m_constant(slack) == doctest::Approx(1.5957691216057308).epsilon(1e-12));
  CHECK(m_constant(make_slack(1.5, 0.3)) == doctest::Approx(m_constant(slack)));

  constexpr std::size_t kMax = 1 << 14;
  for (const auto* d : {&g, &slack}) {
    const auto ex = expected_outgrowth_volume(*d, kMax);
    const auto ratio = [&](std::size_t n) { return ex[n] * n / scaling_a(*d, n); };
    CAPTURE(d->describe());
    CHECK(std::abs(ratio(kMax) / m_constant(*d) - 1) <= 0.10);
    CHECK(std::abs(ratio(1 << 13) / ratio(1 << 12) - 1) <= 0.05);
    CHECK(std::abs(ratio(1 << 14) / ratio(1 << 13) - 1) <= 0.05);
  }
}

TEST_CASE("expected ball volume bracket") {
  for (const auto& d : {make_geometric_half(), make_slack(1.5, 0.5)}) {
    std::vector<double> ratio;
    for (std::uint32_t n : {16u, 32u, 64u, 128u}) {
      Rng rng = Rng::substream(73, n);
      double sum = 0;
      constexpr int kSamples = 2000;
      for (int i = 0; i < kSamples; ++i)
        for (auto c : loopspine_level_counts(d, n, rng)) sum += static_cast<double>(c);
      ratio.push_back(sum / kSamples / scaling_a(d, n));
    }
    CAPTURE(d.describe());
    for (std::size_t j = 1; j < ratio.size(); ++j) {
      CAPTURE(ratio[j - 1]);
      CAPTURE(ratio[j]);
      CHECK(std::abs(ratio[j] / ratio[j - 1] - 1) <= 0.35);
    }
  }
}
