#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "looptree/estimate.hpp"

using namespace looptree;

namespace {

std::vector<Point> power_law(double exponent, double scale, int count) {
  std::vector<Point> pts;
  for (int i = 1; i <= count; ++i) pts.emplace_back(i, scale * std::pow(i, exponent));
  return pts;
}

const OffspringDistribution& chain() {
  static const auto d = make_tabulated({0.0, 1.0});
  return d;
}

}  // namespace

TEST_CASE("fits of exact power laws") {
  const auto sq = fit_exponent(power_law(2.0, 1.0, 20));
  CHECK(sq.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sq.std_error == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sq.points == 11);
  CHECK(sq.window.lo == 10.0);
  CHECK(fit_exponent(power_law(0.0, 5.0, 20)).slope == doctest::Approx(0.0).scale(1.0));
  const auto full = fit_exponent(power_law(1.0, 1.0, 20), FitWindow{1, 20});
  CHECK(full.points == 20);
  CHECK(full.intercept == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("noisy power law") {
  Rng rng(81);
  std::vector<Point> pts;
  for (int n = 1; n <= 200; ++n) pts.emplace_back(n, std::pow(n, 1.5) * (1 + 0.01 * (2 * rng.uniform() - 1)));
  const auto fit = fit_exponent(pts);
  CHECK(std::abs(fit.slope - 1.5) <= 0.05);
  CHECK(fit.std_error >= 0.0);
}

TEST_CASE("rescaling leaves the slope unchanged") {
  Rng rng(82);
  std::vector<Point> pts, scaled;
  for (int n = 1; n <= 64; ++n) {
    const double y = std::pow(n, -0.7) * std::exp(0.1 * rng.uniform());
    pts.emplace_back(n, y);
    scaled.emplace_back(n, 1024.0 * y);
  }
  const auto a = fit_exponent(pts), b = fit_exponent(scaled);
  CHECK(a.slope == doctest::Approx(b.slope).epsilon(1e-12));
  CHECK(a.std_error == doctest::Approx(b.std_error).epsilon(1e-9));
}

TEST_CASE("fit errors and windows") {
  CHECK_THROWS_AS(fit_exponent(power_law(1.0, 1.0, 3)), std::invalid_argument);
  CHECK_THROWS_AS(fit_exponent({{1, 1}, {2, -1}, {3, 1}, {4, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_exponent(power_law(1.0, 1.0, 20), FitWindow{30, 40}), std::invalid_argument);
  const auto w = default_window({16, 32, 64, 128, 256});
  CHECK(w.lo == 16);
  CHECK(w.hi == 256);
  const auto u = default_window({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(u.lo == 5);
  CHECK(u.hi == 10);
}

TEST_CASE("theory values") {
  CHECK(ds_theory(1.5) == doctest::Approx(1.2));
  CHECK(ds_theory(2.0) == doctest::Approx(4.0 / 3.0));
  const auto m = mean_estimate({1, 2, 3, 4});
  CHECK(m.mean == 2.5);
  CHECK(m.std_error == doctest::Approx(std::sqrt(5.0 / 12.0)));
}

TEST_CASE("inverse of m a_m") {
  const auto g = make_geometric_half();
  const auto a = scaling_sequence(g);
  for (double n : {1.0, 10.0, 1000.0, 1e6}) {
    const double m = inverse_volume_resistance(g, n);
    CHECK(m * a(m) == doctest::Approx(n).epsilon(1e-9));
    CHECK(m == doctest::Approx(std::cbrt(n)).epsilon(1e-9));
  }
  const auto slack = make_slack(1.5, 0.5);
  const double m = inverse_volume_resistance(slack, 500.0);
  CHECK(m * scaling_sequence(slack)(m) == doctest::Approx(500.0).epsilon(1e-9));
}

TEST_CASE("chain controls") {
  const auto ds = estimate_ds_quenched(chain(), 3, 256);
  CHECK(std::abs(ds.ds - 1.0) <= 0.02);
  const auto vol = estimate_volume_exponent(chain(), 3, {16, 32, 64, 128}, 1);
  CHECK(vol.fit.slope == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t j = 0; j < vol.n.size(); ++j) CHECK(vol.mean[j] == vol.n[j]);
  CHECK(vol.ratio.empty());
  const auto res = estimate_resistance_exponent(chain(), 2, {16, 32, 64, 128}, 1);
  CHECK(res.fit.slope == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t j = 0; j < res.n.size(); ++j) CHECK(res.mean[j] == doctest::Approx(res.n[j] / 2));
  CHECK(res.sandwich_violations == 0);
  CHECK(res.sandwich_checks == 8);
  const auto esc = estimate_escape_exponent(chain(), 2, {16, 32, 64, 128}, 1);
  CHECK(esc.fit.slope == doctest::Approx(2.0).epsilon(1e-9));
  for (std::size_t j = 0; j < esc.n.size(); ++j) CHECK(esc.mean[j] == doctest::Approx(esc.n[j] * esc.n[j]));
}

TEST_CASE("annealed return probability times v(I(n)) stays bounded") {
  const auto g = make_geometric_half();
  const auto est = estimate_ds_annealed(g, 20, 128, 5);
  std::vector<double> scaled;
  for (const auto& [n, p] : est.points) {
    if (n < 8) continue;
    scaled.push_back(p * scaling_a(g, inverse_volume_resistance(g, n)));
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  CHECK(*lo > 0.0);
  CHECK(*hi / *lo < 3.0);
  CHECK(est.theory == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("annealed averaging is deterministic and thread independent") {
  const auto slack = make_slack(1.5, 0.5);
  const auto a = estimate_ds_annealed(slack, 6, 32, 9);
  const auto b = estimate_ds_annealed(slack, 6, 32, 9);
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].second == b.points[i].second);
}

TEST_CASE("total variation and the local limit") {
  CHECK(total_variation({"a", "b"}, {"a", "b"}) == 0.0);
  CHECK(total_variation({"a"}, {"b"}) == 1.0);
  CHECK(total_variation({"a", "a", "b", "c"}, {"a", "b"}) == doctest::Approx(0.25));
  CHECK_THROWS_AS(total_variation({}, {"a"}), std::invalid_argument);

  const auto t = make_tabulated({0.4, 0.3, 0.2, 0.1});
  const auto trivial = local_limit_test(t, {1, 10}, 1, 500, 3);
  for (const auto& row : trivial) CHECK(row.tv == 0.0);

  const auto rows = local_limit_test(t, {50, 200, 800}, 2, 20000, 4);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    CHECK(row.tv >= 0.0);
    CHECK(row.tv <= 1.0);
  }
  for (std::size_t j = 1; j < rows.size(); ++j) CHECK(rows[j].tv <= rows[j - 1].tv + 4 * rows[j - 1].null_sd);
  CHECK(rows.back().tv <= rows.back().null_mean + 4 * rows.back().null_sd);
}

TEST_CASE("quenched realizations agree") {
  const auto slack = make_slack(1.5, 0.5);
  for (std::uint64_t seed = 1; seed < 10; seed += 2) {
    const auto a = estimate_ds_quenched(slack, seed, 1024);
    const auto b = estimate_ds_quenched(slack, seed + 1, 1024);
    CAPTURE(seed);
    CAPTURE(a.ds);
    CAPTURE(b.ds);
    const double combined = std::hypot(a.ds_std_error, b.ds_std_error);
    CHECK(std::abs(a.ds - b.ds) <= 2 * (combined + 0.1));
  }
}
