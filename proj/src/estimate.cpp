#include "looptree/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "looptree/canonical.hpp"
#include "looptree/ensemble.hpp"
#include "looptree/loopspine.hpp"
#include "looptree/resistance.hpp"
#include "looptree/trees.hpp"
#include "looptree/walk.hpp"

namespace looptree {

ExponentFit fit_exponent(const std::vector<Point>& points, std::optional<FitWindow> window) {
  std::vector<double> ns;
  for (const auto& p : points) ns.push_back(p.first);
  const FitWindow w = window ? *window : default_window(ns);
  std::vector<double> xs, ys;
  for (const auto& [n, y] : points) {
    if (n < w.lo || n > w.hi) continue;
    if (!(n > 0.0) || !(y > 0.0)) throw std::invalid_argument("fit_exponent: coordinates must be positive");
    xs.push_back(std::log(n));
    ys.push_back(std::log(y));
  }
  const std::size_t m = xs.size();
  if (m < 4) throw std::invalid_argument("fit_exponent: need at least 4 points in the window");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_exponent: window has a single n value");
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ys[i] - fit.intercept - fit.slope * xs[i];
    sse += r * r;
  }
  fit.std_error = std::sqrt(sse / (m - 2) / sxx);
  fit.window = w;
  fit.points = m;
  return fit;
}

FitWindow default_window(const std::vector<double>& n) {
  if (n.empty()) return {};
  const auto [lo, hi] = std::minmax_element(n.begin(), n.end());
  const FitWindow upper{*hi / 2.0, *hi};
  const auto inside = std::count_if(n.begin(), n.end(), [&](double v) { return v >= upper.lo && v <= upper.hi; });
  if (inside >= 4) return upper;
  return {*lo, *hi};
}

double ds_theory(double alpha) { return 2.0 * alpha / (alpha + 1.0); }

MeanEstimate mean_estimate(const std::vector<double>& samples) {
  MeanEstimate e;
  const std::size_t m = samples.size();
  if (m == 0) return e;
  double s = 0.0;
  for (double v : samples) s += v;
  e.mean = s / m;
  if (m > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - e.mean) * (v - e.mean);
    e.std_error = std::sqrt(ss / (m - 1) / m);
  }
  return e;
}

namespace {

DsEstimate finish_ds(const OffspringDistribution& dist, std::vector<Point> points, std::optional<FitWindow> window) {
  DsEstimate est;
  est.points = std::move(points);
  est.fit = fit_exponent(est.points, window);
  est.ds = -2.0 * est.fit.slope;
  est.ds_std_error = 2.0 * est.fit.std_error;
  est.theory = ds_theory(dist.alpha());
  return est;
}

std::vector<double> exact_returns(const OffspringDistribution& dist, Rng& rng, std::uint32_t n_max) {
  const LoopspineBall ball = generate_loopspine_ball(dist, 2 * n_max + 1, rng);
  return return_probabilities(ball, n_max, true).p;
}

}  // namespace

DsEstimate estimate_ds_quenched(const OffspringDistribution& dist, std::uint64_t seed, std::uint32_t n_max,
                                std::optional<FitWindow> window) {
  Rng rng = Rng::substream(seed, 0);
  const auto p = exact_returns(dist, rng, n_max);
  std::vector<Point> points;
  for (std::uint32_t n = 1; n <= n_max; ++n) points.emplace_back(n, p[n]);
  return finish_ds(dist, std::move(points), window);
}

DsEstimate estimate_ds_annealed(const OffspringDistribution& dist, std::size_t realizations, std::uint32_t n_max,
                                std::uint64_t seed, std::optional<FitWindow> window) {
  std::vector<std::vector<double>> runs(realizations);
  parallel_for(realizations, [&](std::size_t i) {
    Rng rng = Rng::substream(seed, i);
    runs[i] = exact_returns(dist, rng, n_max);
  });
  std::vector<Point> points;
  for (std::uint32_t n = 1; n <= n_max; ++n) {
    double s = 0.0;
    for (const auto& r : runs) s += r[n];
    points.emplace_back(n, s / realizations);
  }
  return finish_ds(dist, std::move(points), window);
}

namespace {

// Aggregates per-realization values (rows = realizations, columns = levels).
void summarize(LevelEstimate& est, const std::vector<std::uint32_t>& levels,
               const std::vector<std::vector<double>>& values, std::optional<FitWindow> window) {
  std::vector<Point> points;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    std::vector<double> column;
    column.reserve(values.size());
    for (const auto& row : values) column.push_back(row[j]);
    const MeanEstimate m = mean_estimate(column);
    est.n.push_back(levels[j]);
    est.mean.push_back(m.mean);
    est.std_error.push_back(m.std_error);
    points.emplace_back(levels[j], m.mean);
  }
  const FitWindow full{static_cast<double>(*std::min_element(levels.begin(), levels.end())),
                       static_cast<double>(*std::max_element(levels.begin(), levels.end()))};
  est.fit = fit_exponent(points, window ? *window : full);
}

std::uint32_t max_level(const std::vector<std::uint32_t>& levels) {
  if (levels.empty()) throw std::invalid_argument("no levels given");
  return *std::max_element(levels.begin(), levels.end());
}

}  // namespace

VolumeEstimate estimate_volume_exponent(const OffspringDistribution& dist, std::size_t realizations,
                                        const std::vector<std::uint32_t>& radii, std::uint64_t seed,
                                        std::optional<FitWindow> window) {
  const std::uint32_t top = max_level(radii);
  std::vector<std::vector<double>> values(realizations);
  parallel_for(realizations, [&](std::size_t i) {
    Rng rng = Rng::substream(seed, i);
    const auto counts = loopspine_level_counts(dist, top, rng);
    std::vector<double> cumulative(top + 1, 0.0);
    for (std::uint32_t d = 0; d < top; ++d) cumulative[d + 1] = cumulative[d] + static_cast<double>(counts[d]);
    for (std::uint32_t r : radii) values[i].push_back(cumulative[r]);
  });
  VolumeEstimate est;
  summarize(est, radii, values, window);
  if (dist.l_const() > 0.0)
    for (std::size_t j = 0; j < radii.size(); ++j) est.ratio.push_back(est.mean[j] / scaling_a(dist, radii[j]));
  return est;
}

ResistanceEstimate estimate_resistance_exponent(const OffspringDistribution& dist, std::size_t realizations,
                                                const std::vector<std::uint32_t>& levels, std::uint64_t seed,
                                                std::optional<FitWindow> window) {
  const std::uint32_t top = max_level(levels);
  std::vector<std::vector<double>> values(realizations);
  std::vector<std::size_t> violations(realizations, 0);
  parallel_for(realizations, [&](std::size_t i) {
    Rng rng = Rng::substream(seed, i);
    const LoopspineBall ball = generate_loopspine_ball(dist, top + 1, rng);
    for (std::uint32_t n : levels) {
      const double r = effective_resistance(ball, n).value;
      values[i].push_back(r);
      if (n >= 2) {
        const Separator sep = find_separator(ball, n);
        const double lower = sep.distance / 2.0;
        if (!sep.separates || lower > r * (1.0 + 1e-9) || r > n * (1.0 + 1e-9)) ++violations[i];
      }
    }
  });
  ResistanceEstimate est;
  summarize(est, levels, values, window);
  for (std::size_t i = 0; i < realizations; ++i) est.sandwich_violations += violations[i];
  est.sandwich_checks = realizations * static_cast<std::size_t>(std::count_if(
                                          levels.begin(), levels.end(), [](std::uint32_t n) { return n >= 2; }));
  return est;
}

LevelEstimate estimate_escape_exponent(const OffspringDistribution& dist, std::size_t realizations,
                                       const std::vector<std::uint32_t>& radii, std::uint64_t seed,
                                       std::optional<FitWindow> window) {
  const std::uint32_t top = max_level(radii);
  std::vector<std::vector<double>> values(realizations);
  parallel_for(realizations, [&](std::size_t i) {
    Rng rng = Rng::substream(seed, i);
    const LoopspineBall ball = generate_loopspine_ball(dist, top + 1, rng);
    for (std::uint32_t r : radii) values[i].push_back(expected_escape_time(ball, r).root);
  });
  LevelEstimate est;
  summarize(est, radii, values, window);
  return est;
}

double inverse_volume_resistance(const OffspringDistribution& dist, double n) {
  const ScalingSequence a = scaling_sequence(dist);
  auto vr = [&](double m) { return m * a(m); };
  double lo = 1e-12, hi = 1.0;
  while (vr(hi) < n) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (vr(mid) < n ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double total_variation(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("total_variation: empty sample");
  std::map<std::string, std::pair<double, double>> freq;
  for (const auto& s : a) freq[s].first += 1.0 / a.size();
  for (const auto& s : b) freq[s].second += 1.0 / b.size();
  double tv = 0.0;
  for (const auto& [key, f] : freq) tv += std::abs(f.first - f.second);
  return 0.5 * tv;
}

std::vector<std::string> sample_ball_classes(const OffspringDistribution& dist, std::uint32_t radius,
                                             std::size_t samples, std::uint64_t seed) {
  std::vector<std::string> out(samples);
  Rng rng = Rng::substream(seed, 0);
  for (auto& s : out) s = canonical_form(generate_loopspine_ball(dist, radius, rng).graph);
  return out;
}

std::vector<LocalLimitRow> local_limit_test(const OffspringDistribution& dist, const std::vector<std::size_t>& sizes,
                                            std::uint32_t radius, std::size_t samples, std::uint64_t seed) {
  constexpr int kNullRounds = 20;
  const auto reference = sample_ball_classes(dist, radius, samples, seed);
  std::vector<LocalLimitRow> rows;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    Rng rng = Rng::substream(seed, 1 + k);
    std::vector<std::string> finite(samples);
    for (auto& s : finite) {
      const PlaneTree t = sample_gw_conditioned(dist, sizes[k], rng, 100000000);
      s = canonical_form(ball(loop_transform(t), radius));
    }
    LocalLimitRow row;
    row.n = sizes[k];
    row.tv = total_variation(finite, reference);

    std::vector<std::string> pooled = finite;
    pooled.insert(pooled.end(), reference.begin(), reference.end());
    std::vector<double> null_tv;
    for (int r = 0; r < kNullRounds; ++r) {
      for (std::size_t i = pooled.size() - 1; i > 0; --i) std::swap(pooled[i], pooled[rng.uniform_int(0, i)]);
      const std::vector<std::string> left(pooled.begin(), pooled.begin() + static_cast<std::ptrdiff_t>(samples));
      const std::vector<std::string> right(pooled.begin() + static_cast<std::ptrdiff_t>(samples), pooled.end());
      null_tv.push_back(total_variation(left, right));
    }
    const MeanEstimate m = mean_estimate(null_tv);
    row.null_mean = m.mean;
    row.null_sd = m.std_error * std::sqrt(static_cast<double>(kNullRounds));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace looptree
