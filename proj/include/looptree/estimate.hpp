#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "looptree/offspring.hpp"

namespace looptree {

using Point = std::pair<double, double>;

/// Closed interval [lo, hi] of n values used by a fit.
struct FitWindow {
  double lo = 0.0;
  double hi = 0.0;
};

/// log y = intercept + slope log n, least squares.
struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double std_error = 0.0;
  FitWindow window;
  std::size_t points = 0;
};

/// Throws std::invalid_argument with fewer than 4 points in the window or a
/// non-positive coordinate.
ExponentFit fit_exponent(const std::vector<Point>& points, std::optional<FitWindow> window = std::nullopt);

/// Upper dyadic half [n_max/2, n_max] when it holds at least 4 of the n
/// values, otherwise the full range.
FitWindow default_window(const std::vector<double>& n);

double ds_theory(double alpha);

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};
MeanEstimate mean_estimate(const std::vector<double>& samples);

struct DsEstimate {
  ExponentFit fit;
  double ds = 0.0;
  double ds_std_error = 0.0;
  double theory = 0.0;
  /// (n, p_2n) for the quenched mode, (n, mean p_2n) for the annealed one.
  std::vector<Point> points;
};

/// One realization, ball radius 2 n_max + 1, exact kernel.
DsEstimate estimate_ds_quenched(const OffspringDistribution& dist, std::uint64_t seed, std::uint32_t n_max,
                                std::optional<FitWindow> window = std::nullopt);

/// Average of the exact p_2n over independent realizations (substreams of seed).
DsEstimate estimate_ds_annealed(const OffspringDistribution& dist, std::size_t realizations, std::uint32_t n_max,
                                std::uint64_t seed, std::optional<FitWindow> window = std::nullopt);

struct LevelEstimate {
  ExponentFit fit;
  std::vector<double> n;
  std::vector<double> mean;
  std::vector<double> std_error;
};

struct VolumeEstimate : LevelEstimate {
  /// mean / a_n per level; empty when the law has no scaling sequence.
  std::vector<double> ratio;
};

/// E|B(n)| (vertices at distance < n) over realizations; fit over all radii
/// unless a window is given.
VolumeEstimate estimate_volume_exponent(const OffspringDistribution& dist, std::size_t realizations,
                                        const std::vector<std::uint32_t>& radii, std::uint64_t seed,
                                        std::optional<FitWindow> window = std::nullopt);

struct ResistanceEstimate : LevelEstimate {
  /// Cases (over realizations and levels) where D_n/2 <= R_eff <= n failed
  /// or the separator did not separate.
  std::size_t sandwich_violations = 0;
  std::size_t sandwich_checks = 0;
};

ResistanceEstimate estimate_resistance_exponent(const OffspringDistribution& dist, std::size_t realizations,
                                                const std::vector<std::uint32_t>& levels, std::uint64_t seed,
                                                std::optional<FitWindow> window = std::nullopt);

/// E(T_R) over realizations, exact solves; fit over all radii by default.
LevelEstimate estimate_escape_exponent(const OffspringDistribution& dist, std::size_t realizations,
                                       const std::vector<std::uint32_t>& radii, std::uint64_t seed,
                                       std::optional<FitWindow> window = std::nullopt);

/// I(n): the m with m a_m = n, by bisection.
double inverse_volume_resistance(const OffspringDistribution& dist, double n);

/// Total-variation distance between the empirical laws of two samples.
double total_variation(const std::vector<std::string>& a, const std::vector<std::string>& b);

struct LocalLimitRow {
  std::size_t n = 0;
  double tv = 0.0;
  /// TV between random halves of the pooled sample (same-law noise level).
  double null_mean = 0.0;
  double null_sd = 0.0;
};

/// Empirical law of the rooted isomorphism class of B(R; Loop(T_N)) against
/// B(R; L), for each N.
std::vector<LocalLimitRow> local_limit_test(const OffspringDistribution& dist, const std::vector<std::size_t>& sizes,
                                            std::uint32_t radius, std::size_t samples, std::uint64_t seed);

/// Canonical forms of `samples` lazily generated balls B(R; L).
std::vector<std::string> sample_ball_classes(const OffspringDistribution& dist, std::uint32_t radius,
                                             std::size_t samples, std::uint64_t seed);

}  // namespace looptree
