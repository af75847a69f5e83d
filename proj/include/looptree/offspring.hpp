#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "looptree/rng.hpp"

namespace looptree {

enum class Family { Slack, Geometric, Tabulated };

/// A critical offspring law pi on {0, 1, 2, ...}.
///
/// The law is stored as an exactly tabulated head pi_0..pi_K together with
/// survival tables S(k) = P(xi >= k) and Sb(k) = P(hat xi >= k) for the
/// size-biased law. For the Slack and geometric families the survival
/// functions beyond the head are known in closed form, which is what the
/// samplers use when a uniform draw lands in the residual tail mass. Objects
/// are immutable after construction and safe to share between threads.
class OffspringDistribution {
 public:
  /// Largest value the samplers return; draws beyond it saturate.
  static constexpr std::uint64_t kMaxValue = std::uint64_t{1} << 62;

  Family family() const { return family_; }
  double alpha() const { return alpha_; }
  /// Constant value of the slowly varying function L used by a_n.
  double l_const() const { return l_const_; }
  /// Slack parameter c (0 for other families).
  double slack_c() const { return c_; }

  /// Tabulated head pi_0..pi_K.
  std::span<const double> head() const { return probs_; }
  std::size_t head_size() const { return probs_.size(); }

  /// P(xi = k) for any k.
  double prob(std::uint64_t k) const;
  /// P(xi >= k).
  double survival(std::uint64_t k) const;
  /// P(hat xi >= k), hat xi the size-biased law k * pi_k.
  double biased_survival(std::uint64_t k) const;

  /// Sum of pi_k (head plus analytic tail).
  double total_mass() const { return total_mass_; }
  /// Sum of k * pi_k (head plus analytic tail).
  double mean() const { return mean_; }
  /// f''(1), +inf when the variance is infinite.
  double second_factorial_moment() const;
  /// h(1) = sum of pi over odd k.
  double odd_mass() const;

  /// Generating function at s in [-1, 1]. No range check.
  double pgf_unchecked(double s) const;

  std::uint64_t sample(Rng& rng) const;
  std::uint64_t sample_size_biased(Rng& rng) const;

  /// True when xi == 1 almost surely.
  bool is_identically_one() const;

  /// Short human-readable label, e.g. "slack(alpha=1.5,c=0.5)".
  std::string describe() const;

  friend OffspringDistribution make_slack(double alpha, double c);
  friend OffspringDistribution make_geometric_half();
  friend OffspringDistribution make_tabulated(std::vector<double> probs);

 private:
  OffspringDistribution() = default;
  void finalize();
  double tail_survival(std::uint64_t k) const;
  double tail_biased_survival(std::uint64_t k) const;
  std::uint64_t invert_tail(double v, bool biased) const;

  Family family_ = Family::Tabulated;
  double alpha_ = 2.0;
  double c_ = 0.0;
  double l_const_ = 0.0;
  double total_mass_ = 1.0;
  double mean_ = 1.0;
  std::vector<double> probs_;
  // survival_[k] = P(xi >= k) for k = 0..K+1; likewise for the biased law.
  std::vector<double> survival_;
  std::vector<double> biased_survival_;
};

/// Slack family with generating function f(s) = s + c (1 - s)^alpha.
/// Requires alpha in (1, 2] and c in (0, 1/alpha]; throws std::domain_error.
OffspringDistribution make_slack(double alpha, double c);

/// pi_k = 2^-(k+1); finite variance, alpha = 2, L = f''(1)/2 = 1.
OffspringDistribution make_geometric_half();

/// Finite table, normalized on input. Throws std::invalid_argument unless the
/// normalized law has mean 1 within 1e-9.
OffspringDistribution make_tabulated(std::vector<double> probs);

/// Generating function E(s^xi), s in [0, 1].
double pgf(const OffspringDistribution& dist, double s);

inline std::uint64_t sample(const OffspringDistribution& dist, Rng& rng) { return dist.sample(rng); }
inline std::uint64_t sample_size_biased(const OffspringDistribution& dist, Rng& rng) {
  return dist.sample_size_biased(rng);
}

/// The scaling sequence a_n = n^alpha / L.
struct ScalingSequence {
  double alpha = 2.0;
  double l_const = 1.0;
  double operator()(double n) const;
};

ScalingSequence scaling_sequence(const OffspringDistribution& dist);

/// a_n = n^alpha / L for n >= 1.
double scaling_a(const OffspringDistribution& dist, double n);

/// Gamma(z + a) / Gamma(z) for z >= 1 and a > -z, accurate for large z.
double gamma_ratio(double z, double a);

}  // namespace looptree
