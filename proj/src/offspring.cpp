#include "looptree/offspring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace looptree {

namespace {

constexpr double kHeadMassTolerance = 1e-12;
constexpr std::size_t kMaxHead = std::size_t{1} << 20;

// Bernoulli polynomial differences B_{k+1}(a) - B_{k+1}(0), k = 1..5.
double bernoulli_diff(int k, double a) {
  const double a2 = a * a, a3 = a2 * a, a4 = a3 * a, a5 = a4 * a, a6 = a5 * a;
  switch (k) {
    case 1: return a2 - a;
    case 2: return a3 - 1.5 * a2 + 0.5 * a;
    case 3: return a4 - 2.0 * a3 + a2;
    case 4: return a5 - 2.5 * a4 + (5.0 / 3.0) * a3 - a / 6.0;
    case 5: return a6 - 3.0 * a5 + 2.5 * a4 - 0.5 * a2;
    default: return 0.0;
  }
}

}  // namespace

double gamma_ratio(double z, double a) {
  if (!(z + a > 0.0)) throw std::domain_error("gamma_ratio: z + a must be positive");
  // Shift z upward until the asymptotic series is accurate to round-off.
  constexpr double kShift = 256.0;
  double factor = 1.0;
  while (z < kShift) {
    factor *= z / (z + a);
    z += 1.0;
  }
  double log_ratio = a * std::log(z);
  double zk = 1.0;
  for (int k = 1; k <= 5; ++k) {
    zk *= z;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    log_ratio += sign * bernoulli_diff(k, a) / (k * (k + 1) * zk);
  }
  return factor * std::exp(log_ratio);
}

double OffspringDistribution::tail_survival(std::uint64_t k) const {
  switch (family_) {
    case Family::Slack: {
      if (k == 0) return 1.0;
      if (k == 1) return 1.0 - c_;
      if (alpha_ >= 2.0) return k == 2 ? c_ : 0.0;
      // S(k) = c (alpha-1) Gamma(k-alpha) / (Gamma(2-alpha) Gamma(k)), k >= 2.
      return c_ * (alpha_ - 1.0) / std::tgamma(2.0 - alpha_) *
             gamma_ratio(static_cast<double>(k), -alpha_);
    }
    case Family::Geometric:
      return std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(k, 2000)));
    case Family::Tabulated:
      return k < probs_.size() ? survival_[k] : 0.0;
  }
  return 0.0;
}

double OffspringDistribution::tail_biased_survival(std::uint64_t k) const {
  if (k <= 1) return 1.0;
  switch (family_) {
    case Family::Slack:
      if (alpha_ >= 2.0) return k == 2 ? 2.0 * c_ : 0.0;
      return tail_survival(k) * static_cast<double>(k - 1) * alpha_ / (alpha_ - 1.0);
    case Family::Geometric:
      return static_cast<double>(k + 1) * tail_survival(k);
    case Family::Tabulated:
      return k < probs_.size() ? biased_survival_[k] : 0.0;
  }
  return 0.0;
}

void OffspringDistribution::finalize() {
  const std::size_t head = probs_.size();
  survival_.assign(head + 1, 0.0);
  biased_survival_.assign(head + 1, 0.0);
  if (family_ != Family::Tabulated) {
    survival_[head] = tail_survival(head);
    biased_survival_[head] = tail_biased_survival(head);
  }
  for (std::size_t k = head; k-- > 0;) {
    survival_[k] = survival_[k + 1] + probs_[k];
    biased_survival_[k] = biased_survival_[k + 1] + static_cast<double>(k) * probs_[k];
  }
  total_mass_ = survival_[0];
  mean_ = biased_survival_[0];
  if (std::abs(total_mass_ - 1.0) > kHeadMassTolerance) {
    std::ostringstream os;
    os << "offspring law has total mass " << total_mass_ << ", expected 1";
    throw std::invalid_argument(os.str());
  }
  survival_[0] = 1.0;
  biased_survival_[0] = 1.0;
  if (head > 1) biased_survival_[1] = 1.0;
}

double OffspringDistribution::prob(std::uint64_t k) const {
  if (k < probs_.size()) return probs_[k];
  switch (family_) {
    case Family::Slack:
      if (alpha_ >= 2.0) return 0.0;
      return alpha_ * tail_survival(k) / static_cast<double>(k);
    case Family::Geometric:
      return 0.5 * tail_survival(k);
    case Family::Tabulated:
      return 0.0;
  }
  return 0.0;
}

double OffspringDistribution::survival(std::uint64_t k) const {
  if (k < survival_.size()) return survival_[k];
  return family_ == Family::Tabulated ? 0.0 : tail_survival(k);
}

double OffspringDistribution::biased_survival(std::uint64_t k) const {
  if (k < biased_survival_.size()) return biased_survival_[k];
  return family_ == Family::Tabulated ? 0.0 : tail_biased_survival(k);
}

double OffspringDistribution::second_factorial_moment() const {
  switch (family_) {
    case Family::Slack:
      return alpha_ < 2.0 ? std::numeric_limits<double>::infinity() : 2.0 * c_;
    case Family::Geometric:
      return 2.0;
    case Family::Tabulated: {
      double m = 0.0;
      for (std::size_t k = 2; k < probs_.size(); ++k)
        m += static_cast<double>(k) * static_cast<double>(k - 1) * probs_[k];
      return m;
    }
  }
  return 0.0;
}

double OffspringDistribution::odd_mass() const { return 0.5 * (1.0 - pgf_unchecked(-1.0)); }

double OffspringDistribution::pgf_unchecked(double s) const {
  switch (family_) {
    case Family::Slack:
      return s + c_ * std::pow(1.0 - s, alpha_);
    case Family::Geometric:
      return 1.0 / (2.0 - s);
    case Family::Tabulated: {
      double acc = 0.0;
      for (std::size_t k = probs_.size(); k-- > 0;) acc = acc * s + probs_[k];
      return acc;
    }
  }
  return 0.0;
}

std::uint64_t OffspringDistribution::invert_tail(double v, bool biased) const {
  auto surv = [&](std::uint64_t k) { return biased ? tail_biased_survival(k) : tail_survival(k); };
  // Invariant: surv(lo) >= v. Find the largest such k.
  std::uint64_t lo = probs_.size();
  std::uint64_t step = 1;
  std::uint64_t hi = lo + step;
  while (surv(hi) >= v) {
    lo = hi;
    if (hi >= kMaxValue) return kMaxValue;
    step *= 2;
    hi = std::min(kMaxValue, lo + step);
    if (hi == lo) return kMaxValue;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (surv(mid) >= v) lo = mid;
    else hi = mid;
  }
  return lo;
}

std::uint64_t OffspringDistribution::sample(Rng& rng) const {
  const double v = rng.uniform_pos();
  if (family_ == Family::Geometric) {
    // max{k : 2^-k >= v}, read off the binary exponent of v.
    int e = 0;
    const double m = std::frexp(v, &e);
    return static_cast<std::uint64_t>(m == 0.5 ? 1 - e : -e);
  }
  auto it = std::partition_point(survival_.begin(), survival_.end(), [v](double s) { return s >= v; });
  if (it == survival_.end()) return invert_tail(v, false);
  return static_cast<std::uint64_t>(it - survival_.begin()) - 1;
}

std::uint64_t OffspringDistribution::sample_size_biased(Rng& rng) const {
  const double v = rng.uniform_pos();
  auto it = std::partition_point(biased_survival_.begin(), biased_survival_.end(),
                                 [v](double s) { return s >= v; });
  if (it == biased_survival_.end()) return invert_tail(v, true);
  return static_cast<std::uint64_t>(it - biased_survival_.begin()) - 1;
}

bool OffspringDistribution::is_identically_one() const {
  return probs_.size() >= 2 && probs_[1] == 1.0;
}

std::string OffspringDistribution::describe() const {
  std::ostringstream os;
  switch (family_) {
    case Family::Slack:
      os << "slack(alpha=" << alpha_ << ",c=" << c_ << ")";
      break;
    case Family::Geometric:
      os << "geometric_half";
      break;
    case Family::Tabulated:
      os << "tabulated[";
      for (std::size_t k = 0; k < probs_.size(); ++k) os << (k ? "," : "") << probs_[k];
      os << "]";
      break;
  }
  return os.str();
}

OffspringDistribution make_slack(double alpha, double c) {
  if (!(alpha > 1.0)) throw std::domain_error("slack: alpha must be > 1");
  if (!(alpha <= 2.0)) throw std::domain_error("slack: alpha must be <= 2");
  if (!(c > 0.0)) throw std::domain_error("slack: c must be > 0");
  if (!(c <= 1.0 / alpha)) throw std::domain_error("slack: c must be <= 1/alpha (pi_1 = 1 - c*alpha < 0)");

  OffspringDistribution d;
  d.family_ = Family::Slack;
  d.alpha_ = alpha;
  d.c_ = c;
  d.l_const_ = c;
  d.probs_ = {c, 1.0 - c * alpha};
  // |binom(alpha, k)| via the ratio recurrence, starting at k = 2.
  double b = alpha * (alpha - 1.0) / 2.0;
  for (std::size_t k = 2; k <= kMaxHead; ++k) {
    d.probs_.push_back(c * b);
    if (d.tail_survival(k + 1) <= kHeadMassTolerance) break;
    b *= (static_cast<double>(k) - alpha) / static_cast<double>(k + 1);
  }
  d.finalize();
  return d;
}

OffspringDistribution make_geometric_half() {
  OffspringDistribution d;
  d.family_ = Family::Geometric;
  d.alpha_ = 2.0;
  d.l_const_ = 1.0;
  for (int k = 0;; ++k) {
    d.probs_.push_back(std::ldexp(1.0, -(k + 1)));
    if (std::ldexp(1.0, -(k + 1)) <= kHeadMassTolerance) break;
  }
  d.finalize();
  return d;
}

OffspringDistribution make_tabulated(std::vector<double> probs) {
  if (probs.empty()) throw std::invalid_argument("tabulated law: empty table");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("tabulated law: entries must be >= 0");
    total += p;
  }
  if (!(total > 0.0)) throw std::invalid_argument("tabulated law: total mass is zero");
  double mean = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    probs[k] /= total;
    mean += static_cast<double>(k) * probs[k];
  }
  if (std::abs(mean - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "tabulated law is not critical: mean " << mean;
    throw std::invalid_argument(os.str());
  }
  while (probs.size() > 1 && probs.back() == 0.0) probs.pop_back();

  OffspringDistribution d;
  d.family_ = Family::Tabulated;
  d.alpha_ = 2.0;
  d.probs_ = std::move(probs);
  d.finalize();
  d.l_const_ = d.second_factorial_moment() / 2.0;
  return d;
}

double pgf(const OffspringDistribution& dist, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("pgf: s must lie in [0, 1]");
  if (s == 1.0) return 1.0;
  return dist.pgf_unchecked(s);
}

double ScalingSequence::operator()(double n) const {
  if (!(l_const > 0.0)) throw std::domain_error("scaling sequence undefined: L must be positive");
  return std::pow(n, alpha) / l_const;
}

ScalingSequence scaling_sequence(const OffspringDistribution& dist) {
  return ScalingSequence{dist.alpha(), dist.l_const()};
}

double scaling_a(const OffspringDistribution& dist, double n) {
  if (!(n >= 1.0)) throw std::domain_error("scaling_a: n must be >= 1");
  return scaling_sequence(dist)(n);
}

}  // namespace looptree
