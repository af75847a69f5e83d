#include "looptree/gf.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "looptree/looptree.hpp"

namespace looptree {

ProgenyPgf progeny_pgf(const OffspringDistribution& dist, double s) {
  if (!(s >= 0.0 && s < 1.0)) throw std::domain_error("progeny_pgf: s must lie in [0, 1)");
  constexpr double kTolerance = 1e-13;
  constexpr std::size_t kMaxIterations = 100000;
  ProgenyPgf out;
  double g = 0.0;
  for (out.iterations = 1; out.iterations <= kMaxIterations; ++out.iterations) {
    const double next = s * dist.pgf_unchecked(g);
    out.residual = std::abs(next - s * dist.pgf_unchecked(next));
    g = next;
    if (out.residual <= kTolerance) {
      out.value = g;
      return out;
    }
  }
  std::ostringstream os;
  os << "progeny_pgf: no convergence at s=" << s << " (residual " << out.residual << ")";
  throw ConvergenceError(out.residual, os.str());
}

std::vector<double> expected_outgrowth_volume(const OffspringDistribution& dist, std::size_t n_max) {
  std::vector<double> coef(n_max + 1, 0.0);
  for (std::size_t j = 1; j <= n_max; ++j) coef[j] = 2.0 * dist.survival(2 * j) + dist.prob(2 * j - 1);
  std::vector<double> ex(n_max + 1, 0.0);
  ex[0] = 1.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    // Kahan summation; the terms span many orders of magnitude for heavy tails.
    double sum = 1.0, comp = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      const double y = coef[j] * ex[n - j] - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    ex[n] = sum;
  }
  return ex;
}

double m_constant(const OffspringDistribution& dist) {
  const double f2 = dist.second_factorial_moment();
  if (std::isfinite(f2)) return 2.0 * f2 / (3.0 + dist.odd_mass() + f2);
  return std::pow(2.0, dist.alpha() - 1.0) / std::tgamma(dist.alpha());
}

}  // namespace looptree
