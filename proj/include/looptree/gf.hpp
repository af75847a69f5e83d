#pragma once

#include <cstddef>
#include <vector>

#include "looptree/offspring.hpp"

namespace looptree {

struct ProgenyPgf {
  double value = 0.0;
  std::size_t iterations = 0;
  /// |g - s f(g)| at the returned g.
  double residual = 0.0;
};

/// g(s) = E(s^|tau|), the minimal solution of g = s f(g), by monotone
/// iteration from g = 0. Requires s in [0, 1); throws ConvergenceError after
/// 10^5 iterations.
ProgenyPgf progeny_pgf(const OffspringDistribution& dist, double s);

/// E(X^(n)) for n = 0..n_max, X^(n) the number of vertices of Loop(tau)
/// within distance n of its root:
///   E(X^(n)) = 1 + sum_{j=1}^{n} (2 P(xi >= 2j) + pi_{2j-1}) E(X^(n-j)).
std::vector<double> expected_outgrowth_volume(const OffspringDistribution& dist, std::size_t n_max);

/// Limit of E(X^(n)) n / a_n: 2 f''(1) / (3 + h(1) + f''(1)) when f''(1) is
/// finite, 2^(alpha-1) / Gamma(alpha) otherwise.
double m_constant(const OffspringDistribution& dist);

}  // namespace looptree
