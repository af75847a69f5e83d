#pragma once

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <limits>
#include <sstream>
#include <vector>

#include "looptree/looptree.hpp"

namespace looptree::detail {

inline constexpr double kResidualTarget = 1e-10;

// Normwise backward error |Ax - b| / (|A| |x| + |b|), infinity norms.
inline double backward_error(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& b) {
  double norm_a = 0.0;
  Eigen::VectorXd row = Eigen::VectorXd::Zero(a.rows());
  for (Eigen::Index k = 0; k < a.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) row[it.row()] += std::abs(it.value());
  if (row.size() > 0) norm_a = row.maxCoeff();
  const double denom = norm_a * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>();
  if (!(denom > 0.0)) return 0.0;
  return (a * x - b).lpNorm<Eigen::Infinity>() / denom;
}

// Symmetric positive definite system; sparse LDL^T first, conjugate gradient
// if the factorization is unusable. Throws ConvergenceError above target.
inline Eigen::VectorXd solve_spd(Eigen::Index n, const std::vector<Eigen::Triplet<double>>& entries,
                                 const Eigen::VectorXd& rhs, double* residual) {
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();
  Eigen::VectorXd x;
  double res = std::numeric_limits<double>::infinity();

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
  if (ldlt.info() == Eigen::Success) {
    x = ldlt.solve(rhs);
    res = backward_error(a, x, rhs);
    for (int it = 0; it < 3 && !(res <= kResidualTarget); ++it) {
      x += ldlt.solve(rhs - a * x);
      res = backward_error(a, x, rhs);
    }
  }
  if (!(res <= kResidualTarget)) {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg(a);
    cg.setTolerance(kResidualTarget * 0.1);
    cg.setMaxIterations(100000);
    x = cg.solve(rhs);
    res = backward_error(a, x, rhs);
  }
  if (residual) *residual = res;
  if (!(res <= kResidualTarget)) {
    std::ostringstream os;
    os << "linear solve did not converge: backward error " << res;
    throw ConvergenceError(res, os.str());
  }
  return x;
}

}  // namespace looptree::detail
