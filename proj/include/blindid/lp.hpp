#pragma once

#include <Eigen/Dense>

namespace blindid {

enum class LpStatus { optimal, infeasible, unbounded };

// min ||d||_inf subject to Bt * d = z, d free.
struct ChebyshevSolution {
  Eigen::VectorXd d;
  double value = 0.0;  // ||d||_inf at the optimum
  LpStatus status = LpStatus::optimal;
  int iterations = 0;
};

// min ||y - X g||_1 (optionally weighted), g free. The objective value is
// unique; g itself may not be and is fixed by the deterministic pivot order.
struct L1RegressionSolution {
  Eigen::VectorXd g;
  double objective = 0.0;
  LpStatus status = LpStatus::optimal;
  int iterations = 0;
};

// Chebyshev-norm minimization under equality constraints. Bt is delta x m
// and must have full row rank; throws rank_error otherwise. The optimal
// value is exact to within 1e-9.
ChebyshevSolution solve_chebyshev(const Eigen::MatrixXd& Bt,
                                  const Eigen::VectorXd& z);

// Global l1 regression, m >= delta >= 1.
L1RegressionSolution solve_l1_regression(const Eigen::MatrixXd& X,
                                         const Eigen::VectorXd& y);

// Same with strictly positive per-row weights w: min sum_i w_i |y_i - (Xg)_i|.
L1RegressionSolution solve_l1_regression_weighted(const Eigen::MatrixXd& X,
                                                  const Eigen::VectorXd& y,
                                                  const Eigen::VectorXd& w);

// min c'x subject to A x = b, x >= 0. Dense two-phase simplex with Bland's
// anti-cycling rule; the basis is refactored every pivot, which keeps the
// numerics fresh at the problem sizes this library deals with.
struct SimplexOutcome {
  Eigen::VectorXd x;
  double value = 0.0;
  LpStatus status = LpStatus::optimal;
  int iterations = 0;
};

SimplexOutcome solve_standard_form(Eigen::MatrixXd A, Eigen::VectorXd b,
                                   const Eigen::VectorXd& c);

}  // namespace blindid
