#include "blindid/lp.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "blindid/errors.hpp"

namespace blindid {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr int kMaxItersBase = 10000;

// One simplex phase over the column-extended system [A | I]. Artificial
// columns (index >= n_struct) are never allowed to enter; they only appear
// in the initial phase-1 basis. Entering variable: smallest index with a
// reduced cost below -tol (Bland). Leaving variable: ratio test, ties broken
// by smallest basis variable index (Bland).
LpStatus run_phase(const Eigen::MatrixXd& Afull, const Eigen::VectorXd& b,
                   const Eigen::VectorXd& cost, int n_enterable,
                   std::vector<int>& basis, Eigen::VectorXd& xB,
                   int& iterations) {
  const int m = static_cast<int>(Afull.rows());
  const int max_iters = kMaxItersBase + 50 * static_cast<int>(Afull.cols());
  const double tol_rc = 1e-9 * (1.0 + cost.cwiseAbs().maxCoeff());

  std::vector<char> is_basic(Afull.cols(), 0);
  for (int idx : basis) is_basic[idx] = 1;

  for (int iter = 0; iter < max_iters; ++iter) {
    Eigen::MatrixXd B(m, m);
    for (int i = 0; i < m; ++i) B.col(i) = Afull.col(basis[i]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    xB = lu.solve(b);
    xB += lu.solve(b - B * xB);  // one refinement step

    Eigen::VectorXd cB(m);
    for (int i = 0; i < m; ++i) cB[i] = cost[basis[i]];
    const Eigen::VectorXd y = Eigen::PartialPivLU<Eigen::MatrixXd>(B.transpose()).solve(cB);

    int entering = -1;
    for (int j = 0; j < n_enterable; ++j) {
      if (is_basic[j]) continue;
      const double rc = cost[j] - y.dot(Afull.col(j));
      if (rc < -tol_rc) {
        entering = j;
        break;
      }
    }
    if (entering < 0) return LpStatus::optimal;

    const Eigen::VectorXd w = lu.solve(Afull.col(entering));
    int leave = -1;
    double best_t = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (w[i] <= kPivotTol) continue;
      const double t = std::max(xB[i], 0.0) / w[i];
      if (t < best_t - 1e-12 || (std::abs(t - best_t) <= 1e-12 &&
                                 (leave < 0 || basis[i] < basis[leave]))) {
        best_t = t;
        leave = i;
      }
    }
    if (leave < 0) return LpStatus::unbounded;

    is_basic[basis[leave]] = 0;
    is_basic[entering] = 1;
    basis[leave] = entering;
    ++iterations;
  }
  throw std::runtime_error("simplex: iteration limit exceeded");
}

}  // namespace

SimplexOutcome solve_standard_form(Eigen::MatrixXd A, Eigen::VectorXd b,
                                   const Eigen::VectorXd& c) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (b.size() != m || c.size() != n)
    throw std::invalid_argument("solve_standard_form: dimension mismatch");

  for (int i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      A.row(i) = -A.row(i);
      b[i] = -b[i];
    }
  }

  Eigen::MatrixXd Afull(m, n + m);
  Afull << A, Eigen::MatrixXd::Identity(m, m);

  SimplexOutcome out;
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;
  Eigen::VectorXd xB = b;

  // Phase 1: minimize the artificial mass over all columns.
  Eigen::VectorXd cost1 = Eigen::VectorXd::Zero(n + m);
  cost1.tail(m).setOnes();
  run_phase(Afull, b, cost1, n, basis, xB, out.iterations);

  double artificial_mass = 0.0;
  for (int i = 0; i < m; ++i)
    if (basis[i] >= n) artificial_mass += std::max(xB[i], 0.0);
  if (artificial_mass > 1e-8 * (1.0 + b.cwiseAbs().maxCoeff())) {
    out.status = LpStatus::infeasible;
    out.x = Eigen::VectorXd::Zero(n);
    out.value = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  // Drive remaining artificials out of the basis where a structural pivot
  // exists; a row with none is redundant and its zero artificial stays.
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    Eigen::MatrixXd B(m, m);
    for (int r = 0; r < m; ++r) B.col(r) = Afull.col(basis[r]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    std::vector<char> is_basic(n + m, 0);
    for (int idx : basis) is_basic[idx] = 1;
    for (int j = 0; j < n; ++j) {
      if (is_basic[j]) continue;
      const Eigen::VectorXd w = lu.solve(Afull.col(j));
      if (std::abs(w[i]) > 1e-9) {
        basis[i] = j;
        break;
      }
    }
  }

  // Phase 2 on the original objective; artificials stay barred.
  Eigen::VectorXd cost2 = Eigen::VectorXd::Zero(n + m);
  cost2.head(n) = c;
  const LpStatus st = run_phase(Afull, b, cost2, n, basis, xB, out.iterations);
  if (st == LpStatus::unbounded) {
    out.status = LpStatus::unbounded;
    out.x = Eigen::VectorXd::Zero(n);
    out.value = -std::numeric_limits<double>::infinity();
    return out;
  }

  out.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) out.x[basis[i]] = std::max(xB[i], 0.0);
  out.value = c.dot(out.x);
  out.status = LpStatus::optimal;
  return out;
}

ChebyshevSolution solve_chebyshev(const Eigen::MatrixXd& Bt,
                                  const Eigen::VectorXd& z) {
  const int delta = static_cast<int>(Bt.rows());
  const int mvar = static_cast<int>(Bt.cols());
  if (z.size() != delta)
    throw std::invalid_argument("solve_chebyshev: z length must equal rows of Bt");
  if (delta < 1 || mvar < delta)
    throw std::invalid_argument("solve_chebyshev: need 1 <= rows <= cols");
  if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(Bt).rank() < delta)
    throw rank_error("solve_chebyshev: constraint matrix is row rank deficient");

  // Variables [d+ (m), d- (m), t (1), s (2m)]:
  //   Bt (d+ - d-)            = z
  //   (d+ - d-)_i - t + s_i   = 0
  //  -(d+ - d-)_i - t + s_m+i = 0
  const int nv = 2 * mvar + 1 + 2 * mvar;
  const int nc = delta + 2 * mvar;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nc, nv);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(nc);
  A.block(0, 0, delta, mvar) = Bt;
  A.block(0, mvar, delta, mvar) = -Bt;
  b.head(delta) = z;
  const int t_col = 2 * mvar;
  for (int i = 0; i < mvar; ++i) {
    A(delta + i, i) = 1.0;
    A(delta + i, mvar + i) = -1.0;
    A(delta + i, t_col) = -1.0;
    A(delta + i, t_col + 1 + i) = 1.0;
    A(delta + mvar + i, i) = -1.0;
    A(delta + mvar + i, mvar + i) = 1.0;
    A(delta + mvar + i, t_col) = -1.0;
    A(delta + mvar + i, t_col + 1 + mvar + i) = 1.0;
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nv);
  c[t_col] = 1.0;

  const SimplexOutcome lp = solve_standard_form(A, b, c);
  ChebyshevSolution sol;
  sol.status = lp.status;
  sol.iterations = lp.iterations;
  if (lp.status != LpStatus::optimal) {
    sol.d = Eigen::VectorXd::Zero(mvar);
    sol.value = std::numeric_limits<double>::quiet_NaN();
    return sol;
  }
  sol.d = lp.x.head(mvar) - lp.x.segment(mvar, mvar);
  sol.value = sol.d.size() > 0 ? sol.d.cwiseAbs().maxCoeff() : 0.0;
  return sol;
}

L1RegressionSolution solve_l1_regression_weighted(const Eigen::MatrixXd& X,
                                                  const Eigen::VectorXd& y,
                                                  const Eigen::VectorXd& w) {
  const int m = static_cast<int>(X.rows());
  const int delta = static_cast<int>(X.cols());
  if (y.size() != m)
    throw std::invalid_argument("solve_l1_regression: y length must equal rows of X");
  if (m < delta || delta < 1)
    throw std::invalid_argument("solve_l1_regression: need rows >= cols >= 1");
  if (w.size() != m || (w.array() <= 0.0).any())
    throw std::invalid_argument("solve_l1_regression: weights must be positive, length rows");

  // Variables [g+ (delta), g- (delta), r+ (m), r- (m)]:
  //   X (g+ - g-) + r+ - r- = y,  objective sum_i w_i (r+_i + r-_i).
  const int nv = 2 * delta + 2 * m;
  Eigen::MatrixXd A(m, nv);
  A << X, -X, Eigen::MatrixXd::Identity(m, m), -Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nv);
  c.segment(2 * delta, m) = w;
  c.tail(m) = w;

  const SimplexOutcome lp = solve_standard_form(A, y, c);
  L1RegressionSolution sol;
  sol.status = lp.status;
  sol.iterations = lp.iterations;
  if (lp.status != LpStatus::optimal) {
    sol.g = Eigen::VectorXd::Zero(delta);
    sol.objective = std::numeric_limits<double>::quiet_NaN();
    return sol;
  }
  sol.g = lp.x.head(delta) - lp.x.segment(delta, delta);
  sol.objective = (w.array() * (y - X * sol.g).array().abs()).sum();
  return sol;
}

L1RegressionSolution solve_l1_regression(const Eigen::MatrixXd& X,
                                         const Eigen::VectorXd& y) {
  return solve_l1_regression_weighted(X, y, Eigen::VectorXd::Ones(X.rows()));
}

}  // namespace blindid
