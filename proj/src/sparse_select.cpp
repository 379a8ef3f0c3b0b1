#include "blindid/sparse_select.hpp"

#include <Eigen/QR>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "blindid/errors.hpp"
#include "blindid/lp.hpp"

namespace blindid {

namespace {

constexpr double kIrl1Smoothing = 1e-8;
constexpr double kDescentTol = 1e-12;

double lp_power_sum(const Eigen::VectorXd& u, double p) {
  return u.array().abs().pow(p).sum();
}

// Minimizes sum_i |y_i - (Xg)_i|^p from g by reweighted l1 steps; a step is
// accepted only when the raw objective strictly improves, so the iterate
// sequence is monotone and a point where no step improves is returned as is.
std::pair<Eigen::VectorXd, int> irl1_minimize(const Eigen::MatrixXd& X,
                                              const Eigen::VectorXd& y,
                                              double p, Eigen::VectorXd g,
                                              int max_iter) {
  double current = lp_power_sum(y - X * g, p);
  int accepted = 0;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd residual = (y - X * g).cwiseAbs();
    const Eigen::VectorXd w = (residual.array() + kIrl1Smoothing).pow(p - 1.0);
    const L1RegressionSolution step = solve_l1_regression_weighted(X, y, w);
    const double candidate = lp_power_sum(y - X * step.g, p);
    if (candidate >= current - kDescentTol) break;
    g = step.g;
    current = candidate;
    ++accepted;
  }
  return {std::move(g), accepted};
}

Eigen::VectorXd assemble_filter(const ChannelVector& h, int Lp,
                                const Eigen::VectorXd& g) {
  const Eigen::MatrixXd H = shift_matrix(h, Lp);
  Eigen::VectorXd s(H.cols());
  s[0] = 1.0;
  s.tail(H.cols() - 1) = g;
  return H * s;
}

double plain_correlation(const Eigen::VectorXd& f, const ChannelVector& h, int Lp) {
  const Eigen::VectorXd ref = pad_to_order(h, Lp);
  return std::abs(f.dot(ref)) / (f.norm() * ref.norm());
}

}  // namespace

double objective_l1(const ChannelVector& h, int Lp, const Eigen::VectorXd& g) {
  return (tail_offset(h, Lp) + offset_matrix(h, Lp) * g).cwiseAbs().sum();
}

double objective_lp(const ChannelVector& h, int Lp, double p,
                    const Eigen::VectorXd& g) {
  return lp_power_sum(tail_offset(h, Lp) + offset_matrix(h, Lp) * g, p);
}

RecoveryResult solve_p1(const ChannelVector& h, int Lp) {
  const Eigen::MatrixXd Ht = offset_matrix(h, Lp);
  const Eigen::VectorXd y = tail_offset(h, Lp);
  const L1RegressionSolution lp = solve_l1_regression(-Ht, y);
  if (lp.status != LpStatus::optimal)
    throw std::runtime_error("solve_p1: l1 program did not reach optimality");

  RecoveryResult res;
  res.g_star = lp.g;
  res.objective = lp.objective;
  res.f_hat = assemble_filter(h, Lp, lp.g);
  res.correlation = plain_correlation(res.f_hat, h, Lp);
  res.iterations = lp.iterations;
  return res;
}

RecoveryResult solve_pp_local(const ChannelVector& h, int Lp, double p,
                              const Eigen::VectorXd& g0, int max_iter) {
  if (!(p > 0.0) || p >= 1.0)
    throw std::invalid_argument("solve_pp_local: p must lie in (0, 1)");
  if (max_iter < 0)
    throw std::invalid_argument("solve_pp_local: max_iter must be >= 0");
  const Eigen::MatrixXd Ht = offset_matrix(h, Lp);
  if (g0.size() != Ht.cols())
    throw std::invalid_argument("solve_pp_local: g0 length must equal Lp-L");
  const Eigen::VectorXd y = tail_offset(h, Lp);

  auto [g, accepted] = irl1_minimize(-Ht, y, p, g0, max_iter);

  RecoveryResult res;
  res.g_star = std::move(g);
  res.objective = lp_power_sum(y + Ht * res.g_star, p);
  res.f_hat = assemble_filter(h, Lp, res.g_star);
  res.correlation = plain_correlation(res.f_hat, h, Lp);
  res.iterations = accepted;
  return res;
}

RecoveryResult recover_from_kernel(const KernelBasis& kb, double p,
                                   const ChannelVector* truth) {
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument("recover_from_kernel: p must lie in (0, 1]");
  const int rows = static_cast<int>(kb.K.rows());
  const int k = kb.k;
  if (k < 1 || kb.K.cols() != k)
    throw std::invalid_argument("recover_from_kernel: empty kernel basis");

  for (int j = 0; j < rows; ++j) {
    const Eigen::RowVectorXd q = kb.K.row(j);
    const double qn2 = q.squaredNorm();
    if (qn2 < 1e-20) continue;  // functional vanishes on the span

    Eigen::VectorXd c = q.transpose() / qn2;  // (Kc)_j = 1
    int iterations = 0;
    Eigen::VectorXd alpha(0);
    if (k > 1) {
      // Null-space substitution turns the normalized problem into a plain
      // l1 regression over the remaining k-1 degrees of freedom.
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(q.transpose());
      const Eigen::MatrixXd Z =
          Eigen::MatrixXd(qr.householderQ()).rightCols(k - 1);
      const Eigen::MatrixXd X = -(kb.K * Z);
      const Eigen::VectorXd y = kb.K * c;
      const L1RegressionSolution l1 = solve_l1_regression(X, y);
      if (l1.status != LpStatus::optimal)
        throw std::runtime_error("recover_from_kernel: l1 program did not reach optimality");
      alpha = l1.g;
      iterations = l1.iterations;
      if (p < 1.0) {
        auto [refined, accepted] = irl1_minimize(X, y, p, alpha, 100);
        alpha = std::move(refined);
        iterations += accepted;
      }
      c += Z * alpha;
    }

    const Eigen::VectorXd f = kb.K * c;
    RecoveryResult res;
    res.objective = (p == 1.0) ? f.cwiseAbs().sum() : lp_power_sum(f, p);
    res.f_hat = f / f.norm();
    res.g_star = std::move(alpha);
    res.iterations = iterations;
    if (truth != nullptr) {
      const int Lp = rows / truth->M - 1;
      res.correlation = plain_correlation(res.f_hat, *truth, Lp);
    }
    return res;
  }
  throw normalization_error(
      "recover_from_kernel: every coordinate functional vanishes on the kernel span");
}

double recovery_success(const Eigen::VectorXd& f_hat, const ChannelVector& h,
                        int Lp) {
  const Eigen::MatrixXd H = shift_matrix(h, Lp);
  if (f_hat.size() != H.rows())
    throw std::invalid_argument("recovery_success: filter length must be M(Lp+1)");
  const double fn = f_hat.norm();
  if (fn == 0.0)
    throw std::domain_error("recovery_success: zero filter cannot be scored");
  const double hn = h.coeffs.norm();
  double best = 0.0;
  for (int s = 0; s < H.cols(); ++s)
    best = std::max(best, std::abs(f_hat.dot(H.col(s))) / (fn * hn));
  return best;
}

}  // namespace blindid
